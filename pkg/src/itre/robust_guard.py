"""Robust-Guard: rescue enhancement when colour clusters are too uniform.

When every pixel of a cluster has nearly the same radius the ITR collapses
towards 1 and nothing gets brighter. The guard builds a rough illumination
map from the local maximum of the HSV value channel and remaps the ITR onto
its distribution.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .image_core import rgb_to_hsv
from .itr import T_FLOOR
from .wls import WlsParams, wls_smooth


@dataclass(frozen=True)
class RgParams:
    enabled: bool = False
    neighborhood_radius: int = 0   # 0 selects max(7, min(H, W) // 50)
    auto_trigger: bool = False
    auto_trigger_threshold: float = 0.7

    def __post_init__(self):
        if self.neighborhood_radius < 0:
            raise ValueError("neighborhood_radius must be >= 1, or 0 for automatic")
        if not 0 <= self.auto_trigger_threshold <= 1:
            raise ValueError("auto_trigger_threshold must lie in [0, 1]")

    def radius_for(self, shape):
        if self.neighborhood_radius:
            return self.neighborhood_radius
        return max(7, min(shape[:2]) // 50)


def neighborhood_max(v, radius):
    if radius < 1:
        raise ValueError("radius must be >= 1")
    return ndimage.maximum_filter(np.asarray(v, dtype=np.float64), size=2 * radius + 1, mode="nearest")


def histogram_match(source, reference):
    """Monotone remap of ``source`` onto the value distribution of ``reference``.

    The k-th smallest source sample takes the k-th reference quantile. Equal
    source values share the mean of the quantiles they span, so the mapping
    never reorders pixels and never splits a tie.
    """
    source = np.asarray(source, dtype=np.float64)
    src = source.ravel()
    ref = np.sort(np.asarray(reference, dtype=np.float64).ravel())
    n, m = src.size, ref.size
    if n == m:
        quantiles = ref
    else:
        quantiles = np.interp((np.arange(n) + 0.5) * m / n - 0.5, np.arange(m), ref)

    order = np.argsort(src, kind="stable")
    _, starts, counts = np.unique(src[order], return_index=True, return_counts=True)
    means = np.add.reduceat(quantiles, starts) / counts
    out = np.empty(n)
    out[order] = np.repeat(means, counts)
    return out.reshape(source.shape)


def should_trigger(itr, threshold=0.7):
    """True when even the darkest 5% of the ITR map sits above ``threshold``."""
    return bool(np.percentile(itr, 5) > threshold)


def rough_illumination(img, wls=None, radius=7):
    v = rgb_to_hsv(img)[..., 2]
    return wls_smooth(neighborhood_max(v, radius), v, wls or WlsParams())


def apply_rg(itr, img, wls=None, params=None, t_floor=T_FLOOR):
    params = params or RgParams()
    active = params.enabled or (params.auto_trigger and should_trigger(itr, params.auto_trigger_threshold))
    if not active:
        return itr
    tmp = rough_illumination(img, wls, params.radius_for(img.shape))
    return np.clip(histogram_match(itr, tmp), t_floor, 1.0)
