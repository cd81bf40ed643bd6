"""Initial illumination transmission ratio (ITR) from colour clusters.

Each pixel is compared to the brightest pixel of its colour cluster: the
ratio of its RGB radius to the cluster's maximum radius is the fraction of
illumination that reached it.
"""

import numpy as np

from .clustering import assign_clusters
from .image_core import check_rgb, rgb_to_gray
from .wls import WlsParams, wls_smooth

T_FLOOR = 0.01
DIV_EPS = 1e-6


def cluster_max_map(assign):
    """Broadcast every cluster's maximum radius back onto its pixels."""
    return assign.cluster_max_radius[assign.labels]


def initial_itr(assign, refined_max, t_floor=T_FLOOR):
    refined_max = np.asarray(refined_max, dtype=np.float64)
    if refined_max.shape != assign.radii.shape:
        raise ValueError(f"max map {refined_max.shape} does not match image {assign.radii.shape}")
    ratio = assign.radii / np.maximum(refined_max, DIV_EPS)
    return np.clip(ratio, t_floor, 1.0)


def wls_guide(gray):
    # peak-normalised so that a global gain on the image leaves the weights unchanged
    peak = gray.max()
    return gray / peak if peak > 0 else gray


def estimate_itr(img, codebook, wls=None, smooth=True, t_floor=T_FLOOR):
    """ITR map of ``img`` in ``[t_floor, 1]``.

    ``smooth=False`` skips the WLS refinement of the cluster-max map, which
    leaves every ratio at or below 1 without any clamping.
    """
    img = check_rgb(img)
    assign = assign_clusters(img, codebook)
    max_map = cluster_max_map(assign)
    if smooth:
        max_map = wls_smooth(max_map, wls_guide(rgb_to_gray(img)), wls or WlsParams())
    return initial_itr(assign, max_map, t_floor)
