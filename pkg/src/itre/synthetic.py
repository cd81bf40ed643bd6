"""Deterministic synthetic low-light scenes.

Scenes are ``reflectance * illumination + noise`` with a piecewise-constant
reflectance drawn from a small colour palette, a smooth illumination field
and 8-bit quantisation, so each colour is seen both well lit and in shadow.
"""

import colorsys

import numpy as np
from scipy import ndimage


def palette(rng, n, sat=(0.35, 1.0), val=(0.75, 1.0)):
    hues = (rng.random() + np.arange(n) / n + rng.uniform(-0.3, 0.3, n) / n) % 1.0
    return np.array([colorsys.hsv_to_rgb(h, rng.uniform(*sat), rng.uniform(*val)) for h in hues])


def voronoi_labels(rng, shape, n_cells):
    h, w = shape
    seeds = rng.random((n_cells, 2)) * [h, w]
    yy, xx = np.mgrid[0:h, 0:w]
    d = (yy[..., None] - seeds[:, 0]) ** 2 + (xx[..., None] - seeds[:, 1]) ** 2
    return d.argmin(axis=2)


def smooth_noise(rng, shape, sigma):
    field = ndimage.gaussian_filter(rng.standard_normal(shape), sigma, mode="wrap")
    return field / (np.abs(field).max() + 1e-12)


def illumination_field(rng, shape, n_lights=2, ambient=0.04):
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w] / max(h, w)
    light = np.zeros(shape)
    for _ in range(n_lights):
        cy, cx = rng.random(2) * [h / max(h, w), w / max(h, w)]
        spread = rng.uniform(0.15, 0.35)
        light += np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * spread ** 2))
    light /= light.max()
    return np.clip(ambient + (1.0 - ambient) * light, 0.0, 1.0)


def to_uint8(img):
    return np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def dark_scene(seed, size=256, n_colors=8, n_cells=200, n_lights=2, noise=0.004, texture=0.25):
    """A textured, colourful scene under uneven and mostly dim light, as ``uint8`` RGB."""
    rng = np.random.default_rng(seed)
    shape = (size, size)
    colors = palette(rng, n_colors)
    cells = voronoi_labels(rng, shape, n_cells)
    reflectance = colors[rng.integers(0, n_colors, n_cells)][cells]
    reflectance *= (1.0 + texture * smooth_noise(rng, shape, 1.0))[..., None]
    light = illumination_field(rng, shape, n_lights, ambient=rng.uniform(0.02, 0.06))
    light = light ** rng.uniform(2.5, 3.5)
    img = reflectance * light[..., None] + noise * rng.standard_normal((*shape, 3))
    return to_uint8(img)


def near_uniform_dark(seed=0, size=128, level=0.05):
    """Few colours, almost no intra-colour variation, very dark.

    Every cluster's brightest pixel is barely brighter than the rest, so the
    ITR sits near 1 everywhere.
    """
    rng = np.random.default_rng(seed)
    shape = (size, size)
    colors = palette(rng, 3, sat=(0.3, 0.6), val=(0.9, 1.0))
    cells = voronoi_labels(rng, shape, 6)
    reflectance = colors[np.arange(6) % 3][cells]
    light = level * (1.0 + 0.05 * smooth_noise(rng, shape, 6.0))
    return to_uint8(reflectance * light[..., None])


def color_diverse(seed=0, size=128):
    """Many saturated colours, each seen from full light down to deep shadow."""
    rng = np.random.default_rng(seed)
    shape = (size, size)
    colors = palette(rng, 16, sat=(0.6, 1.0), val=(1.0, 1.0))
    cells = voronoi_labels(rng, shape, 96)
    reflectance = colors[np.arange(96) % 16][cells]
    light = illumination_field(rng, shape, n_lights=1, ambient=0.05)
    return to_uint8(reflectance * light[..., None])


def regression_corpus(size=256):
    """The ten regression scenes, keyed by name. All have mean intensity below 0.16."""
    specs = [
        dict(n_colors=8, n_cells=200, n_lights=2),
        dict(n_colors=6, n_cells=120, n_lights=1),
        dict(n_colors=10, n_cells=300, n_lights=2),
        dict(n_colors=5, n_cells=150, n_lights=2),
        dict(n_colors=12, n_cells=400, n_lights=2),
        dict(n_colors=8, n_cells=100, n_lights=1),
        dict(n_colors=7, n_cells=250, n_lights=3, noise=0.008),
        dict(n_colors=9, n_cells=180, n_lights=2, noise=0.002),
        dict(n_colors=4, n_cells=100, n_lights=2),
        dict(n_colors=8, n_cells=220, n_lights=1, noise=0.006),
    ]
    return {f"scene{i:02d}": dark_scene(100 + i, size, **kw) for i, kw in enumerate(specs)}
