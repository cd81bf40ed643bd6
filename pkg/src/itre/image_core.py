"""Pixel containers and the small set of image operators shared by every stage.

Images are plain ``numpy`` arrays: colour images are ``(H, W, 3)`` float64 in
[0, 1], single-channel maps are ``(H, W)`` float64.
"""

import numpy as np

MIN_SIZE = 8

# BT.601 luma
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def to_unit_range(arr):
    """Convert an integer or float array to float64 samples in [0, 1].

    8-bit data is divided by 255 and 16-bit data by 65535; float input is
    clipped.
    """
    arr = np.asarray(arr)
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    if arr.dtype == np.uint16:
        return arr.astype(np.float64) / 65535.0
    if np.issubdtype(arr.dtype, np.integer) or arr.dtype == bool:
        raise ValueError(f"unsupported integer dtype {arr.dtype}")
    out = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise ValueError("image contains NaN or Inf")
    return np.clip(out, 0.0, 1.0)


def check_rgb(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) image, got shape {img.shape}")
    return img


def check_size(img):
    h, w = img.shape[:2]
    if h < MIN_SIZE or w < MIN_SIZE:
        raise ValueError(f"image must be at least {MIN_SIZE}x{MIN_SIZE}, got {h}x{w}")


def rgb_to_gray(img):
    img = check_rgb(img)
    return np.clip(img @ LUMA_WEIGHTS, 0.0, 1.0)


def luma_yuv(img):
    """Y plane of YUV. Shares the BT.601 weights with :func:`rgb_to_gray`."""
    return rgb_to_gray(img)


def rgb_to_hsv(img):
    """Hexcone HSV with hue scaled to [0, 1)."""
    img = check_rgb(img)
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    v = img.max(axis=2)
    c = v - img.min(axis=2)
    s = np.divide(c, v, out=np.zeros_like(v), where=v > 0)

    h = np.zeros_like(v)
    safe_c = np.where(c > 0, c, 1.0)
    rmax = (c > 0) & (v == r)
    gmax = (c > 0) & (v == g) & ~rmax
    bmax = (c > 0) & ~rmax & ~gmax
    h = np.where(rmax, ((g - b) / safe_c) % 6.0, h)
    h = np.where(gmax, (b - r) / safe_c + 2.0, h)
    h = np.where(bmax, (r - g) / safe_c + 4.0, h)
    h = (h / 6.0) % 1.0
    return np.stack([h, s, v], axis=2)


def forward_gradients(g):
    """Forward differences with periodic wrap. Returns ``(horizontal, vertical)``."""
    g = np.asarray(g, dtype=np.float64)
    dh = np.roll(g, -1, axis=1) - g
    dv = np.roll(g, -1, axis=0) - g
    return dh, dv


def gradients_adjoint(qh, qv):
    """Adjoint of :func:`forward_gradients`, i.e. ``D^T [qh; qv]``."""
    return (np.roll(qh, 1, axis=1) - qh) + (np.roll(qv, 1, axis=0) - qv)


def gradient_magnitude(g):
    dh, dv = forward_gradients(g)
    return np.hypot(dh, dv)


def minmax_normalize(g):
    """Min-max normalise into [0, 1]; a constant map becomes all zeros."""
    g = np.asarray(g, dtype=np.float64)
    lo, hi = g.min(), g.max()
    if hi <= lo:
        return np.zeros_like(g)
    return np.clip((g - lo) / (hi - lo), 0.0, 1.0)
