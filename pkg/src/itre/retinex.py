import numpy as np

from .image_core import check_rgb


def correct(img, t, eps1=0.1):
    """Recover reflectance ``S / (T + eps1)`` per channel, clipped to [0, 1]."""
    img = check_rgb(img)
    t = np.asarray(t, dtype=np.float64)
    if t.shape != img.shape[:2]:
        raise ValueError(f"transmission {t.shape} does not match image {img.shape[:2]}")
    return np.clip(img / (t[..., None] + eps1), 0.0, 1.0)
