"""No-reference quality measures: EME (block contrast) and DE (entropy).

Both work on the 8-bit quantised grey image.
"""

from dataclasses import dataclass

import numpy as np

from .image_core import rgb_to_gray


@dataclass
class MetricReport:
    image_id: str
    eme: float
    de: float


def quantize8(g):
    return np.round(np.clip(np.asarray(g, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def _as_gray(g):
    g = np.asarray(g, dtype=np.float64)
    return rgb_to_gray(g) if g.ndim == 3 else g


def block_edges(n, k):
    """``k + 1`` block boundaries over ``n`` samples; the remainder joins the last block."""
    step = n // k
    edges = np.arange(k + 1) * step
    edges[-1] = n
    return edges


def eme(g, blocks_h=8, blocks_v=8, guard=1.0):
    """Mean over a ``blocks_v x blocks_h`` grid of ``20 log10((max + guard) / (min + guard))``."""
    q = quantize8(_as_gray(g)).astype(np.float64)
    h, w = q.shape
    if h < blocks_v or w < blocks_h:
        raise ValueError(f"{h}x{w} image is smaller than the {blocks_v}x{blocks_h} block grid")
    rows, cols = block_edges(h, blocks_v), block_edges(w, blocks_h)
    total = 0.0
    for r0, r1 in zip(rows[:-1], rows[1:]):
        for c0, c1 in zip(cols[:-1], cols[1:]):
            block = q[r0:r1, c0:c1]
            total += 20.0 * np.log10((block.max() + guard) / (block.min() + guard))
    return total / (blocks_h * blocks_v)


def de(g):
    """Shannon entropy in bits of the 256-level histogram."""
    counts = np.bincount(quantize8(_as_gray(g)).ravel(), minlength=256)
    p = counts[counts > 0] / counts.sum()
    return float(max(0.0, -np.sum(p * np.log2(p))))


def report(img, image_id="", blocks=(8, 8)):
    return MetricReport(image_id=image_id, eme=float(eme(img, *blocks)), de=de(img))
