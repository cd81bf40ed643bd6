"""Colour clustering of pixels by their direction on the unit RGB sphere."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .image_core import check_rgb

MIN_CENTERS = 16
NEUTRAL_DIRECTION = np.full(3, 1.0 / np.sqrt(3.0))


@dataclass(frozen=True)
class SphereCodebook:
    centers: np.ndarray
    tree: cKDTree

    @property
    def size(self):
        return len(self.centers)

    @classmethod
    def from_centers(cls, centers):
        centers = np.asarray(centers, dtype=np.float64)
        centers = centers / np.linalg.norm(centers, axis=1, keepdims=True)
        centers.setflags(write=False)
        return cls(centers, cKDTree(centers))


@dataclass
class ClusterAssignment:
    labels: np.ndarray              # (H, W) int
    radii: np.ndarray               # (H, W) RGB norms
    cluster_max_radius: np.ndarray  # (N,)
    cluster_count: np.ndarray       # (N,)

    @property
    def occupied(self):
        return np.flatnonzero(self.cluster_count)


def fibonacci_sphere(n):
    """``n`` nearly uniform points on the full unit sphere."""
    i = np.arange(n, dtype=np.float64) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def build_codebook(n=1000):
    if n < MIN_CENTERS:
        raise ValueError(f"codebook needs at least {MIN_CENTERS} centers, got {n}")
    return SphereCodebook.from_centers(fibonacci_sphere(n))


def pixel_directions(img):
    """Unit RGB directions and radii; black pixels point along the grey axis."""
    img = check_rgb(img)
    flat = img.reshape(-1, 3)
    radii = np.sqrt(np.sum(flat * flat, axis=1))
    dirs = np.empty_like(flat)
    nz = radii > 0
    dirs[nz] = flat[nz] / radii[nz, None]
    dirs[~nz] = NEUTRAL_DIRECTION
    return dirs, radii


def kmeans_codebook(img, n=1000, iterations=10, seed=0):
    """Spherical Lloyd iterations on the pixel directions of ``img``.

    Seeds are drawn from the distinct pixel directions; when the image has
    fewer distinct directions than ``n`` the remainder is filled from the
    Fibonacci lattice so that every center stays distinct.
    """
    if n < MIN_CENTERS:
        raise ValueError(f"codebook needs at least {MIN_CENTERS} centers, got {n}")
    dirs, _ = pixel_directions(img)
    rng = np.random.default_rng(seed)
    uniq = np.unique(np.round(dirs, 12), axis=0)
    take = min(n, len(uniq))
    centers = uniq[rng.choice(len(uniq), size=take, replace=False)]
    if take < n:
        centers = np.vstack([centers, fibonacci_sphere(n - take)])
    fixed = np.zeros(n, dtype=bool)
    fixed[take:] = True

    for _ in range(iterations):
        _, labels = cKDTree(centers).query(dirs)
        sums = np.zeros_like(centers)
        np.add.at(sums, labels, dirs)
        norms = np.linalg.norm(sums, axis=1)
        # empty or degenerate clusters keep their previous center
        move = (norms > 1e-12) & ~fixed
        centers[move] = sums[move] / norms[move, None]

    centers = np.unique(centers, axis=0)
    if len(centers) < n:
        extra = fibonacci_sphere(n)
        _, keep = cKDTree(centers).query(extra)
        dist = np.linalg.norm(extra - centers[keep], axis=1)
        order = np.argsort(-dist, kind="stable")
        centers = np.vstack([centers, extra[order[: n - len(centers)]]])
    return SphereCodebook.from_centers(centers)


def pixel_radius(rgb):
    rgb = np.asarray(rgb, dtype=np.float64)
    return np.sqrt(np.sum(rgb * rgb, axis=-1))


def assign_clusters(img, codebook):
    """Label each pixel with its angularly nearest codebook center.

    Euclidean nearest neighbour on unit vectors is monotone in the angle, so
    the KD-tree answer is the angular answer.
    """
    img = check_rgb(img)
    h, w = img.shape[:2]
    dirs, radii = pixel_directions(img)
    _, labels = codebook.tree.query(dirs)
    labels = labels.astype(np.intp)

    count = np.bincount(labels, minlength=codebook.size)
    max_radius = np.zeros(codebook.size)
    np.maximum.at(max_radius, labels, radii)
    return ClusterAssignment(
        labels=labels.reshape(h, w),
        radii=radii.reshape(h, w),
        cluster_max_radius=max_radius,
        cluster_count=count,
    )
