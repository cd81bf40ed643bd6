"""Edge-preserving weighted least squares smoothing.

Solves ``(I + strength * L_g) u = f`` where ``L_g`` is the 5-point Laplacian
whose edge weights come from the log-guide,
``w = 1 / (|d log(guide + floor)|**exponent + floor)``. Boundaries are
Neumann: only edges between in-image neighbours exist.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg

from .errors import ConvergenceError


@dataclass(frozen=True)
class WlsParams:
    strength: float = 1.0
    exponent: float = 1.2
    guide_floor: float = 1e-4
    solver_tolerance: float = 1e-6
    max_solver_iterations: int = 2000

    def __post_init__(self):
        for name in ("strength", "exponent", "guide_floor", "solver_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"WlsParams.{name} must be > 0")
        if self.max_solver_iterations < 1:
            raise ValueError("WlsParams.max_solver_iterations must be >= 1")


def edge_weights(guide, params):
    """Horizontal ``(H, W-1)`` and vertical ``(H-1, W)`` affinities, pre-scaled by strength."""
    log_guide = np.log(np.asarray(guide, dtype=np.float64) + params.guide_floor)
    dx = np.abs(np.diff(log_guide, axis=1))
    dy = np.abs(np.diff(log_guide, axis=0))
    wx = params.strength / (dx ** params.exponent + params.guide_floor)
    wy = params.strength / (dy ** params.exponent + params.guide_floor)
    return wx, wy


def wls_system(guide, params):
    """Sparse SPD matrix ``I + strength * L_g`` in CSR form (row-major pixel order)."""
    h, w = guide.shape
    n = h * w
    wx, wy = edge_weights(guide, params)
    idx = np.arange(n).reshape(h, w)

    rows = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    cols = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    vals = np.concatenate([wx.ravel(), wy.ravel()])

    diag = np.ones(n)
    np.add.at(diag, rows, vals)
    np.add.at(diag, cols, vals)
    off = sp.coo_matrix((-vals, (rows, cols)), shape=(n, n))
    return (off + off.T + sp.diags(diag)).tocsr()


def wls_smooth(values, guide, params=None):
    """Smooth ``values`` while keeping the edges present in ``guide``.

    Raises ``ConvergenceError`` when CG does not reach the relative residual
    ``params.solver_tolerance`` within ``params.max_solver_iterations``.
    """
    params = params or WlsParams()
    values = np.asarray(values, dtype=np.float64)
    guide = np.asarray(guide, dtype=np.float64)
    if values.shape != guide.shape or values.ndim != 2:
        raise ValueError(f"input {values.shape} and guide {guide.shape} must be equal 2-D shapes")

    b = values.ravel()
    if not np.any(b):
        return np.zeros_like(values)

    a = wls_system(guide, params)
    inv_diag = 1.0 / a.diagonal()
    jacobi = LinearOperator(a.shape, matvec=lambda x: inv_diag * x, dtype=np.float64)
    u, info = cg(a, b, x0=b.copy(), rtol=params.solver_tolerance, atol=0.0,
                 maxiter=params.max_solver_iterations, M=jacobi)
    if info != 0:
        rel = np.linalg.norm(b - a @ u) / np.linalg.norm(b)
        raise ConvergenceError(
            f"WLS solve did not converge in {params.max_solver_iterations} iterations "
            f"(relative residual {rel:.2e})"
        )
    return u.reshape(values.shape)
