"""ADMM refinement of the transmission map with over-exposure feedback.

Minimises ``||T - target||^2 + lambda * ||grad T||_1`` with the splitting
``Q = grad T``. The T step is solved exactly in the Fourier domain under
periodic boundaries, Q by soft shrinkage, and an exposure map E computed from
the previous iterate is fed back into the T step.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft

from .errors import NumericalError
from .image_core import (
    check_rgb,
    forward_gradients,
    gradient_magnitude,
    gradients_adjoint,
    luma_yuv,
    minmax_normalize,
    rgb_to_gray,
    rgb_to_hsv,
)
from .itr import T_FLOOR


@dataclass(frozen=True)
class SolverConfig:
    alpha_exp: float = 0.25
    eps: float = 1e-3
    eps1: float = 0.1
    lambda_g: float = 1e-3
    rho0: float = 2.0
    p: float = 1.5
    max_iterations: int = 20
    convergence_tol: float = 1e-3
    t_floor: float = T_FLOOR
    warm_start: bool = True

    def __post_init__(self):
        if self.alpha_exp < 0:
            raise ValueError("alpha_exp must be >= 0")
        if self.rho0 <= 0:
            raise ValueError("rho0 must be > 0")
        if self.p <= 1:
            raise ValueError("p must be > 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.eps1 <= 0 or self.eps <= 0:
            raise ValueError("eps and eps1 must be > 0")


@dataclass
class SolverState:
    t: np.ndarray
    qh: np.ndarray
    qv: np.ndarray
    yh: np.ndarray
    yv: np.ndarray
    e: np.ndarray
    rho: float
    iteration: int = 0

    @classmethod
    def initial(cls, target, rho0, warm_start=True):
        """``T = target`` and zero duals; ``Q`` is ``grad target`` or, cold, zero."""
        z = np.zeros_like(target)
        qh, qv = forward_gradients(target) if warm_start else (z.copy(), z.copy())
        return cls(t=target.copy(), qh=qh, qv=qv, yh=z.copy(),
                   yv=z.copy(), e=z.copy(), rho=rho0)

    def residual(self):
        """Frobenius norms of ``Q - grad T`` and of ``grad T``."""
        gh, gv = forward_gradients(self.t)
        res = np.sqrt(np.sum((self.qh - gh) ** 2) + np.sum((self.qv - gv) ** 2))
        return res, np.sqrt(np.sum(gh ** 2) + np.sum(gv ** 2))


@dataclass
class SolveResult:
    state: SolverState
    lam: np.ndarray
    history: list = field(default_factory=list)

    @property
    def t(self):
        return self.state.t


def lambda_map(img, cfg):
    """Per-pixel smoothness weight: low on saturated colours and strong edges."""
    img = check_rgb(img)
    sat = rgb_to_hsv(img)[..., 1]
    grad = gradient_magnitude(luma_yuv(img))
    return np.exp(-sat ** 2) * cfg.lambda_g / (grad + cfg.eps)


def difference_spectrum(shape):
    """``sum_d conj(F(D_d)) * F(D_d)`` for the periodic forward differences."""
    h, w = shape
    kh = np.zeros(shape)
    kh[0, 0], kh[0, -1] = -1.0, 1.0
    kv = np.zeros(shape)
    kv[0, 0], kv[-1, 0] = -1.0, 1.0
    return np.abs(fft.fft2(kh)) ** 2 + np.abs(fft.fft2(kv)) ** 2


def shrink(x, thresh):
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def t_update(state, target, spectrum=None):
    spectrum = difference_spectrum(target.shape) if spectrum is None else spectrum
    rho = state.rho
    rhs = target + rho * gradients_adjoint(state.qh + state.yh / rho, state.qv + state.yv / rho)
    t = fft.ifft2((fft.fft2(rhs) + fft.fft2(state.e)) / (1.0 + rho * spectrum))
    imag = np.abs(t.imag).max()
    if imag >= 1e-8:
        raise NumericalError(f"T update left an imaginary residue of {imag:.2e}")
    return t.real


def q_update(state, lam):
    gh, gv = forward_gradients(state.t)
    thresh = lam / state.rho
    return shrink(gh - state.yh / state.rho, thresh), shrink(gv - state.yv / state.rho, thresh)


def dual_update(state, cfg):
    gh, gv = forward_gradients(state.t)
    return replace(
        state,
        yh=state.yh + state.rho * (state.qh - gh),
        yv=state.yv + state.rho * (state.qv - gv),
        rho=state.rho * cfg.p,
    )


def e_update(t, s_gray, cfg):
    if cfg.alpha_exp == 0:
        return np.zeros_like(t)
    return cfg.alpha_exp * minmax_normalize(s_gray / (t + cfg.eps1) - 1.0)


def objective(t, target, lam, s_gray, cfg):
    """Full energy: fidelity + weighted anisotropic TV + exposure penalty."""
    gh, gv = forward_gradients(t)
    value = np.sum((t - target) ** 2) + np.sum(lam * (np.abs(gh) + np.abs(gv)))
    if cfg.alpha_exp:
        value += cfg.alpha_exp * np.sum(minmax_normalize(s_gray / (t + cfg.eps1) - 1.0) ** 2)
    return float(value)


def _check_finite(state, iteration):
    for name in ("t", "qh", "qv", "yh", "yv", "e"):
        if not np.all(np.isfinite(getattr(state, name))):
            raise NumericalError(f"non-finite values in plane {name!r} at iteration {iteration}")


def solve(target, img, cfg=None, lam=None):
    """Run the ADMM loop and return the unclamped final state with its history.

    Stops after ``max_iterations`` or once both the relative change of T and
    the relative constraint residual ``|Q - grad T| / |grad T|`` fall below
    ``convergence_tol``.

    History rows hold ``iteration, objective, residual, rho`` where ``rho`` is
    the penalty used during that iteration.
    """
    cfg = cfg or SolverConfig()
    target = np.asarray(target, dtype=np.float64)
    img = check_rgb(img)
    if target.shape != img.shape[:2]:
        raise ValueError(f"target {target.shape} does not match image {img.shape[:2]}")
    lam = lambda_map(img, cfg) if lam is None else lam
    s_gray = rgb_to_gray(img)
    spectrum = difference_spectrum(target.shape)

    state = SolverState.initial(target, cfg.rho0, cfg.warm_start)
    history = []
    for k in range(1, cfg.max_iterations + 1):
        prev_t = state.t
        rho = state.rho
        state = replace(state, t=t_update(state, target, spectrum))
        qh, qv = q_update(state, lam)
        state = replace(state, qh=qh, qv=qv)
        res, grad_norm = state.residual()
        state = dual_update(state, cfg)
        state = replace(state, e=e_update(state.t, s_gray, cfg), iteration=k)
        _check_finite(state, k)
        history.append({
            "iteration": k,
            "objective": objective(state.t, target, lam, s_gray, cfg),
            "residual": float(res),
            "rho": rho,
        })
        change = np.linalg.norm(state.t - prev_t) / max(np.linalg.norm(prev_t), 1e-12)
        # a small step alone is not enough while Q and grad T still disagree
        if change < cfg.convergence_tol and res <= cfg.convergence_tol * grad_norm:
            break
    return SolveResult(state=state, lam=lam, history=history)


def refine_transmission(target, img, cfg=None, lam=None):
    cfg = cfg or SolverConfig()
    result = solve(target, img, cfg, lam)
    return np.clip(result.t, cfg.t_floor, 1.0)
