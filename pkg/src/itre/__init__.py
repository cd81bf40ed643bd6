"""Low-light image enhancement by illumination transmission ratio estimation."""

from .admm import SolverConfig, refine_transmission, solve
from .clustering import assign_clusters, build_codebook
from .config import EnhanceConfig
from .errors import ConvergenceError, NumericalError
from .itr import estimate_itr
from .metrics import de, eme
from .pipeline import enhance, run_batch
from .retinex import correct
from .robust_guard import RgParams, apply_rg
from .wls import WlsParams, wls_smooth

__all__ = [
    "ConvergenceError", "EnhanceConfig", "NumericalError", "RgParams", "SolverConfig",
    "WlsParams", "apply_rg", "assign_clusters", "build_codebook", "correct", "de", "eme",
    "enhance", "estimate_itr", "refine_transmission", "run_batch", "solve", "wls_smooth",
]
