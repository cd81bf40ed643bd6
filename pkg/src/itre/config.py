"""Enhancement configuration and its flat ``key = value`` file form."""

from dataclasses import dataclass, field, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .admm import SolverConfig
from .robust_guard import RgParams
from .wls import WlsParams

CODEBOOKS = ("fibonacci", "kmeans")


@dataclass(frozen=True)
class EnhanceConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    wls: WlsParams = field(default_factory=WlsParams)
    rg: RgParams = field(default_factory=RgParams)
    codebook_size: int = 1000
    codebook: str = "fibonacci"
    dump_intermediates: bool = False
    output_format: str = "png"

    def __post_init__(self):
        if self.codebook not in CODEBOOKS:
            raise ValueError(f"codebook must be one of {CODEBOOKS}, got {self.codebook!r}")
        if self.output_format != "png":
            raise ValueError("only png output is supported")

    @property
    def alpha_exp(self):
        return self.solver.alpha_exp

    @property
    def rg_enabled(self):
        return self.rg.enabled


# flat key -> (nested section or None, attribute)
KEYS = {
    "alpha_exp": ("solver", "alpha_exp"),
    "eps": ("solver", "eps"),
    "eps1": ("solver", "eps1"),
    "lambda_g": ("solver", "lambda_g"),
    "rho0": ("solver", "rho0"),
    "p": ("solver", "p"),
    "max_iterations": ("solver", "max_iterations"),
    "convergence_tol": ("solver", "convergence_tol"),
    "t_floor": ("solver", "t_floor"),
    "warm_start": ("solver", "warm_start"),
    "wls_strength": ("wls", "strength"),
    "wls_exponent": ("wls", "exponent"),
    "wls_guide_floor": ("wls", "guide_floor"),
    "wls_tolerance": ("wls", "solver_tolerance"),
    "wls_max_iterations": ("wls", "max_solver_iterations"),
    "rg_enabled": ("rg", "enabled"),
    "rg_radius": ("rg", "neighborhood_radius"),
    "rg_auto": ("rg", "auto_trigger"),
    "rg_auto_threshold": ("rg", "auto_trigger_threshold"),
    "codebook_size": (None, "codebook_size"),
    "codebook": (None, "codebook"),
    "dump_intermediates": (None, "dump_intermediates"),
    "output_format": (None, "output_format"),
}


def _coerce(key, value, current):
    kind = type(current)
    if kind is bool:
        if not isinstance(value, bool):
            raise ValueError(f"{key} expects true/false, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"{key} expects an integer, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{key} expects a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"{key} expects a string, got {value!r}")
    return value


def to_flat(cfg):
    out = {}
    for key, (section, attr) in KEYS.items():
        owner = getattr(cfg, section) if section else cfg
        out[key] = getattr(owner, attr)
    return out


def with_overrides(cfg, values):
    """Return ``cfg`` with flat ``values`` applied; ``None`` values are skipped."""
    nested = {}
    top = {}
    current = to_flat(cfg)
    for key, value in values.items():
        if value is None:
            continue
        if key not in KEYS:
            raise ValueError(f"unknown config key {key!r}")
        section, attr = KEYS[key]
        value = _coerce(key, value, current[key])
        if section:
            nested.setdefault(section, {})[attr] = value
        else:
            top[attr] = value
    for section, changes in nested.items():
        top[section] = replace(getattr(cfg, section), **changes)
    return replace(cfg, **top)


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return repr(value)


def dumps(cfg):
    return "".join(f"{key} = {_format(value)}\n" for key, value in to_flat(cfg).items())


def loads(text, base=None):
    data = tomllib.loads(text)
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise ValueError(f"config key {key!r} must be a scalar")
    return with_overrides(base or EnhanceConfig(), data)


def load(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), base)


def save(cfg, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(cfg))
