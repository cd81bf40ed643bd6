"""End-to-end enhancement: ITR estimate, optional guard, ADMM refinement, correction."""

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import io
from .admm import solve
from .clustering import build_codebook, kmeans_codebook
from .config import EnhanceConfig
from .image_core import check_rgb, check_size, to_unit_range
from .itr import estimate_itr
from .metrics import report
from .retinex import correct
from .robust_guard import apply_rg

log = logging.getLogger(__name__)

TRACE_HEADER = ("iteration", "objective", "residual", "rho")
METRICS_HEADER = ("image_id", "eme", "de")


class NoImagesError(Exception):
    """A batch directory held nothing that could be decoded."""


@dataclass
class EnhanceResult:
    image: np.ndarray
    transmission: np.ndarray
    report: object
    itr: np.ndarray
    target: np.ndarray
    solve: object

    def __iter__(self):
        return iter((self.image, self.transmission, self.report))


@contextmanager
def stage(name):
    try:
        yield
    except (ValueError, ArithmeticError) as exc:
        raise type(exc)(f"{name}: {exc}") from exc


@lru_cache(maxsize=8)
def _fibonacci(n):
    return build_codebook(n)


def codebook_for(img, cfg):
    if cfg.codebook == "kmeans":
        return kmeans_codebook(img, cfg.codebook_size)
    return _fibonacci(cfg.codebook_size)


def enhance(img, cfg=None, image_id="", dump_dir=None):
    """Enhance one RGB image.

    Unpacks as ``(image, transmission, report)``; the intermediate maps and
    the solver state stay reachable as attributes. With ``dump_dir`` the
    intermediate maps are also written there as PFM files.
    """
    cfg = cfg or EnhanceConfig()
    img = to_unit_range(img)
    with stage("input"):
        img = check_rgb(img)
        check_size(img)

    with stage("itr"):
        itr = estimate_itr(img, codebook_for(img, cfg), cfg.wls, t_floor=cfg.solver.t_floor)
    with stage("robust-guard"):
        target = apply_rg(itr, img, cfg.wls, cfg.rg, t_floor=cfg.solver.t_floor)
    with stage("admm"):
        result = solve(target, img, cfg.solver)
        t = np.clip(result.t, cfg.solver.t_floor, 1.0)
    with stage("correct"):
        out = correct(img, t, cfg.solver.eps1)

    if dump_dir is not None:
        dump_intermediates(dump_dir, itr=itr, target=target, transmission=t,
                           lam=result.lam, exposure=result.state.e)
    return EnhanceResult(image=out, transmission=t, report=report(out, image_id),
                         itr=itr, target=target, solve=result)


def dump_intermediates(directory, **maps):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, data in maps.items():
        io.write_pfm(directory / f"{name}.pfm", data)


def write_trace(path, history):
    io.write_rows(path, TRACE_HEADER, [[row[k] for k in TRACE_HEADER] for row in history])


def write_metrics(path_or_file, reports):
    io.write_rows(path_or_file, METRICS_HEADER,
                  [[r.image_id, f"{r.eme:.6f}", f"{r.de:.6f}"] for r in reports])


def list_images(input_dir):
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise NotADirectoryError(f"{input_dir} is not a readable directory")
    return sorted(p for p in input_dir.iterdir()
                  if p.is_file() and p.suffix.lower() in io.IMAGE_SUFFIXES)


@dataclass
class BatchSummary:
    written: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    metrics_path: Path = None

    @property
    def partial(self):
        return bool(self.failures)


def _process(path, output_dir, cfg):
    img = io.read_image(path)
    res = enhance(img, cfg, image_id=path.name,
                  dump_dir=output_dir / f"{path.stem}_maps" if cfg.dump_intermediates else None)
    out_path = output_dir / f"{path.stem}.png"
    io.write_png(out_path, res.image)
    return out_path, res.report


def run_batch(input_dir, output_dir, cfg=None, jobs=1, metrics_path=None):
    """Enhance every PNG/JPEG in ``input_dir`` (by filename order).

    Per-file failures are logged and collected instead of aborting. The CSV
    summary goes to ``metrics_path`` (default ``output_dir/metrics.csv``).
    """
    cfg = cfg or EnhanceConfig()
    paths = list_images(input_dir)
    if not paths:
        raise NoImagesError(f"no PNG/JPEG files in {input_dir}")
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    def attempt(path):
        try:
            return _process(path, output_dir, cfg)
        except (OSError, ValueError, ArithmeticError) as exc:
            log.error("%s: %s", path.name, exc)
            return exc

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        outcomes = list(pool.map(attempt, paths))

    summary = BatchSummary()
    for path, outcome in zip(paths, outcomes):
        if isinstance(outcome, Exception):
            summary.failures.append((path.name, str(outcome)))
        else:
            summary.written.append(outcome[0])
            summary.reports.append(outcome[1])
    if not summary.written:
        raise NoImagesError(f"none of the {len(paths)} files in {input_dir} could be enhanced")

    summary.metrics_path = Path(metrics_path) if metrics_path else output_dir / "metrics.csv"
    write_metrics(summary.metrics_path, summary.reports)
    return summary
