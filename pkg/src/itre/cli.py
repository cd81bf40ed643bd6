"""Command line interface: ``itre enhance | batch | metrics``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure,
4 partial batch failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import config as configmod
from . import io
from .errors import NumericalError
from .metrics import report
from .pipeline import NoImagesError, enhance, run_batch, write_metrics, write_trace

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3, 4

log = logging.getLogger("itre")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="itre", description="Low-light enhancement by illumination transmission ratio estimation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enhance", help="enhance one image")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="output PNG (default: <input stem>_itre.png beside the input)")
    p.add_argument("--alpha-exp", type=float, help="over-exposure suppression strength")
    p.add_argument("--rg", action="store_const", const=True, default=None, help="enable the Robust-Guard")
    p.add_argument("--rg-radius", type=int, help="Robust-Guard window half-width in pixels")
    p.add_argument("--clusters", type=int, help="number of colour clusters")
    p.add_argument("--max-iters", type=int, help="ADMM iteration budget")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--dump-intermediates", metavar="DIR", help="write intermediate maps as PFM")
    p.add_argument("--trace", metavar="CSV", help="write the per-iteration solver trace")

    p = sub.add_parser("batch", help="enhance every PNG/JPEG in a directory")
    p.add_argument("input_dir")
    p.add_argument("output_dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config")
    p.add_argument("--metrics", metavar="CSV", help="metrics summary path (default: OUT_DIR/metrics.csv)")

    p = sub.add_parser("metrics", help="EME and DE of images")
    p.add_argument("images", nargs="+")
    p.add_argument("--csv", metavar="FILE", help="write CSV here instead of stdout")
    return parser


def resolve_config(path=None, overrides=None):
    """Built-in defaults, then the config file, then command-line flags."""
    cfg = configmod.EnhanceConfig()
    if path:
        cfg = configmod.load(path, cfg)
    return configmod.with_overrides(cfg, overrides or {})


def cmd_enhance(args):
    cfg = resolve_config(args.config, {
        "alpha_exp": args.alpha_exp,
        "rg_enabled": args.rg,
        "rg_radius": args.rg_radius,
        "codebook_size": args.clusters,
        "max_iterations": args.max_iters,
        "dump_intermediates": True if args.dump_intermediates else None,
    })
    src = Path(args.input)
    img = io.read_image(src)
    out = Path(args.output) if args.output else src.with_name(f"{src.stem}_itre.png")
    res = enhance(img, cfg, image_id=src.name, dump_dir=args.dump_intermediates)
    io.write_png(out, res.image)
    if args.trace:
        write_trace(args.trace, res.solve.history)
    log.info("%s -> %s (EME %.3f, DE %.3f)", src, out, res.report.eme, res.report.de)
    return EXIT_OK


def cmd_batch(args):
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    cfg = resolve_config(args.config)
    summary = run_batch(args.input_dir, args.output_dir, cfg, jobs=args.jobs, metrics_path=args.metrics)
    for name, msg in summary.failures:
        log.warning("failed: %s (%s)", name, msg)
    return EXIT_PARTIAL if summary.partial else EXIT_OK


def cmd_metrics(args):
    reports = [report(io.read_image(path), Path(path).name) for path in args.images]
    if args.csv:
        write_metrics(args.csv, reports)
    else:
        write_metrics(sys.stdout, reports)
    return EXIT_OK


COMMANDS = {"enhance": cmd_enhance, "batch": cmd_batch, "metrics": cmd_metrics}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"itre: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"itre: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, NoImagesError) as exc:
        print(f"itre: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"itre: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
