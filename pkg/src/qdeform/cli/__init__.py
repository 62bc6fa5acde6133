"""Command-line front end: ``qdeform check|sweep|presets|validate``.

Exit status: 0 when every asserted relation passes, 1 when one fails,
2 on any configuration, parse, build or output error.
"""
from __future__ import annotations

import argparse
import sys

from ..dsl import DslError
from ..exotic import PRESETS
from ..fock import RepresentationError
from .config import ConfigError, RunConfig, merge_sources
from .reports import emit_report, emit_sweep
from .runner import load_dsl, run_grid, run_point

__all__ = ["main", "build_parser", "EXIT_PASS", "EXIT_FAIL", "EXIT_ERROR", "RunConfig"]

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _run_flags(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", help="built-in preset name (see `qdeform presets`)")
    src.add_argument("--dsl", help="path to a .qdl presentation")
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--dim", help="Fock levels per mode")
    p.add_argument("--lambda", dest="lam", help="grading period")
    p.add_argument("--nu", help="statistical parameter, or start:stop:step")
    p.add_argument("--sign", help="rotation branch, +1 or -1")
    p.add_argument("--mu-omega", dest="mu_omega")
    p.add_argument("--alphas", help="comma-separated structure-function alphas")
    p.add_argument("--f-choice", dest="f_choice", choices=("default", "real"))
    p.add_argument("--tol", dest="tolerance", help="relative Frobenius tolerance")
    p.add_argument("--mask", help="'auto' or a fixed number of top levels")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("json", "csv", "text"))
    p.add_argument("--measure", action="append", metavar="PATTERN",
                   help="report matching labels without a verdict (glob, repeatable)")
    p.add_argument("--measure-cross", dest="measure_cross", action="store_true", default=None,
                   help="measure every *_12 and *_21 relation")
    p.add_argument("--measure-only", dest="measure_only", action="store_true", default=None,
                   help="measure every relation; the run cannot fail")
    p.add_argument("--phase-space", dest="phase_space", choices=("inversion", "literal"),
                   help="which x, p pair to bind")
    p.add_argument("--anchor", help="general preset a limit family is compared with")
    p.add_argument("--workers", help="threads for independent nu points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdeform", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    _run_flags(sub.add_parser("check", help="check one parameter point"))
    sweep = sub.add_parser("sweep", help="check every point of a nu grid")
    _run_flags(sweep)
    sub.add_parser("presets", help="list built-in presets")
    v = sub.add_parser("validate", help="parse a .qdl file and report diagnostics")
    v.add_argument("path")
    return parser


_RUN_KEYS = ("preset", "dsl", "dim", "lam", "nu", "sign", "mu_omega", "alphas", "f_choice", "tolerance", "mask",
             "out", "fmt", "measure_cross", "measure_only", "phase_space", "anchor", "workers")


def _config(args, verb: str) -> RunConfig:
    flags = {k: getattr(args, k) for k in _RUN_KEYS}
    flags["measure"] = tuple(args.measure) if args.measure else None
    if verb == "sweep" and flags["fmt"] is None and not args.config:
        flags["fmt"] = "csv"
    return merge_sources(flags, args.config)


def _write(data: bytes, out: str | None):
    if out is None:
        stream = getattr(sys.stdout, "buffer", None)
        if stream is None:  # a text-only stream, e.g. redirected in-process
            sys.stdout.write(data.decode())
        else:
            stream.write(data)
        sys.stdout.flush()
        return
    try:
        with open(out, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc.strerror}") from None


def _check(cfg: RunConfig) -> int:
    grid = cfg.grid()
    if len(grid) != 1:
        raise ConfigError("check takes a single nu; use `qdeform sweep` for a grid")
    params, report = run_point(cfg, grid[0])
    _write(emit_report(report, cfg.fmt, params), cfg.out)
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


def _sweep(cfg: RunConfig) -> int:
    rows = run_grid(cfg)
    by_nu = {nu: params for nu, params, _ in rows}
    points = [(nu, report) for nu, _, report in rows]
    _write(emit_sweep(points, cfg.fmt, by_nu.get), cfg.out)
    return EXIT_PASS if all(r.overall_pass for _, r in points) else EXIT_FAIL


def _presets() -> int:
    width = max(map(len, PRESETS))
    for name, info in PRESETS.items():
        extra = f" (limit of {info.general} at nu={info.anchor_nu:g})" if info.kind == "limit" else ""
        sys.stdout.write(f"{name.ljust(width)}  {info.modes}-mode  {info.description}{extra}\n")
    return EXIT_PASS


def _validate(path: str) -> int:
    p = load_dsl(path)
    sys.stdout.write(f"{path}: ok: algebra {p.name}, {len(p.generators)} generators, "
                     f"{len(p.parameters)} parameters, {len(p.relations)} relations\n")
    return EXIT_PASS


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.verb == "presets":
            return _presets()
        if args.verb == "validate":
            return _validate(args.path)
        cfg = _config(args, args.verb)
        return _check(cfg) if args.verb == "check" else _sweep(cfg)
    except DslError as exc:
        where = getattr(args, "dsl", None) or getattr(args, "path", None) or "<input>"
        sys.stderr.write(f"qdeform: {where}: {exc}\n")
    except (ConfigError, RepresentationError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"qdeform: error: {msg}\n")
    except SystemExit as exc:  # --help
        return EXIT_PASS if exc.code in (0, None) else EXIT_ERROR
    except Exception as exc:  # the exit status stays within {0, 1, 2}
        sys.stderr.write(f"qdeform: internal error: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR
