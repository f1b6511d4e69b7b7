"""Command line entry point.

    harvest run <config>
    harvest sweep <config> [--verify] [--workers N]
    harvest preset <name> | --list
    harvest beta-decay

Exit status: 0 on success, 2 for configuration errors, 3 when an integral
fails to converge.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from ..switching import NORMALIZATIONS, QuadratureError
from .config import ConfigError, SweepSpec, dump_config, load_config
from .presets import PRESETS, get_preset
from .report import beta_decay_estimate
from .sweep import csv_text, evaluate_point, negativity_grid, run_sweep, save_csv

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _common(p):
    p.add_argument("--normalization", choices=NORMALIZATIONS, default=None,
                   help="time-ordered kernel normalization (default: from config, else defining)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harvest", description="Two-detector entanglement harvesting from free-field vacua.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a single configuration and print one CSV row")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("sweep", help="evaluate a parameter grid, write CSV and SVG")
    p.add_argument("config")
    p.add_argument("--verify", action="store_true", help="compare against the 3D momentum oracle")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="CSV path (overrides the config)")
    p.add_argument("--no-plot", action="store_true")
    _common(p)

    p = sub.add_parser("preset", help="run one of the built-in figure presets")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true", help="list preset names")
    p.add_argument("--dump", action="store_true", help="print the preset as a config file")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output-dir", default=".")
    p.add_argument("--no-plot", action="store_true")
    _common(p)

    p = sub.add_parser("beta-decay", help="order-of-magnitude estimate for beta-decaying nucleons")
    p.add_argument("--coupling", type=float, help="lambda in MeV^-2")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _override(spec: SweepSpec, args) -> SweepSpec:
    kw = {}
    if getattr(args, "normalization", None):
        kw["normalization"] = args.normalization
    if getattr(args, "verify", False):
        kw["verify"] = True
    if getattr(args, "no_plot", False):
        kw["emit_plot"] = False
    return replace(spec, **kw) if kw else spec


def _execute_sweep(spec: SweepSpec, workers: int, csv_path: str) -> int:
    if workers < 1:
        raise ConfigError("--workers must be at least 1")
    rows = run_sweep(spec, workers)
    save_csv(rows, spec, csv_path)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if spec.emit_plot and spec.axes:
        from .plotting import plot_sweep  # matplotlib only when a figure is wanted
        svg = os.path.splitext(csv_path)[0] + ".svg"
        plot_sweep(spec, negativity_grid(rows, spec), svg)
        print(f"wrote {svg}")
    bad = sum(not r.converged for r in rows)
    if bad:
        print(f"warning: {bad} grid point(s) did not converge", file=sys.stderr)
    return EXIT_OK


def _cmd_run(args) -> int:
    spec = _override(load_config(args.config), args)
    if spec.axes:
        raise ConfigError("run takes a configuration without [sweep] axes; use 'harvest sweep'")
    row = evaluate_point(spec, (), strict=True)
    sys.stdout.write(csv_text([row], spec))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = _override(load_config(args.config), args)
    return _execute_sweep(spec, args.workers, args.output or spec.output)


def _cmd_preset(args) -> int:
    if args.list or not args.name:
        for name, spec in PRESETS.items():
            print(f"{name:18s} {spec.title}")
        return EXIT_OK
    try:
        spec = get_preset(args.name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    spec = _override(spec, args)
    if args.dump:
        sys.stdout.write(dump_config(spec))
        return EXIT_OK
    os.makedirs(args.output_dir, exist_ok=True)
    path = os.path.join(args.output_dir, spec.output)
    if not spec.axes:
        row = evaluate_point(spec, (), strict=True)
        text = csv_text([row], spec)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sys.stdout.write(text)
        return EXIT_OK
    return _execute_sweep(spec, args.workers, path)


def _cmd_beta(args) -> int:
    kw = {} if args.coupling is None else {"coupling": args.coupling}
    report = beta_decay_estimate(workers=args.workers, **kw)
    print("\n".join(report.lines()))
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "preset": _cmd_preset, "beta-decay": _cmd_beta}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except QuadratureError as exc:
        print(f"harvest: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as exc:
        print(f"harvest: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
