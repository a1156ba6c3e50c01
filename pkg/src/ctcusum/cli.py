"""Command-line interface.

Exit codes: 0 success, 2 usage errors (argparse), 1 numeric/domain/format
errors.  Output goes to --out when given, else stdout.  THREADS in the
environment sets the default simulation thread count; it never changes
results, only wall time.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import (
    DomainError,
    RangeOverflowError,
    SimulationBudgetError,
    TableFormatError,
    TruncatedPathsError,
)
from . import report
from .svg import render_table


def _float_list(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}") from exc


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctcusum",
        description="Continuous-time CuSum analytics: threshold design, "
                    "covertness regimes, damage curves, and Monte Carlo checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="resolve one design point")
    p.add_argument("--gamma", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--mu", type=float)
    group.add_argument("--delta", type=float)
    p.add_argument("--c", type=float, default=1.0, help="power-law prefactor")
    p.add_argument("--out")

    p = sub.add_parser("table1", help="relative-gap matrix M(gamma)")
    p.add_argument("--out")

    p = sub.add_parser("fig1", help="delay curves n(gamma) vs the identity")
    p.add_argument("--deltas", type=_float_list, default=[0.75, 2.0, 5.0])
    p.add_argument("--gamma-min", type=float, default=1.0)
    p.add_argument("--gamma-max", type=float, default=1e5)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out")

    p = sub.add_parser("phase", help="threshold and delay ratio across delta")
    p.add_argument("--gammas", type=_float_list, default=[1e3, 1e5, 1e8, 1e12])
    p.add_argument("--delta-min", type=float, default=0.0)
    p.add_argument("--delta-max", type=float, default=1.0)
    p.add_argument("--delta-step", type=float, default=0.005)
    p.add_argument("--out")

    p = sub.add_parser("damage", help="log-damage across delta, with argmax")
    p.add_argument("--gammas", type=_float_list, default=[1e6, 1e8, 1e10, 1e12])
    p.add_argument("--delta-min", type=float, default=0.0)
    p.add_argument("--delta-max", type=float, default=1.0)
    p.add_argument("--delta-step", type=float, default=0.005)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="Monte Carlo stopping-time estimate")
    p.add_argument("--mode", choices=["pre", "post"], required=True)
    p.add_argument("--mu", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", type=float)
    group.add_argument("--gamma", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bridge", dest="bridge", action="store_true", default=True)
    p.add_argument("--no-bridge", dest="bridge", action="store_false")
    p.add_argument("--horizon", type=float)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out")

    p = sub.add_parser("plot", help="render a CSV produced here to SVG")
    p.add_argument("csv")
    p.add_argument("--out", required=True)

    return parser


def _emit(table, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            report.write_csv(table, fh)
    else:
        report.write_csv(table, sys.stdout)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            table = report.cmd_analyze(args.gamma, mu=args.mu, delta=args.delta, c=args.c)
            _emit(table, args.out)
        elif args.command == "table1":
            _emit(report.cmd_table1(), args.out)
        elif args.command == "fig1":
            table = report.cmd_fig1(args.deltas, args.gamma_min, args.gamma_max, args.points)
            _emit(table, args.out)
        elif args.command == "phase":
            table = report.cmd_phase(args.gammas, args.delta_min, args.delta_max,
                                     args.delta_step)
            _emit(table, args.out)
        elif args.command == "damage":
            table = report.cmd_damage(args.gammas, args.delta_min, args.delta_max,
                                      args.delta_step)
            _emit(table, args.out)
        elif args.command == "simulate":
            table = report.cmd_simulate(
                args.mode, args.mu, h=args.h, gamma=args.gamma, step=args.step,
                paths=args.paths, seed=args.seed, bridge=args.bridge,
                horizon=args.horizon, strict=args.strict, threads=args.threads,
            )
            _emit(table, args.out)
        elif args.command == "plot":
            with open(args.csv, "r", encoding="utf-8") as fh:
                table = report.read_csv(fh)
            render_table(table, args.out)
    except (DomainError, RangeOverflowError, SimulationBudgetError,
            TruncatedPathsError, TableFormatError, FileNotFoundError) as exc:
        print(f"ctcusum: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
