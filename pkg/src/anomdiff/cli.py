"""Command line entry point.

Subcommands::

    anomdiff coeffs --alpha 1.5 --theta 0 --N 20 [--table weights|tails] [--kmin/--kmax] [--cauchy-limit]
    anomdiff stability --alpha 2 --theta 0 --k-alpha 1 --h 0.01
    anomdiff run scenario.txt [--out DIR]
    anomdiff compare a.txt b.txt

Exit status: 0 on success, 1 on configuration errors, 2 on runtime or
numerical errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

import numpy as np

from .coeffs import FractionalParams, WeightTable, cauchy_limit_weights, riesz_feller_weights
from .errors import AnomDiffError, ConfigError
from .scenario_io import load_scenario, run_scenario
from .schemes import max_stable_dt, run_simulation
from .validation import compare_fields

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _params(args) -> FractionalParams:
    try:
        return FractionalParams(args.alpha, args.theta, args.k_alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_coeffs(args, out) -> None:
    if args.N < 3:
        raise ConfigError("--N must be >= 3")
    if args.cauchy_limit:
        kmin = -args.N if args.kmin is None else args.kmin
        kmax = args.N if args.kmax is None else args.kmax
        k = np.arange(kmin, kmax + 1)
        rows = ["k,w"] + [f"{int(a)},{_fmt(b)}" for a, b in zip(k, cauchy_limit_weights(k))]
        out.write("\n".join(rows) + "\n")
        return
    params = _params(args)
    table = WeightTable.build(params.alpha, params.theta, args.N)
    kmin = -args.N if args.kmin is None else args.kmin
    kmax = args.N if args.kmax is None else args.kmax
    if kmin > kmax:
        raise ConfigError("--kmin must not exceed --kmax")
    k = np.arange(kmin, kmax + 1)
    w = riesz_feller_weights(k, params.alpha, params.theta)
    weights = ["k,w"] + [f"{int(a)},{_fmt(b)}" for a, b in zip(k, w)]
    tails = ["i,sL,sR"] + [
        f"{i},{_fmt(a)},{_fmt(b)}" for i, (a, b) in enumerate(zip(table.sL, table.sR), start=1)
    ]
    if args.out:
        from pathlib import Path

        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "weights.csv").write_text("\n".join(weights) + "\n", encoding="utf-8")
        (d / "tails.csv").write_text("\n".join(tails) + "\n", encoding="utf-8")
    chosen = weights if args.table == "weights" else tails
    out.write("\n".join(chosen) + "\n")


def _cmd_stability(args, out) -> None:
    if not args.h > 0.0:
        raise ConfigError("--h must be positive")
    out.write(f"{max_stable_dt(_params(args), args.h):.10g}\n")


def _cmd_run(args, out) -> None:
    scenario = load_scenario(args.scenario)
    result, where = run_scenario(scenario, args.out)
    if not args.quiet:
        out.write(f"wrote {len(result.snapshots)} snapshot(s) and metadata.json to {where}\n")
        for w in result.warnings:
            out.write(f"warning: {w}\n")


def _cmd_compare(args, out) -> None:
    a = load_scenario(args.first)
    b = load_scenario(args.second)
    if a.grid != b.grid:
        raise ConfigError("scenarios must share the same grid (L, R, N)")
    ra, rb = run_simulation(a), run_simulation(b)
    if len(ra.snapshots) != len(rb.snapshots):
        raise ConfigError("scenarios must request the same number of snapshots")
    out.write("t_first,t_second,l2,max\n")
    for sa, sb in zip(ra.snapshots, rb.snapshots):
        l2, mx = compare_fields(sa, sb, a.grid)
        out.write(f"{_fmt(sa.time)},{_fmt(sb.time)},{_fmt(l2)},{_fmt(mx)}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="anomdiff", description="Space-fractional diffusion solver.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_params(sp):
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--theta", type=float, default=0.0)
        sp.add_argument("--k-alpha", dest="k_alpha", type=float, default=1.0)

    c = sub.add_parser("coeffs", parents=[common], help="dump weight and tail-sum tables as CSV")
    c.add_argument("--alpha", type=float, default=None)
    c.add_argument("--theta", type=float, default=0.0)
    c.add_argument("--k-alpha", dest="k_alpha", type=float, default=1.0)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--kmin", type=int, default=None)
    c.add_argument("--kmax", type=int, default=None)
    c.add_argument("--table", choices=("weights", "tails"), default="weights")
    c.add_argument("--cauchy-limit", action="store_true", help="alpha -> 1+ weight table (theta = 0)")
    c.set_defaults(func=_cmd_coeffs)

    s = sub.add_parser("stability", parents=[common], help="print the explicit step bound")
    add_params(s)
    s.add_argument("--h", type=float, required=True)
    s.set_defaults(func=_cmd_stability)

    r = sub.add_parser("run", parents=[common], help="run a scenario file")
    r.add_argument("scenario")
    r.set_defaults(func=_cmd_run)

    m = sub.add_parser("compare", parents=[common], help="run two scenarios and compare snapshots")
    m.add_argument("first")
    m.add_argument("second")
    m.set_defaults(func=_cmd_compare)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command == "coeffs" and args.alpha is None and not args.cauchy_limit:
        print("anomdiff: error: coeffs needs --alpha or --cauchy-limit", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            args.func(args, out)
    except ConfigError as exc:
        print(f"anomdiff: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AnomDiffError, ArithmeticError, OSError, ValueError) as exc:
        print(f"anomdiff: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
