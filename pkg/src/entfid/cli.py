"""Command-line entry point: ``entfid {sweep,measure,fef-vs-concurrence,validate}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import maf
from .errors import InvalidState, NotConverged
from .measures import measure_report
from .states import read_state, validate_state
from .sweeps import FAMILIES, MEASURES, SweepSpec, fef_vs_concurrence, sweep, to_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_INVALID_STATE = 3
EXIT_NOT_CONVERGED = 4


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _solver_config(args):
    return maf.SolverConfig(tolerance=args.tol, max_iterations=args.max_iter)


def cmd_sweep(args):
    _, (lo, hi), points = FAMILIES[args.family]
    spec = SweepSpec(
        family=args.family,
        lo=lo if args.lo is None else args.lo,
        hi=hi if args.hi is None else args.hi,
        points=points if args.points is None else args.points,
        measures=tuple(m.strip().lower() for m in args.measures.split(",") if m.strip()),
    )
    header, rows = sweep(spec, _solver_config(args))
    _emit(to_csv(header, rows), args.out)
    return EXIT_OK


def cmd_measure(args):
    try:
        rho = read_state(args.state)
    except (OSError, ValueError) as exc:
        print(f"error: cannot parse state file {args.state}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        rho = validate_state(rho)
    except InvalidState as exc:
        print(f"error: invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    solution = maf.maf_sdp(rho, _solver_config(args)) if args.maf else None
    report = measure_report(rho, solution).to_dict()
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_fef_vs_concurrence(args):
    header, rows = fef_vs_concurrence(args.points)
    _emit(to_csv(header, rows), args.out)
    return EXIT_OK


def cmd_validate(args):
    from .validation import run_suites

    results = run_suites(seed=args.seed)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    failed = [name for name, ok, _ in results if not ok]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_OK if not failed else EXIT_VALIDATION


def build_parser():
    parser = argparse.ArgumentParser(prog="entfid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--tol", type=float, default=1e-7, help="ADMM residual tolerance")
        p.add_argument("--max-iter", type=int, default=50000, help="ADMM iteration cap")

    p = sub.add_parser("sweep", help="tabulate measures along a state family")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--from", dest="lo", type=float, default=None)
    p.add_argument("--to", dest="hi", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument(
        "--measures", default="c,fs,f", help=f"comma list from {','.join(MEASURES)}"
    )
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    solver_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("measure", help="report measures for a state JSON file")
    p.add_argument("--state", required=True)
    p.add_argument("--maf", action="store_true", help="also solve for the maximal achievable fidelity")
    p.add_argument("--out", default=None)
    solver_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("fef-vs-concurrence", help="(C, f) along the damped family")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fef_vs_concurrence)

    p = sub.add_parser("validate", help="run the invariant and oracle suites")
    p.add_argument("--seed", type=int, default=0, help="base seed for random-state suites")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
