"""Command-line entry point ``sinc-volterra``.

Exit codes: 0 success, 1 runtime or solver failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, solvers
from .errors import ParameterError
from .problem import get_problem
from .transforms import MeshParameters

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def _n_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("N values must be positive integers")
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sinc-volterra",
        description="Sinc-Nystrom and Sinc-collocation solvers for Volterra integral equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser(
        "sweep",
        help="error and timing sweep over N",
        description="Solve for each N and report the maximum error on an equispaced "
                    "probe grid that includes both interval endpoints.",
    )
    sw.add_argument("--method", required=True, choices=sorted(bench.METHODS))
    sw.add_argument("--problem", required=True, help="rz4 or pm45")
    sw.add_argument("--n-list", required=True, type=_n_list, help="e.g. 4,9,16,25")
    sw.add_argument("--probe-points", type=int, default=2048,
                    help="equispaced probe points, endpoints included (default 2048)")
    sw.add_argument("--d", type=float, default=None, help="override the strip width d")
    sw.add_argument("--alpha", type=float, default=None, help="override the Hoelder exponent")
    sw.add_argument("--out", default=None, help="CSV destination (default: stdout)")
    sw.add_argument("--timed", action="store_true",
                    help="time each phase as the median of 3 repetitions")

    sl = sub.add_parser("slopes", help="fit convergence slopes from a sweep CSV")
    sl.add_argument("--in", dest="infile", required=True)
    sl.add_argument("--d", type=float, default=None)
    sl.add_argument("--alpha", type=float, default=None)

    th = sub.add_parser("verify-theorem4",
                        help="node coincidence of SE collocation and the bordered (RZ) solution")
    th.add_argument("--problem", required=True)
    th.add_argument("--n", type=int, required=True)
    return parser


def _sweep(args, parser):
    try:
        get_problem(args.problem)
    except KeyError as exc:
        parser.error(str(exc.args[0]))
    try:
        records = bench.run_sweep(args.method, args.problem, args.n_list, args.probe_points,
                                  args.d, args.alpha, timed=args.timed)
    except ParameterError as exc:
        parser.error(str(exc))
    failed = [r for r in records if r.failure]
    for r in failed:
        print(f"N={r.N}: solver failure: {r.failure}", file=sys.stderr)
    try:
        if args.out:
            bench.emit_csv(records, args.out)
            print(bench.format_records(records), end="")
        else:
            bench.emit_csv(records, sys.stdout)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_FAILURE if failed else EXIT_OK


def _slopes(args, parser):
    try:
        records = bench.read_csv(args.infile)
    except OSError as exc:
        print(f"cannot read {args.infile}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, KeyError) as exc:
        parser.error(f"malformed CSV: {exc}")
    meshes = {}
    if args.d is not None or args.alpha is not None:
        for r in records:
            kind = bench.METHODS.get(r.method)
            if kind is None:
                continue
            base = get_problem(r.problem_id).mesh(kind)
            meshes[(r.problem_id, kind)] = MeshParameters(
                base.d if args.d is None else args.d,
                base.alpha if args.alpha is None else args.alpha,
            )
    try:
        print(bench.report_slopes(records, meshes))
    except (ParameterError, KeyError) as exc:
        parser.error(str(exc))
    return EXIT_OK


def _theorem4(args, parser):
    try:
        problem = get_problem(args.problem)
    except KeyError as exc:
        parser.error(str(exc.args[0]))
    if args.n < 1:
        parser.error("--n must be a positive integer")
    try:
        gap, scale, end_gap = solvers.theorem4_discrepancy(problem, args.n)
    except ArithmeticError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    tol = 1e-9 * scale
    ok = gap <= tol
    print(f"problem={args.problem} N={args.n} max node discrepancy={gap:.3e} "
          f"tolerance={tol:.3e} endpoint gap={end_gap:.3e} -> {'OK' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILURE


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"sweep": _sweep, "slopes": _slopes, "verify-theorem4": _theorem4}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
