"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for
invalid input.  Output is a pure function of the input file, flags and
seed; timing information goes to stderr only.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path

from . import jsonio
from .errors import InvalidInput, MomentError
from .generate import random_circle_measure
from .interval import canonical_U
from .matcore import tolerance_profile
from .measures import CircleMeasure, circle_moments, interval_moments
from .moment_space import canonical_sequence, moments_from_verblunsky
from .verify import DEFAULT_ORDER, run_checks

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-psd", type=_tolerance, help="relative PSD threshold")
    common.add_argument("--tol-boundary", type=_tolerance, help="contraction boundary margin")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format; csv is available for verify only")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="matmoments",
        description="Moments, canonical moments and orthogonal polynomials of matrix measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="moments of a measure file")
    p.add_argument("input", type=Path)
    p.add_argument("--order", type=_nonnegative, default=DEFAULT_ORDER)

    p = sub.add_parser("canonical", parents=[common], help="canonical moments of a measure file")
    p.add_argument("input", type=Path)
    p.add_argument("--order", type=_nonnegative,
                   help="moments to use (default: atoms for the circle, twice that on [-1, 1])")

    p = sub.add_parser("verify", parents=[common], help="run the identity suite on a measure")
    p.add_argument("input", type=Path)
    p.add_argument("--order", type=_nonnegative, default=DEFAULT_ORDER)
    p.add_argument("--jobs", type=_positive, default=1)

    p = sub.add_parser("generate", parents=[common], help="seeded random circle measure")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--p", type=_positive, default=2)
    p.add_argument("--atoms", type=_positive, default=4)
    p.add_argument("--symmetric", action="store_true")

    p = sub.add_parser("from-verblunsky", parents=[common],
                       help="moments from Gamma_0 and canonical moments")
    p.add_argument("input", type=Path)
    return parser


def _tolerances(args):
    return tolerance_profile().with_overrides(psd_tol=args.tol_psd, boundary_tol=args.tol_boundary)


def _load_measure(path):
    return jsonio.measure_from_json(jsonio.load(path))


def cmd_moments(args, tol):
    mu = _load_measure(args.input)
    if isinstance(mu, CircleMeasure):
        return jsonio.moments_to_json("circle", circle_moments(mu, args.order).gammas), EXIT_OK
    return jsonio.moments_to_json("interval", interval_moments(mu, args.order).s), EXIT_OK


def cmd_canonical(args, tol):
    mu = _load_measure(args.input)
    if isinstance(mu, CircleMeasure):
        order = mu.n_atoms if args.order is None else args.order
        return jsonio.canonical_to_json(canonical_sequence(circle_moments(mu, order), tol)), EXIT_OK
    order = 2 * mu.n_atoms if args.order is None else args.order
    return jsonio.interval_canonical_to_json(canonical_U(interval_moments(mu, order), tol), mu.p), EXIT_OK


def cmd_verify(args, tol):
    mu = _load_measure(args.input)
    start = time.perf_counter()
    results = run_checks(mu, args.order, tol, args.jobs)
    print(f"verify: {len(results)} checks in {time.perf_counter() - start:.3f} s", file=sys.stderr)
    failed = any(r.passed is False for r in results)
    report = {
        "command": "verify",
        "input": str(args.input),
        "kind": "circle" if isinstance(mu, CircleMeasure) else "interval",
        "p": mu.p,
        "order": args.order,
        "tolerances": tol.as_dict(),
        "checks": [r.to_json() for r in results],
        "passed": not failed,
    }
    return report, EXIT_FAIL if failed else EXIT_OK


def cmd_generate(args, tol):
    mu = random_circle_measure(args.seed, args.p, args.atoms, symmetric=args.symmetric)
    return jsonio.measure_to_json(mu), EXIT_OK


def cmd_from_verblunsky(args, tol):
    g0, A = jsonio.verblunsky_from_json(jsonio.load(args.input))
    return jsonio.moments_to_json("circle", moments_from_verblunsky(g0, A, tol).gammas), EXIT_OK


COMMANDS = {
    "moments": cmd_moments,
    "canonical": cmd_canonical,
    "verify": cmd_verify,
    "generate": cmd_generate,
    "from-verblunsky": cmd_from_verblunsky,
}


def _render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "residual", "tolerance", "pass", "status"])
    for c in report["checks"]:
        writer.writerow([c["name"], "" if c["residual"] is None else repr(c["residual"]),
                         "" if c["tolerance"] is None else repr(c["tolerance"]),
                         "" if c["pass"] is None else str(c["pass"]).lower(), c["status"]])
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.format == "csv" and args.command != "verify":
            raise InvalidInput("csv output is available for verify only")
        tol = _tolerances(args)
        payload, code = COMMANDS[args.command](args, tol)
    except MomentError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = _render_csv(payload) if args.format == "csv" else jsonio.dumps(payload)
    if args.out is None:
        sys.stdout.write(text)
    else:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
