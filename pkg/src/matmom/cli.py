"""Command-line interface.

Subcommands: ``check`` (solvability report), ``solve`` (write a solution
measure), ``verify`` (compare a measure against a problem), ``gen`` (seeded
random solvable problem).  Exit codes: 0 success, 1 usage or parse error,
2 mathematical negative (unsolvable problem or failed verification).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as mio
from .errors import MatmomError, Unsolvable, ValidationError
from .moments import gen_random_measure, moments_of
from .solvability import SolvabilityReport, check
from .solutions import solve_even, solve_l0, solve_odd, verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2


class _UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the exit-code contract
    # reserves 2 for mathematical negatives, so route usage errors to 1.
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _fmt(x: float) -> str:
    return f"{float(x):.16e}"


def _print_report(report: SolvabilityReport) -> None:
    print(f"case: {report.case}")
    for cond in report.conditions:
        status = "PASS" if cond.passed else "FAIL"
        kind = "min-eig" if cond.kind == "psd" else "residual"
        print(f"condition {cond.name}: {status} ({kind} {_fmt(cond.value)})")
    if report.even_case is not None:
        print("S_min:")
        _print_matrix(report.even_case.S_min)
        print("S_max:")
        _print_matrix(report.even_case.S_max)
    if report.cdfk_solvable is not None:
        agree = "agree" if report.criteria_agreement else "HARD DISAGREEMENT"
        print(f"cross-check criterion: "
              f"{'solvable' if report.cdfk_solvable else 'unsolvable'} ({agree})")
    print(f"solvable: {'yes' if report.solvable else 'no'}")


def _print_matrix(m: np.ndarray) -> None:
    for row in np.asarray(m, dtype=complex):
        print("  " + "  ".join(f"{_fmt(v.real)}{v.imag:+.16e}j" for v in row))


def _cmd_check(args) -> int:
    seq = mio.read_problem(args.problem)
    report = check(seq)
    _print_report(report)
    return EXIT_OK if report.solvable else EXIT_NEGATIVE


def _read_param(scalar, path, what: str):
    if scalar is not None and path is not None:
        raise _UsageError(f"give either a scalar or a file for {what}, not both")
    if path is not None:
        return mio.read_matrix_param(path)
    if scalar is not None:
        return scalar
    return 0.5


def _cmd_solve(args) -> int:
    seq = mio.read_problem(args.problem)
    k = _read_param(args.scalar_k, args.param_k, "the extension parameter")
    t = _read_param(args.scalar_t, args.param_t, "the moment-interval parameter")
    if seq.l == 0:
        measure = solve_l0(seq.moments[0], seq.a, seq.b)
    elif seq.l % 2 == 0:
        measure = solve_odd(seq, k)
    else:
        measure = solve_even(seq, t, k)
    outcome = verify(measure, seq, tol=args.tol)
    mio.write_measure(args.out, measure)
    print(f"atoms: {measure.num_atoms}")
    print(f"verification residual: {_fmt(outcome.max_relative_residual)}")
    print(f"wrote {args.out}")
    return EXIT_OK if outcome.passed else EXIT_NEGATIVE


def _cmd_verify(args) -> int:
    measure = mio.read_measure(args.measure)
    seq = mio.read_problem(args.problem)
    outcome = verify(measure, seq, tol=args.tol)
    print("n  residual               scale                  status")
    for i in range(seq.l + 1):
        res = outcome.moment_residuals[i]
        scale = outcome.moment_scales[i]
        ok = "PASS" if res <= args.tol * scale else "FAIL"
        print(f"{i}  {_fmt(res)}  {_fmt(scale)}  {ok}")
    print(f"support inside [a, b]: {'yes' if outcome.support_ok else 'NO'}")
    print(f"weights PSD: {'yes' if outcome.weights_psd_ok else 'NO'}")
    print(f"verified: {'yes' if outcome.passed else 'no'}")
    return EXIT_OK if outcome.passed else EXIT_NEGATIVE


def _cmd_gen(args) -> int:
    if args.atoms < 1:
        raise _UsageError("--atoms must be at least 1")
    if args.N < 1:
        raise _UsageError("--N must be at least 1")
    if args.l < 0:
        raise _UsageError("--l must be non-negative")
    if not args.a < args.b:
        raise _UsageError("--a must be smaller than --b")
    measure = gen_random_measure(args.seed, args.N, args.atoms, args.a, args.b)
    seq = moments_of(measure, args.l)
    mio.write_problem(args.out, seq)
    print(f"wrote {args.out}")
    if args.measure_out:
        mio.write_measure(args.measure_out, measure)
        print(f"wrote {args.measure_out}")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="matmom",
                     description="Truncated matrix moment problems on [a, b]")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide solvability of a problem file")
    p_check.add_argument("problem")
    p_check.set_defaults(func=_cmd_check)

    p_solve = sub.add_parser("solve", help="construct a solution measure")
    p_solve.add_argument("problem")
    p_solve.add_argument("--scalar-k", type=float, default=None,
                         help="extension parameter K = t*I, t in [0, 1]")
    p_solve.add_argument("--param-k", default=None,
                         help="matrix file for the extension parameter K")
    p_solve.add_argument("--scalar-t", type=float, default=None,
                         help="even-case moment parameter T = t*I, t in [0, 1]")
    p_solve.add_argument("--param-t", default=None,
                         help="matrix file for the even-case moment parameter T")
    p_solve.add_argument("--out", required=True, help="output measure file")
    p_solve.add_argument("--tol", type=float, default=1e-8)
    p_solve.set_defaults(func=_cmd_solve)

    p_verify = sub.add_parser("verify", help="check a measure against a problem")
    p_verify.add_argument("measure")
    p_verify.add_argument("problem")
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.set_defaults(func=_cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a seeded solvable problem")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--N", type=int, default=1)
    p_gen.add_argument("--atoms", type=int, default=2)
    p_gen.add_argument("--a", type=float, default=-1.0)
    p_gen.add_argument("--b", type=float, default=1.0)
    p_gen.add_argument("--l", type=int, default=2)
    p_gen.add_argument("--out", required=True, help="output problem file")
    p_gen.add_argument("--measure-out", default=None,
                       help="also write the generating measure")
    p_gen.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except Unsolvable as exc:
        print(f"unsolvable: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (ValidationError, MatmomError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console()
