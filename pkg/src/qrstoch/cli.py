"""Command-line front end: ``qrs <subcommand> [options]``.

Exit codes: 0 success, 1 failed assertion or resource/I-O error, 2 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Optional

from . import baseline, exact_poly, harness, residues
from .errors import QRSError, ResourceLimitError
from .report import OutputEnvelope, as_row, emit


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    if text.strip() == "":
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _fields(cls) -> list[str]:
    return [f.name for f in dataclasses.fields(cls)]


class Result:
    def __init__(self, rows, header=None, failure: Optional[str] = None):
        self.rows = [as_row(r) for r in rows]
        self.header = header
        self.failure = failure


# --- subcommand handlers -------------------------------------------------


def cmd_residues(args) -> Result:
    R = residues.quadratic_residues(args.modulus)
    rows = [{"r": int(r), "gap": int(g)} for r, g in zip(R.elements, R.gaps)]
    return Result(rows, ["r", "gap"])


def cmd_stochasticity(args) -> Result:
    R = residues.quadratic_residues(args.modulus)
    row = {
        "modulus": args.modulus,
        "size": len(R),
        "stochasticity": residues.stochasticity(R),
        "max_gap": residues.max_gap(R),
        "cube_root": args.modulus ** (1 / 3),
        "baseline": baseline.s_average(args.modulus, len(R)) if len(R) >= 2 else None,
    }
    return Result([row])


def cmd_gaps(args) -> Result:
    hist = residues.gap_histogram(residues.quadratic_residues(args.modulus))
    return Result([{"length": l, "count": c} for l, c in sorted(hist.items())], ["length", "count"])


def cmd_fa(args) -> Result:
    y = args.at
    if args.derivative == 0:
        value = exact_poly.fa_eval(args.a, y)
    else:
        value = exact_poly.fa_derivative_eval(args.a, y, args.derivative)
    row: dict[str, Any] = {"a": args.a, "y": y, "derivative": args.derivative, "value": value}
    if args.coeffs:
        row["beta"] = list(exact_poly.beta_coeffs(args.a).f_coeffs)
    if args.series:
        series = (1 - y) ** 3 * exact_poly.ga_series(args.a, y, args.kmax)
        row["kmax"] = args.kmax
        row["series_error"] = float(abs(series - exact_poly.fa_eval(args.a, y)))
    return Result([row])


def cmd_compare(args) -> Result:
    rows = harness.compare_table(args.min, args.max, workers=args.workers)
    failure = None
    if args.assert_flip is not None:
        flips = [r.a for r in rows if not r.lhs_less]
        if sorted(flips) != sorted(args.assert_flip):
            failure = f"expected lhs_less=false exactly at {sorted(args.assert_flip)}, got {flips}"
    return Result(rows, _fields(harness.ComparisonRecord), failure)


def cmd_verify_sk(args) -> Result:
    ks = [args.k] if args.k is not None else range(2, args.n + 1)
    rows = []
    for k in ks:
        closed = baseline.s_average(args.n, k)
        brute = baseline.s_average_bruteforce(args.n, k)
        rows.append({"n": args.n, "k": k, "closed_form": closed, "bruteforce": brute, "equal": closed == brute})
    failure = None
    if args.check and not all(r["equal"] for r in rows):
        failure = "closed form and enumeration disagree"
    return Result(rows, ["n", "k", "closed_form", "bruteforce", "equal"], failure)


def cmd_theorem13(args) -> Result:
    primes = args.p or harness.primes_near_decades(args.a, args.decades)
    reports = [harness.theorem13_check(args.a, p) for p in primes]
    failure = None
    if args.assert_decay is not None and len(reports) >= 2:
        first, last = reports[0].ratio, reports[-1].ratio
        if not last * args.assert_decay <= first:
            failure = f"|residual|/p fell from {first:.6g} to {last:.6g}, less than {args.assert_decay}x"
    return Result(reports, _fields(harness.Theorem13Report), failure)


def cmd_theorem15(args) -> Result:
    return Result([harness.theorem15_diagnostic(args.modulus, args.a)])


def cmd_omega(args) -> Result:
    return Result([harness.omega_membership(args.modulus, args.c0)])


def cmd_kr(args) -> Result:
    points = harness.kr_tail(args.modulus, args.u or [0.5, 1.0, 2.0])
    failure = None
    if args.assert_tol is not None:
        bad = [p.u for p in points if abs(p.empirical - p.exponential) > args.assert_tol]
        if bad:
            failure = f"tail deviates from exp(-u) by more than {args.assert_tol} at u={bad}"
    return Result(points, _fields(harness.TailPoint), failure)


def cmd_rn(args) -> Result:
    cc = residues.rn_count(args.modulus, args.c1, args.c2)
    row = as_row(cc)
    row["deviation"] = cc.deviation
    return Result([row])


def cmd_charsum(args) -> Result:
    value, bound = residues.legendre_product_sum(args.p, args.shifts)
    return Result([{"p": args.p, "shifts": args.shifts, "sum": value, "bound": bound, "within": abs(value) <= bound}])


def cmd_identities(args) -> Result:
    rows = []
    for which in args.which or ["7.3", "7.4", "7.5"]:
        for u in range(args.u_max + 1):
            for v in range(args.v_max + 1):
                chk = baseline.binom_identity_check(u, v, which)
                rows.append({"which": which, "u": u, "v": v, "lhs": chk.lhs, "rhs": chk.rhs, "holds": chk.holds})
    failure = None
    if args.check and not all(r["holds"] for r in rows):
        failure = "identity mismatch"
    return Result(rows, ["which", "u", "v", "lhs", "rhs", "holds"], failure)


def cmd_aryan(args) -> Result:
    if args.sweep is not None:
        M, ratio = harness.aryan_sweep(args.sweep)
        return Result([{"limit": args.sweep, "argmax": M, "max_ratio": ratio}])
    return Result([{"modulus": args.modulus, "ratio": harness.aryan_ratio(args.modulus)}])


def cmd_torus(args) -> Result:
    exact = baseline.torus_gap_tail(args.k, args.t)
    est = baseline.torus_gap_tail_mc(args.k, args.t, args.samples, args.seed, workers=args.workers)
    sigma = baseline.binomial_sigma(exact, args.samples)
    row = {"k": args.k, "t": args.t, "samples": args.samples, "seed": args.seed,
           "rng": baseline.MC_RNG, "estimate": est, "exact": exact, "sigma": sigma}
    return Result([row])


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], default="table")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for Monte Carlo commands")
    common.add_argument("--c0", type=float, default=3.0, help="rough-part exponent C0 > 2 (omega)")
    common.add_argument("--kmax", type=int, default=60, help="geometric terms kept by fa --series")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int, default=1, help="processes for sweeps")

    parser = argparse.ArgumentParser(
        prog="qrs",
        description="Stochasticity of quadratic residues: exact computations and checks.",
    )
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(handler=fn)
        return p

    p = add("residues", cmd_residues, "list R_M with circular gaps")
    p.add_argument("--modulus", "-m", type=int, required=True)

    p = add("stochasticity", cmd_stochasticity, "S(R_M), |R_M|, max gap and the random baseline")
    p.add_argument("--modulus", "-m", type=int, required=True)

    p = add("gaps", cmd_gaps, "gap-length histogram K_l of R_M")
    p.add_argument("--modulus", "-m", type=int, required=True)

    p = add("fa", cmd_fa, "evaluate f_A or a derivative exactly")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--at", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--derivative", type=int, choices=[0, 1, 2], default=0)
    p.add_argument("--coeffs", action="store_true", help="include numerator coefficients")
    p.add_argument("--series", action="store_true", help="report |(1-y)^3 g_A(y) - f_A(y)| at --kmax terms")

    p = add("compare-a", cmd_compare, "compare 2 f_A(1/2) with 4A^2/|R_A| - A over a range of A")
    p.add_argument("--min", type=int, default=3)
    p.add_argument("--max", type=int, default=100)
    p.add_argument("--assert-flip", type=int, action="append", metavar="A",
                   help="fail unless lhs_less is false exactly at these A (repeatable)")

    p = add("verify-sk", cmd_verify_sk, "closed-form s(k) against subset enumeration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--check", action="store_true", help="exit 1 on any mismatch")

    p = add("theorem13", cmd_theorem13, "S(R_{Ap}) against 2 f_A(1/2) p")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--p", type=int, action="append", help="prime (repeatable)")
    p.add_argument("--decades", type=int, nargs="+", default=[3, 4, 5],
                   help="use the first prime >= 10^e for each e when --p is absent")
    p.add_argument("--assert-decay", type=float, metavar="FACTOR",
                   help="fail unless |residual|/p drops by FACTOR from first to last prime")

    p = add("theorem15", cmd_theorem15, "two-term expansion diagnostic for squarefree M = A m")
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--a", type=int, required=True)

    p = add("omega", cmd_omega, "membership in the special family of moduli")
    p.add_argument("--modulus", "-m", type=int, required=True)

    p = add("kr", cmd_kr, "empirical gap tail of R_M against exp(-u)")
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--u", type=float, action="append", help="grid point (repeatable)")
    p.add_argument("--assert-tol", type=float, metavar="TOL")

    p = add("rn", cmd_rn, "brute-force |RN_M(C1, C2)| with its main term")
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--c1", type=_int_list, default=[])
    p.add_argument("--c2", type=_int_list, default=[])

    p = add("charsum", cmd_charsum, "complete Legendre-symbol product sum")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--shifts", type=_int_list, required=True)

    p = add("identities", cmd_identities, "binomial summation identities used for s(k)")
    p.add_argument("--u-max", type=int, default=30)
    p.add_argument("--v-max", type=int, default=30)
    p.add_argument("--which", action="append", choices=["7.3", "7.4", "7.5"])
    p.add_argument("--check", action="store_true", help="exit 1 on any mismatch")

    p = add("aryan", cmd_aryan, "S(R_M) over the squarefree upper-bound expression")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--modulus", "-m", type=int)
    g.add_argument("--sweep", type=int, metavar="LIMIT", help="max ratio over squarefree M <= LIMIT")

    p = add("torus", cmd_torus, "Monte Carlo gap tail on the circle against (1 - t/k)^(k-1)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)

    return parser


_SKIP_PARAMS = {"handler", "format", "out", "workers"}


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    params = {k: v for k, v in vars(args).items() if k not in _SKIP_PARAMS}
    try:
        result = args.handler(args)
    except (QRSError, ValueError) as exc:
        kind = "resource" if isinstance(exc, ResourceLimitError) else "error"
        record = {"command": args.command, "error": kind, "type": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=stderr)
        return 1

    env = OutputEnvelope(args.command, params, result.rows)
    text = emit(env, args.format, result.header)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(json.dumps({"command": args.command, "error": "io", "message": str(exc)}), file=stderr)
            return 1
    else:
        stdout.write(text)
    if result.failure:
        print(f"assertion failed: {result.failure}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
