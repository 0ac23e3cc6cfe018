"""Theorem-level checks comparing R_M against the random-set baseline."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .arith import factorize, is_prime, is_squarefree, next_prime_coprime
from .baseline import s_average
from .errors import HypothesisViolation, InvalidModulusError, RangeError, UndefinedGapsError
from .exact_poly import fa_eval
from .residues import quadratic_residues, residue_count, stochasticity

HALF = Fraction(1, 2)


def _ordered_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ComparisonRecord:
    a: int
    lhs: Fraction  # 2 f_A(1/2)
    rhs: Fraction  # 4 A^2 / |R_A| - A
    lhs_less: bool
    squarefree: bool


def compare_one(A: int) -> ComparisonRecord:
    lhs = 2 * fa_eval(A, HALF)
    rhs = Fraction(4 * A * A, residue_count(A)) - A
    return ComparisonRecord(A, lhs, rhs, lhs < rhs, is_squarefree(A))


def compare_table(a_min: int, a_max: int, workers: int = 1) -> list[ComparisonRecord]:
    """Compare the Ap-asymptotic coefficient 2 f_A(1/2) with the random one for each A."""
    if a_min < 3 or a_max < a_min:
        raise RangeError(f"need 3 <= a_min <= a_max, got {a_min}, {a_max}")
    return _ordered_map(compare_one, list(range(a_min, a_max + 1)), workers)


@dataclass(frozen=True)
class Theorem13Report:
    a: int
    p: int
    s_exact: int
    prediction: Fraction
    residual: Fraction
    envelope: float

    @property
    def ratio(self) -> float:
        """|residual| / p."""
        return float(abs(self.residual) / self.p)


def theorem13_check(A: int, p: int) -> Theorem13Report:
    """Compare S(R_{Ap}) with 2 f_A(1/2) p for squarefree A and prime p coprime to A."""
    if A < 3 or not is_squarefree(A):
        raise HypothesisViolation(f"A={A} must be squarefree and >= 3")
    if not is_prime(p):
        raise HypothesisViolation(f"p={p} is not prime")
    if math.gcd(A, p) != 1:
        raise HypothesisViolation(f"gcd(A, p) = {math.gcd(A, p)} != 1")
    s_exact = stochasticity(quadratic_residues(A * p))
    prediction = 2 * fa_eval(A, HALF) * p
    return Theorem13Report(A, p, s_exact, prediction, s_exact - prediction, A**3 * p**0.95)


def primes_near_decades(A: int, exponents: Iterable[int]) -> list[int]:
    """First prime >= 10^e not dividing A, for each exponent."""
    return [next_prime_coprime(10**e, A) for e in exponents]


def theorem13_convergence(A: int, primes: Sequence[int]) -> list[tuple[int, float]]:
    """(p, |S(R_{Ap}) - 2 f_A(1/2) p| / p) along ``primes``."""
    return [(p, theorem13_check(A, p).ratio) for p in primes]


@dataclass(frozen=True)
class OmegaVerdict:
    m_value: int
    c0: float
    is_member: bool
    a_part: int
    m_part: int
    omega: int
    failed_conditions: tuple[str, ...]


def omega_membership(M: int, c0: float = 3.0) -> OmegaVerdict:
    """Evaluate the three conditions defining the special family of moduli.

    (i)   M squarefree
    (ii)  0.9 loglog M < omega(M) < 1.1 loglog M
    (iii) M = A m with 3 <= A <= (log M)^0.1 and every prime of m > (log M)^c0

    The split peels every prime power p^e || M with p <= (log M)^c0 into A;
    it is the only candidate for (iii). Logs are natural.
    """
    if M < 3:
        raise RangeError(f"M must be >= 3, got {M}")
    if not c0 > 2:
        raise RangeError(f"c0 must exceed 2, got {c0}")
    factors = factorize(M)
    log_m = math.log(M)
    loglog = math.log(log_m)
    w = len(factors)
    small = log_m**c0

    a_part = 1
    for p, e in factors.items():
        if p <= small:
            a_part *= p**e
    m_part = M // a_part

    failed = []
    if any(e > 1 for e in factors.values()):
        failed.append("i")
    if not 0.9 * loglog < w < 1.1 * loglog:
        failed.append("ii")
    if not 3 <= a_part <= log_m**0.1:
        failed.append("iii")
    return OmegaVerdict(M, float(c0), not failed, a_part, m_part, w, tuple(failed))


def omega_threshold_log() -> float:
    """log M must reach 3^10 before any A >= 3 satisfies A <= (log M)^0.1."""
    return 3.0**10


@dataclass(frozen=True)
class Theorem15Diagnostic:
    modulus: int
    a: int
    s_exact: int
    leading: Fraction  # 2 M^2 / |R_M|
    correction: Fraction  # M A / |R_A|
    residual: Fraction  # s_exact - leading + correction
    residual_over_m: float
    log_scale: float  # (log M)^-0.4
    flags: tuple[str, ...] = field(default=())


def theorem15_diagnostic(M: int, a_split: int) -> Theorem15Diagnostic:
    """Evaluate the two-term expansion of S(R_M) at desk scale.

    Hypothesis failures are reported in ``flags`` rather than raised, since
    genuine members of the family are far beyond reach.
    """
    if a_split < 1:
        raise RangeError(f"A must be positive, got {a_split}")
    flags = []
    if not is_squarefree(M):
        flags.append("M not squarefree")
    if a_split < 3:
        flags.append("A < 3")
    if M % a_split:
        flags.append("A does not divide M")
    elif math.gcd(a_split, M // a_split) != 1:
        flags.append("A and M/A not coprime")
    if M < 3 or not omega_membership(M).is_member:
        flags.append("M outside the family")
    R = quadratic_residues(M)
    s_exact = stochasticity(R)
    leading = Fraction(2 * M * M, len(R))
    correction = Fraction(M * a_split, residue_count(a_split))
    residual = s_exact - leading + correction
    return Theorem15Diagnostic(
        M,
        a_split,
        s_exact,
        leading,
        correction,
        residual,
        float(residual / M),
        math.log(M) ** -0.4,
        tuple(flags),
    )


@dataclass(frozen=True)
class ExpansionCheck:
    modulus: int
    k: int
    exact: Fraction
    expansion: Fraction
    gap: Fraction
    relative_gap: Fraction  # gap / M
    scale: Fraction  # M / k^2, the size of relative_gap


def s_baseline_expansion_check(M: int, k: int) -> ExpansionCheck:
    """s(k) against 2M^2/k - M.

    Exactly, gap = 2M(k - M) / (k(k+1)), so gap / M is O(M / k^2).
    """
    exact = s_average(M, k)
    expansion = Fraction(2 * M * M, k) - M
    gap = exact - expansion
    return ExpansionCheck(M, k, exact, expansion, gap, gap / M, Fraction(M, k * k))


@dataclass(frozen=True)
class TailPoint:
    u: float
    empirical: float
    exponential: float


def kr_tail(M: int, u_grid: Iterable[float]) -> list[TailPoint]:
    """Fraction of gaps of R_M exceeding u M / |R_M|, against e^-u."""
    R = quadratic_residues(M)
    if len(R) < 2:
        raise UndefinedGapsError(f"|R_{M}| < 2")
    gaps = np.sort(R.gaps)
    n = gaps.size
    mean = M / n
    out = []
    for u in u_grid:
        if u < 0:
            raise RangeError(f"u must be >= 0, got {u}")
        # gaps are >= 1 > 0, so u = 0 counts every gap
        exceed = n - int(np.searchsorted(gaps, u * mean, side="right"))
        out.append(TailPoint(float(u), exceed / n, math.exp(-u)))
    return out


def aryan_expression(M: int) -> float:
    """M 2^omega(M) log M prod_{p | M} (1 + p^-1/2)(1 - 1/p)."""
    factors = factorize(M)
    prod = 1.0
    for p in factors:
        prod *= (1 + 1 / math.sqrt(p)) * (1 - 1 / p)
    return M * 2 ** len(factors) * math.log(M) * prod


def aryan_ratio(M: int) -> float:
    """S(R_M) divided by the squarefree upper-bound expression."""
    if M < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {M}")
    if not is_squarefree(M):
        raise HypothesisViolation(f"M={M} is not squarefree")
    return stochasticity(quadratic_residues(M)) / aryan_expression(M)


def aryan_sweep(limit: int, start: int = 2) -> tuple[int, float]:
    """(argmax, max) of ``aryan_ratio`` over squarefree M in [start, limit]."""
    best: Optional[tuple[int, float]] = None
    for M in range(max(start, 2), limit + 1):
        if not is_squarefree(M):
            continue
        r = aryan_ratio(M)
        if best is None or r > best[1]:
            best = (M, r)
    if best is None:
        raise RangeError(f"no squarefree M in [{start}, {limit}]")
    return best
