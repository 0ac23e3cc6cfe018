"""Exact rational-function machinery for f_A = F_A / Q_A.

F_A is built from the gap sequence s_1..s_n of R_A (n = |R_A|):

    F_A(y) = sum_k beta_k y^k,  beta_0 = beta_n = sum s_i^2,
                                beta_k = 2 sum_i s_i s_{i+k}  (0 < k < n)
    Q_A(y) = 1 + y + ... + y^(n-1)

and g_A is the triple series whose (1-y)^3 multiple is f_A. Everything here
is exact integer or ``Fraction`` arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, InvalidModulusError, RangeError, UndefinedGapsError
from .residues import quadratic_residues, r_table

Number = Union[int, Fraction]


@lru_cache(maxsize=512)
def _gaps(A: int) -> tuple[int, ...]:
    if A < 3:
        raise InvalidModulusError(f"A must be >= 3, got {A}")
    R = quadratic_residues(A)
    if len(R) < 2:
        raise UndefinedGapsError(f"|R_{A}| < 2")
    return tuple(int(g) for g in R.gaps)


def polyval(coeffs: Sequence[int], y: Number) -> Number:
    """Horner evaluation, exact for int/Fraction inputs."""
    acc: Number = 0
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def polyder(coeffs: Sequence[int]) -> list[int]:
    return [k * c for k, c in enumerate(coeffs)][1:] or [0]


@dataclass(frozen=True)
class GapAutocorrelation:
    a: int
    alpha: tuple[int, ...]


@dataclass(frozen=True)
class RationalFunctionFA:
    """F_A coefficients beta_0..beta_n; Q_A is the all-ones polynomial of degree n-1."""

    a: int
    f_coeffs: tuple[int, ...]

    @property
    def size(self) -> int:
        """|R_A|."""
        return len(self.f_coeffs) - 1

    @property
    def q_degree(self) -> int:
        return self.size - 1

    @property
    def q_coeffs(self) -> tuple[int, ...]:
        return (1,) * self.size

    def __call__(self, y: Number) -> Fraction:
        q = polyval(self.q_coeffs, y)
        if q == 0:
            raise DomainError(f"Q_{self.a} vanishes at y={y}")
        return Fraction(polyval(self.f_coeffs, y)) / q


def alpha_coeffs(A: int) -> GapAutocorrelation:
    """alpha_k = sum_i (s_i + ... + s_{i+k})^2, indices cyclic, k < |R_A|."""
    s = np.array(_gaps(A), dtype=object)
    n = len(s)
    ext = np.concatenate((s, s))
    prefix = np.concatenate(([0], np.cumsum(ext)))
    alpha = []
    for k in range(n):
        window = prefix[k + 1 : k + 1 + n] - prefix[:n]
        alpha.append(int(sum(w * w for w in window)))
    return GapAutocorrelation(A, tuple(alpha))


def beta_coeffs(A: int) -> RationalFunctionFA:
    s = _gaps(A)
    n = len(s)
    sq = sum(x * x for x in s)
    mid = [2 * sum(s[i] * s[(i + k) % n] for i in range(n)) for k in range(1, n)]
    return RationalFunctionFA(A, (sq, *mid, sq))


@lru_cache(maxsize=512)
def _fa(A: int) -> RationalFunctionFA:
    return beta_coeffs(A)


def fa_eval(A: int, y: Number) -> Fraction:
    """f_A(y) = F_A(y) / Q_A(y) exactly."""
    return _fa(A)(Fraction(y))


def fa_derivative_eval(A: int, y: Number, order: int = 1) -> Fraction:
    """Exact first or second derivative of F_A/Q_A at y (quotient rule)."""
    if order not in (1, 2):
        raise RangeError(f"order must be 1 or 2, got {order}")
    fa = _fa(A)
    y = Fraction(y)
    F, Q = fa.f_coeffs, fa.q_coeffs
    f0, q0 = polyval(F, y), polyval(Q, y)
    if q0 == 0:
        raise DomainError(f"Q_{A} vanishes at y={y}")
    f1, q1 = polyval(polyder(F), y), polyval(polyder(Q), y)
    if order == 1:
        return Fraction(f1 * q0 - f0 * q1) / (q0 * q0)
    f2, q2 = polyval(polyder(polyder(F)), y), polyval(polyder(polyder(Q)), y)
    num = f2 * q0 * q0 - 2 * f1 * q1 * q0 - f0 * q2 * q0 + 2 * f0 * q1 * q1
    return Fraction(num) / q0**3


def second_derivative_ratio(A: int, y: Number) -> Fraction:
    """|f_A''(y)| / (A^2 |R_A|); diagnostic for the size of the Taylor remainder at y -> 1."""
    n = _fa(A).size
    return abs(fa_derivative_eval(A, y, 2)) / (A * A * n)


def _geometric_sq_tail(x: Fraction, N: int, shift: int = 0) -> Fraction:
    # sum_{k >= N} (k + shift)^2 x^k in closed form
    m = N + shift
    one = 1 - x
    head = m * m / one + 2 * m * x / one**2 + x * (1 + x) / one**3
    return x**N * head


def ga_series(A: int, y: Number, k_max: int) -> Fraction:
    """Partial sum of g_A(y) keeping geometric indices 0 <= k < k_max.

    g_A(y) = sum_{j=1}^{A} sum_{i in R_A, i+j in R_A} y^{r(i,j)} sum_k y^{|R_A| k} (A k + j)^2
    """
    y = Fraction(y)
    if not 0 < y < 1:
        raise DomainError(f"y must lie in (0, 1), got {y}")
    if k_max < 1:
        raise RangeError(f"k_max must be >= 1, got {k_max}")
    R = quadratic_residues(A)
    n = len(R)
    ind = R.indicator()
    table = r_table(A)
    x = y**n
    total = Fraction(0)
    for j in range(1, A + 1):
        ys = [table[i, j] for i in R.elements if ind[(i + j) % A]]
        if not ys:
            continue
        weight = sum(y ** int(r) for r in ys)
        inner = sum(x**k * (A * k + j) ** 2 for k in range(k_max))
        total += weight * inner
    return total


def ga_tail_bound(A: int, y: Number, k_max: int) -> Fraction:
    """Upper bound on g_A(y) - ga_series(A, y, k_max).

    Uses y^r <= 1, (A k + j)^2 <= A^2 (k+1)^2 and exactly |R_A|^2 pairs (i, j).
    """
    y = Fraction(y)
    if not 0 < y < 1:
        raise DomainError(f"y must lie in (0, 1), got {y}")
    n = _fa(A).size
    return n * n * A * A * _geometric_sq_tail(y**n, k_max, shift=1)


@dataclass(frozen=True)
class PPolynomials:
    """P_0, P_1, P_2 from closed forms and from the defining double sums."""

    a: int
    closed: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    double_sum: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def p_polynomials(A: int) -> PPolynomials:
    n = _fa(A).size
    alpha = alpha_coeffs(A).alpha
    closed = (
        tuple([n] * n),
        tuple(A * (k + 1) for k in range(n)),
        tuple(alpha),
    )

    R = quadratic_residues(A)
    ind = R.indicator()
    table = r_table(A)
    sums = [[0] * n for _ in range(3)]
    for i in R.elements:
        for j in range(1, A + 1):
            if not ind[(i + j) % A]:
                continue
            r = int(table[i, j])
            for s in range(3):
                sums[s][r] += j**s
    return PPolynomials(A, closed, tuple(tuple(c) for c in sums))
