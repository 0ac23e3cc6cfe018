"""Quadratic residue sets modulo M and the gap statistics built on them.

``R_M`` is the full image of squaring on Z_M, so it always contains 0 and,
for composite M, non-units such as 4 mod 12. Gap sequences are anchored at
the smallest element (0 for residue sets) and wrap through M at the end.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .arith import factorize, is_prime
from .errors import (
    InvalidConfigError,
    InvalidModulusError,
    RangeError,
    ResourceLimitError,
    UndefinedGapsError,
)

DEFAULT_SIEVE_BUDGET = 10**9
# a*a must fit in int64 before reduction: (M/2)^2 < 2^63.
_INT64_SQUARE_LIMIT = 6_000_000_000
_CHUNK = 1 << 22


def sieve_budget() -> int:
    """Largest modulus the sieve accepts (env ``QRS_SIEVE_BUDGET``)."""
    raw = os.environ.get("QRS_SIEVE_BUDGET")
    if raw is None:
        return DEFAULT_SIEVE_BUDGET
    try:
        value = int(float(raw))
    except ValueError:
        raise ResourceLimitError(f"QRS_SIEVE_BUDGET={raw!r} is not a number") from None
    return min(value, _INT64_SQUARE_LIMIT)


@dataclass(frozen=True, eq=False)
class ResidueSet:
    """Sorted subset of Z_M with its circular gap sequence.

    ``gaps[i] = elements[i+1] - elements[i]`` and the last gap wraps:
    ``elements[0] + M - elements[-1]``.
    """

    modulus: int
    elements: np.ndarray
    gaps: np.ndarray

    @classmethod
    def from_elements(cls, modulus: int, elements: Iterable[int]) -> "ResidueSet":
        if modulus < 1:
            raise InvalidModulusError(f"modulus must be positive, got {modulus}")
        arr = np.unique(np.asarray(list(elements), dtype=np.int64) % modulus)
        return cls._from_sorted(modulus, arr)

    @classmethod
    def _from_sorted(cls, modulus: int, arr: np.ndarray) -> "ResidueSet":
        if arr.size:
            gaps = np.empty_like(arr)
            np.subtract(arr[1:], arr[:-1], out=gaps[:-1])
            gaps[-1] = arr[0] + modulus - arr[-1]
        else:
            gaps = arr.copy()
        arr.setflags(write=False)
        gaps.setflags(write=False)
        return cls(int(modulus), arr, gaps)

    def __len__(self) -> int:
        return int(self.elements.size)

    def __contains__(self, x: int) -> bool:
        x %= self.modulus
        i = int(np.searchsorted(self.elements, x))
        return i < self.elements.size and int(self.elements[i]) == x

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.elements, other.elements)

    def __repr__(self) -> str:
        return f"ResidueSet(modulus={self.modulus}, size={len(self)})"

    def indicator(self) -> np.ndarray:
        """Boolean membership array of length ``modulus``."""
        ind = np.zeros(self.modulus, dtype=bool)
        ind[self.elements] = True
        return ind

    def _require_gaps(self) -> None:
        if len(self) < 2:
            raise UndefinedGapsError(f"need at least two elements, have {len(self)}")


def _residue_bits(M: int) -> np.ndarray:
    # One bit per class; a and M - a square to the same class, so a <= M // 2.
    bits = np.zeros((M + 7) // 8, dtype=np.uint8)
    top = M // 2 + 1
    for lo in range(0, top, _CHUNK):
        a = np.arange(lo, min(lo + _CHUNK, top), dtype=np.int64)
        sq = (a * a) % M
        np.bitwise_or.at(bits, sq >> 3, np.left_shift(1, sq & 7).astype(np.uint8))
    return bits


def _bits_to_elements(bits: np.ndarray, M: int) -> np.ndarray:
    parts = []
    step = 1 << 20
    for lo in range(0, bits.size, step):
        unpacked = np.unpackbits(bits[lo : lo + step], bitorder="little")
        parts.append(np.flatnonzero(unpacked).astype(np.int64) + 8 * lo)
    out = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return out[out < M]


def quadratic_residues(M: int) -> ResidueSet:
    """Return ``R_M = {a^2 mod M}`` with its circular gaps.

    Memory is one bit per residue class for the sieve plus eight bytes per
    residue for the result; the default budget is M <= 10^9.
    """
    M = int(M)
    if M < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {M}")
    budget = sieve_budget()
    if M > budget:
        raise ResourceLimitError(f"modulus {M} exceeds sieve budget {budget}")
    elements = _bits_to_elements(_residue_bits(M), M)
    return ResidueSet._from_sorted(M, elements)


def full_set(M: int) -> ResidueSet:
    """All of Z_M."""
    return ResidueSet._from_sorted(M, np.arange(M, dtype=np.int64))


def residue_count(M: int) -> int:
    """|R_M|, with |R_1| = 1 (Z_1 = {0})."""
    if M == 1:
        return 1
    return len(quadratic_residues(M))


def stochasticity(U: ResidueSet) -> int:
    """Sum of squared circular gaps, as an exact integer."""
    U._require_gaps()
    g = U.gaps
    # S <= M^2 always, so int64 is exact up to M ~ 3e9.
    if U.modulus < 3_000_000_000:
        return int(np.dot(g, g))
    return sum(int(x) * int(x) for x in g)


def gap_histogram(U: ResidueSet) -> dict[int, int]:
    """Map gap length l to K_l, the number of gaps of that length."""
    U._require_gaps()
    lengths, counts = np.unique(U.gaps, return_counts=True)
    return {int(l): int(c) for l, c in zip(lengths, counts)}


def max_gap(U: ResidueSet) -> int:
    U._require_gaps()
    return int(U.gaps.max())


def r_count(A: int, i: int, j: int) -> int:
    """Number of residues mod A in the cyclic open interval (i, i+j).

    ``r(i, 1) = 0`` by convention (the interval is empty).
    """
    if A < 3:
        raise InvalidModulusError(f"A must be >= 3, got {A}")
    if not 1 <= j <= A:
        raise RangeError(f"j must lie in [1, {A}], got {j}")
    if j == 1:
        return 0
    ind = quadratic_residues(A).indicator()
    idx = (i + 1 + np.arange(j - 1)) % A
    return int(ind[idx].sum())


def r_table(A: int) -> np.ndarray:
    """All r(i, j) at once: ``table[i, j]`` for i in Z_A, j in 1..A (column 0 unused)."""
    ind = quadratic_residues(A).indicator().astype(np.int64)
    # prefix over two periods so every window (i, i+j) is a difference of prefixes
    pref = np.concatenate(([0], np.cumsum(np.concatenate((ind, ind)))))
    i = np.arange(A)[:, None]
    j = np.arange(A + 1)[None, :]
    table = pref[np.maximum(i + j, i + 1)] - pref[i + 1]
    table[:, 0] = 0
    return table


@dataclass(frozen=True)
class ConfigCount:
    """Brute-force size of RN_M(C1, C2) with the applicable main term.

    ``main_term`` and ``bound`` are ``None`` when neither the prime-modulus
    nor the squarefree small-shift hypotheses hold. ``bound`` is only known
    explicitly for prime moduli.
    """

    modulus: int
    c1: frozenset
    c2: frozenset
    count: int
    main_term: Optional[Fraction]
    bound: Optional[float]

    @property
    def deviation(self) -> Optional[Fraction]:
        if self.main_term is None:
            return None
        return abs(self.count - self.main_term)


def _shift_mask(ind: np.ndarray, shifts: Iterable[int], want: bool) -> np.ndarray:
    M = ind.size
    mask = np.ones(M, dtype=bool)
    x = np.arange(M)
    for c in shifts:
        hit = ind[(x + c) % M]
        mask &= hit if want else ~hit
    return mask


def rn_count(M: int, C1: Iterable[int], C2: Iterable[int]) -> ConfigCount:
    """Count x in Z_M with x+c a residue for c in C1 and a non-residue for c in C2.

    Shifts are taken mod M; C1 and C2 must be disjoint as subsets of Z_M.
    """
    M = int(M)
    if M < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {M}")
    c1 = frozenset(int(c) % M for c in C1)
    c2 = frozenset(int(c) % M for c in C2)
    if c1 & c2:
        raise InvalidConfigError(f"C1 and C2 overlap mod {M}: {sorted(c1 & c2)}")
    ind = quadratic_residues(M).indicator()
    count = int((_shift_mask(ind, c1, True) & _shift_mask(ind, c2, False)).sum())

    main_term: Optional[Fraction] = None
    bound: Optional[float] = None
    k = len(c1) + len(c2)
    if is_prime(M):
        main_term = Fraction(M, 2**k)
        bound = 0.5 * k * (math.sqrt(M) + 1)
    else:
        factors = factorize(M)
        if all(e == 1 for e in factors.values()):
            p1 = min(factors)
            raw = set(int(c) for c in C1) | set(int(c) for c in C2)
            if all(0 <= c < p1 for c in raw):
                t = len(factors)
                main_term = Fraction(M, 2 ** (len(c1) * t)) * (1 - Fraction(1, 2**t)) ** len(c2)
    return ConfigCount(M, c1, c2, count, main_term, bound)


def nonresidue_run_count(M: int, H: int) -> int:
    """|N_M(H)|: starting points x of H consecutive non-residues x, ..., x+H-1."""
    if H < 1:
        raise RangeError(f"H must be >= 1, got {H}")
    if H >= M:
        return 0  # every window covers 0, which is a residue
    ind = quadratic_residues(M).indicator()
    return int(_shift_mask(ind, range(H), False).sum())


def legendre_table(p: int) -> np.ndarray:
    """chi(x) for x in Z_p as int8, chi(0) = 0."""
    if p < 3 or not is_prime(p):
        raise InvalidModulusError(f"{p} is not an odd prime")
    chi = np.full(p, -1, dtype=np.int8)
    chi[quadratic_residues(p).elements] = 1
    chi[0] = 0
    return chi


def legendre_product_sum(p: int, shifts: Iterable[int]) -> tuple[int, float]:
    """Exact complete sum of chi(x+a_1)...chi(x+a_r) over Z_p, with the bound r*sqrt(p)."""
    shifts = [int(a) for a in shifts]
    chi = legendre_table(p)
    reduced = [a % p for a in shifts]
    if not reduced:
        raise InvalidConfigError("need at least one shift")
    if len(set(reduced)) != len(reduced):
        raise InvalidConfigError(f"shifts {shifts} are not distinct mod {p}")
    x = np.arange(p)
    prod = np.ones(p, dtype=np.int64)
    for a in reduced:
        prod *= chi[(x + a) % p]
    return int(prod.sum()), len(reduced) * math.sqrt(p)


def disjoint_configurations(universe: Iterable[int], max_total: int):
    """Yield every (C1, C2) of disjoint subsets of ``universe`` with |C1|+|C2| <= max_total."""
    universe = sorted(set(universe))
    for total in range(max_total + 1):
        for chosen in combinations(universe, total):
            for n1 in range(total + 1):
                for c1 in combinations(chosen, n1):
                    c2 = tuple(c for c in chosen if c not in c1)
                    yield c1, c2
