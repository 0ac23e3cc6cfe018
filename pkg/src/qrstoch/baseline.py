"""Random-set baseline: the average stochasticity of a k-subset of Z_n, and the torus gap law."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .errors import RangeError, ResourceLimitError

BRUTEFORCE_MAX_N = 16
# samples per Monte Carlo block; fixed so results do not depend on scheduling
MC_BLOCK = 4096
MC_RNG = "PCG64"


def s_average(n: int, k: int) -> Fraction:
    """s(k) = n(2n - k + 1) / (k + 1): mean of S(U) over k-subsets U of Z_n."""
    if n < 2 or not 2 <= k <= n:
        raise RangeError(f"need 2 <= k <= n, got n={n}, k={k}")
    return Fraction(n * (2 * n - k + 1), k + 1)


def _subset_stochasticity(n: int, subset: tuple[int, ...]) -> int:
    total = (subset[0] + n - subset[-1]) ** 2
    for a, b in zip(subset, subset[1:]):
        total += (b - a) ** 2
    return total


def s_average_bruteforce(n: int, k: int) -> Fraction:
    """Average of S(U) over all C(n, k) subsets, by enumeration (n <= 16)."""
    if n > BRUTEFORCE_MAX_N:
        raise ResourceLimitError(f"n={n} exceeds enumeration budget {BRUTEFORCE_MAX_N}")
    if n < 2 or not 2 <= k <= n:
        raise RangeError(f"need 2 <= k <= n, got n={n}, k={k}")
    total = sum(_subset_stochasticity(n, U) for U in combinations(range(n), k))
    return Fraction(total, comb(n, k))


def torus_gap_tail(k: int, t: float) -> float:
    """P(s_i > t E s_i) = (1 - t/k)^(k-1) for a uniform k-subset of the circle."""
    if k < 2:
        raise RangeError(f"k must be >= 2, got {k}")
    if not 0 <= t <= k:
        raise RangeError(f"t must lie in [0, {k}], got {t}")
    return (1 - t / k) ** (k - 1)


def _mc_block(seed_seq: np.random.SeedSequence, size: int, k: int, t: float) -> int:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    # One point pinned at 0, k-1 uniform points; after sorting, the first gap
    # is the smallest of the k-1 uniforms.
    pts = rng.random((size, k - 1))
    first_gap = pts.min(axis=1)
    return int(np.count_nonzero(first_gap * k > t))


def torus_gap_tail_mc(k: int, t: float, samples: int, seed: int, workers: int = 1) -> float:
    """Monte Carlo estimate of ``torus_gap_tail`` on the unit circle.

    Samples are split into fixed blocks of ``MC_BLOCK`` with child seeds
    spawned from ``SeedSequence(seed)``, so the estimate depends only on
    (k, t, samples, seed), not on ``workers``.
    """
    if k < 2:
        raise RangeError(f"k must be >= 2, got {k}")
    if samples < 1:
        raise RangeError(f"samples must be >= 1, got {samples}")
    if t <= 0:
        return 1.0  # gaps between almost surely distinct points are positive
    nblocks = -(-samples // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(nblocks)
    sizes = [MC_BLOCK] * (nblocks - 1) + [samples - MC_BLOCK * (nblocks - 1)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            hits = sum(pool.map(_mc_block, children, sizes, [k] * nblocks, [t] * nblocks))
    else:
        hits = sum(_mc_block(c, s, k, t) for c, s in zip(children, sizes))
    return hits / samples


@dataclass(frozen=True)
class IdentityCheck:
    which: str
    u: int
    v: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def binom_identity_check(u: int, v: int, which: str) -> IdentityCheck:
    """Evaluate both sides of one of the three hockey-stick style identities.

    7.3: sum_{a=0}^{v} C(u+v-a, u)       = C(u+v+1, u+1)
    7.4: sum_{a=1}^{v} a C(u+v-a, u)     = C(u+v+1, u+2)
    7.5: sum_{a=1}^{v} a^2 C(u+v-a, u)   = 2 C(u+v+1, u+3) + C(u+v+1, u+2)
    """
    if u < 0 or v < 0:
        raise RangeError(f"u, v must be non-negative, got {u}, {v}")
    which = str(which)
    if which == "7.3":
        lhs = sum(comb(u + v - a, u) for a in range(v + 1))
        rhs = comb(u + v + 1, u + 1)
    elif which == "7.4":
        lhs = sum(a * comb(u + v - a, u) for a in range(1, v + 1))
        rhs = comb(u + v + 1, u + 2)
    elif which == "7.5":
        lhs = sum(a * a * comb(u + v - a, u) for a in range(1, v + 1))
        rhs = 2 * comb(u + v + 1, u + 3) + comb(u + v + 1, u + 2)
    else:
        raise RangeError(f"unknown identity {which!r}; expected 7.3, 7.4 or 7.5")
    return IdentityCheck(which, u, v, lhs, rhs)


def binomial_sigma(p: float, samples: int) -> float:
    return math.sqrt(p * (1 - p) / samples)
