import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from qrstoch.baseline import (
    binom_identity_check,
    binomial_sigma,
    s_average,
    s_average_bruteforce,
    torus_gap_tail,
    torus_gap_tail_mc,
)
from qrstoch.errors import RangeError, ResourceLimitError


def compositions_average(n, k):
    """Independent route: subsets through 0 are compositions of n into k parts."""
    total = count = 0

    def rec(remaining, parts, acc):
        nonlocal total, count
        if parts == 1:
            total += acc + remaining * remaining
            count += 1
            return
        for a in range(1, remaining - parts + 2):
            rec(remaining - a, parts - 1, acc + a * a)

    rec(n, k, 0)
    return Fraction(total, count)


def test_s_average_examples():
    assert s_average(5, 2) == 15
    assert s_average(9, 9) == 9
    assert s_average(12, 5) == 40
    assert s_average(15, 6) == Fraction(375, 7)


def test_s_average_prime_half():
    # Only the ~3p asymptotic is asserted; the closed form has denominator k + 1.
    p = 101
    k = (p + 1) // 2
    assert s_average(p, k) == Fraction(p * (2 * p - k + 1), k + 1)
    assert s_average_bruteforce(13, 7) == s_average(13, 7)
    q = 10**6 + 3
    assert float(s_average(q, (q + 1) // 2)) / q == pytest.approx(3, rel=1e-5)


def test_bruteforce_examples():
    assert s_average_bruteforce(5, 2) == 15
    assert s_average_bruteforce(6, 6) == 6
    assert s_average_bruteforce(12, 5) == 40


def test_bruteforce_by_hand_n5_k2():
    pairs = list(combinations(range(5), 2))
    total = sum((b - a) ** 2 + (a + 5 - b) ** 2 for a, b in pairs)
    assert Fraction(total, 10) == s_average_bruteforce(5, 2)


@pytest.mark.parametrize("n", range(2, 11))
def test_bruteforce_matches_compositions(n):
    for k in range(2, n + 1):
        assert s_average_bruteforce(n, k) == compositions_average(n, k)


def test_range_errors():
    with pytest.raises(RangeError):
        s_average(5, 1)
    with pytest.raises(RangeError):
        s_average(5, 6)
    with pytest.raises(ResourceLimitError):
        s_average_bruteforce(17, 3)


@given(st.integers(2, 400).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n))))
def test_cauchy_schwarz_floor(nk):
    n, k = nk
    s = s_average(n, k)
    assert s * k >= n * n
    if k < n:
        assert s * k > n * n


def test_torus_tail_examples():
    assert torus_gap_tail(7, 0) == 1
    assert torus_gap_tail(2, 1) == 0.5
    assert abs(torus_gap_tail(1000, 1) - math.exp(-1)) < 1e-3


def test_torus_tail_range():
    with pytest.raises(RangeError):
        torus_gap_tail(5, 6)
    with pytest.raises(RangeError):
        torus_gap_tail(1, 0.5)


def test_mc_t_zero():
    assert torus_gap_tail_mc(10, 0.0, 1000, seed=1) == 1.0


def test_mc_deterministic_and_partition_independent():
    a = torus_gap_tail_mc(20, 1.0, 20_000, seed=7)
    b = torus_gap_tail_mc(20, 1.0, 20_000, seed=7)
    c = torus_gap_tail_mc(20, 1.0, 20_000, seed=7, workers=2)
    assert a == b == c
    assert torus_gap_tail_mc(20, 1.0, 20_000, seed=8) != a


@pytest.mark.parametrize("k, t", [(2, 0.5), (5, 1.0), (30, 2.0), (100, 0.3)])
def test_mc_within_four_sigma(k, t):
    n = 100_000
    p = torus_gap_tail(k, t)
    est = torus_gap_tail_mc(k, t, n, seed=12345)
    assert abs(est - p) <= 4 * binomial_sigma(p, n)


def test_mc_second_moment():
    # E s_i^2 = 2 n^2 / (k (k+1)) on a circle of length n = 1
    import numpy as np

    k = 10
    rng = np.random.Generator(np.random.PCG64(3))
    gaps = rng.random((200_000, k - 1)).min(axis=1)
    assert (gaps**2).mean() == pytest.approx(2 / (k * (k + 1)), rel=0.02)


@pytest.mark.parametrize(
    "u, v, which, value",
    [(2, 3, "7.3", 20), (9, 0, "7.3", 1), (2, 3, "7.5", 27), (2, 3, "7.4", math.comb(6, 4))],
)
def test_identity_examples(u, v, which, value):
    chk = binom_identity_check(u, v, which)
    assert chk.lhs == chk.rhs == value
    assert chk.holds


def test_identity_unknown():
    with pytest.raises(RangeError):
        binom_identity_check(1, 1, "7.6")
