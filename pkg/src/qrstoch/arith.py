"""Small integer helpers: primality, factorization, squarefreeness."""
from __future__ import annotations

import math

from sympy import factorint, isprime as _isprime, nextprime

from .errors import InvalidModulusError, ResourceLimitError

# sympy's factorint falls back to ECM/Pollard beyond trial division; past this
# size runtime is no longer predictable for adversarial inputs.
FACTOR_LIMIT = 1 << 100


def is_prime(n: int) -> bool:
    return n >= 2 and bool(_isprime(n))


def factorize(n: int) -> dict[int, int]:
    """Return ``{prime: exponent}`` for ``n >= 1``."""
    if n < 1:
        raise InvalidModulusError(f"cannot factor {n}")
    if n > FACTOR_LIMIT:
        raise ResourceLimitError(f"{n} exceeds the factorization budget 2^100")
    return {int(p): int(e) for p, e in factorint(n).items()}


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


def least_prime_factor(n: int) -> float:
    """P^-(n); ``inf`` for n = 1 so that any lower bound holds vacuously."""
    if n == 1:
        return math.inf
    return min(factorize(n))


def next_prime_coprime(start: int, avoid: int) -> int:
    """Smallest prime >= start that does not divide ``avoid``."""
    p = int(nextprime(start - 1))
    while avoid % p == 0:
        p = int(nextprime(p))
    return p


def residue_count_formula(n: int) -> int:
    """|R_n| for squarefree n via CRT: product of (p+1)/2, with |R_2| = 2."""
    total = 1
    for p, e in factorize(n).items():
        if e != 1:
            raise InvalidModulusError(f"{n} is not squarefree")
        total *= 2 if p == 2 else (p + 1) // 2
    return total
