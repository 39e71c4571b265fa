"""Exact scalar arithmetic mod p: inverses, factorials, binomials, trinomials.

All functions return plain ints in [0, p).  Binomial coefficients accept any
integer upper argument; negative ones go through the reflection
binom(n,k) = (-1)^k * binom(k-n-1, k), nonnegative ones through Lucas'
theorem digit by digit in base p.
"""

import math
from functools import lru_cache


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def inv_mod(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(x, p - 2, p)


@lru_cache(maxsize=None)
def fact_mod(n: int, p: int) -> int:
    assert n >= 0
    out = 1
    for i in range(2, n + 1):
        out = out * i % p
    return out


@lru_cache(maxsize=None)
def binom_mod(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p for any integer n; k < 0 gives 0."""
    if k < 0:
        return 0
    if n < 0:
        v = binom_mod(k - n - 1, k, p)
        return (p - v) % p if k % 2 else v
    out = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = out * math.comb(nd, kd) % p
        n //= p
        k //= p
    return out


def trinom_mod(m: int, n: int, i: int, p: int) -> int:
    """(m+n-i)! / ((m-i)! (n-i)! i!) mod p.

    Factored as binom(m+n-i, i) * binom(m+n-2i, m-i) because factorials of
    arguments >= p vanish mod p and cannot be divided directly.
    """
    assert 0 <= i <= min(m, n), (m, n, i)
    return binom_mod(m + n - i, i, p) * binom_mod(m + n - 2 * i, m - i, p) % p
