"""Scalar layer: binomials against an exact integer oracle."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from sl2ur.scalars import binom_mod, fact_mod, inv_mod, is_prime, trinom_mod

PRIMES = [2, 3, 5]


def int_binom(n: int, k: int) -> int:
    """Integer oracle: falling-factorial binomial, any integer n, k >= 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


def test_frozen_values():
    assert binom_mod(-1, 3, 5) == 4
    assert binom_mod(4, 2, 3) == 0
    assert binom_mod(7, 3, 2) == 1  # 35 mod 2; Lucas digits 111 / 011
    assert trinom_mod(1, 1, 0, 3) == 2
    assert trinom_mod(1, 1, 1, 3) == 1
    assert trinom_mod(2, 2, 1, 2) == 0  # 3!/1!1!1! = 6


def test_binom_against_integer_oracle_nonnegative():
    for p in PRIMES:
        for n in range(p**4):
            for k in range(0, min(n + 3, 40)):
                assert binom_mod(n, k, p) == int_binom(n, k) % p, (n, k, p)


def test_binom_against_integer_oracle_negative():
    for p in PRIMES:
        for n in range(-60, 0):
            for k in range(0, 25):
                assert binom_mod(n, k, p) == int_binom(n, k) % p, (n, k, p)


@given(st.sampled_from(PRIMES), st.integers(-10**6, 10**6), st.integers(0, 60))
def test_binom_matches_oracle_sampled(p, n, k):
    assert binom_mod(n, k, p) == int_binom(n, k) % p


@given(
    st.sampled_from(PRIMES),
    st.integers(-200, 200),
    st.integers(-200, 200),
    st.integers(0, 30),
)
@settings(max_examples=300)
def test_vandermonde(p, s, t, k):
    total = sum(binom_mod(s, k - i, p) * binom_mod(t, i, p) for i in range(k + 1))
    assert total % p == binom_mod(s + t, k, p)


def test_carry_closure_exhaustive():
    # binom(m+n, n) = 0 mod p whenever m, n <= p^r - 1 but m + n >= p^r
    for p in [2, 3, 5]:
        for r in [1, 2]:
            bound = p**r
            for m in range(bound):
                for n in range(bound):
                    if m + n >= bound:
                        assert binom_mod(m + n, n, p) == 0, (p, r, m, n)


def test_trinomial_factored_form_matches_factorials():
    for p in PRIMES:
        for m in range(8):
            for n in range(8):
                for i in range(min(m, n) + 1):
                    exact = math.factorial(m + n - i) // (
                        math.factorial(m - i) * math.factorial(n - i) * math.factorial(i)
                    )
                    assert trinom_mod(m, n, i, p) == exact % p


def test_inverses():
    for p in PRIMES:
        for x in range(1, p):
            assert x * inv_mod(x, p) % p == 1
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 5)


def test_fact_mod():
    for p in PRIMES:
        for n in range(12):
            assert fact_mod(n, p) == math.factorial(n) % p


def test_is_prime():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
