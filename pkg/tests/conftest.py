import numpy as np
import pytest

from sl2ur.pbw import AlgebraContext
from sl2ur.scalars import binom_mod

_CACHE = {}


def shared_ctx(p: int, r: int) -> AlgebraContext:
    """One context per (p, r) per test session so memo tables accumulate."""
    key = (p, r)
    if key not in _CACHE:
        _CACHE[key] = AlgebraContext(p, r)
    return _CACHE[key]


@pytest.fixture(scope="session")
def ctx_for():
    return shared_ctx


def random_element(ctx, rng, nterms=4, bound=None):
    bound = ctx.bound if bound is None else bound
    terms = {}
    for _ in range(nterms):
        mono = tuple(rng.randrange(bound) for _ in range(3))
        terms[mono] = rng.randrange(ctx.p)
    return ctx.from_terms(terms)


def sym_power_action(p: int, d: int):
    """Independent oracle: divided-power action on Sym^d of the natural module.

    Basis m_k = u^(d-k) v^k.  Returns (xmat, ymat, hmat) taking a divided-power
    index n (or binomial depth for H) to a dense matrix over F_p.  Implemented
    straight from the symmetric-power formulas, no pbw machinery involved.
    """

    def xmat(n):
        a = np.zeros((d + 1, d + 1), dtype=np.int64)
        for k in range(d + 1):
            if 0 <= k - n <= d:
                a[k - n, k] = binom_mod(k, n, p)
        return a

    def ymat(n):
        a = np.zeros((d + 1, d + 1), dtype=np.int64)
        for k in range(d + 1):
            if 0 <= k + n <= d:
                a[k + n, k] = binom_mod(d - k, n, p)
        return a

    def hmat(n):
        a = np.zeros((d + 1, d + 1), dtype=np.int64)
        for k in range(d + 1):
            a[k, k] = binom_mod(d - 2 * k, n, p)
        return a

    return xmat, ymat, hmat


def sym_matrix_of(elem, d: int):
    """Matrix of an AlgebraElement on Sym^d via the independent oracle action."""
    p = elem.ctx.p
    xmat, ymat, hmat = sym_power_action(p, d)
    out = np.zeros((d + 1, d + 1), dtype=np.int64)
    for (m, h, mp), c in elem.terms.items():
        out += c * (ymat(m) @ hmat(h) @ xmat(mp) % p)
    return out % p
