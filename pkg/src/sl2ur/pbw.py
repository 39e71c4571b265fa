"""Sparse exact engine for the divided-power algebra of SL2 over F_p.

Elements live in the PBW basis Y^(m) * binom(H,h) * X^(mp); a monomial is the
tuple (m, h, mp) and an element is a sparse {monomial: coefficient} map with
coefficients in [1, p).  Products are rewritten into normal form through the
commutation identities for divided powers:

  X^(a) Y^(b)            = sum_i Y^(b-i) binom(H-a-b+2i, i) X^(a-i)
  binom(H+s, k) Y^(n)    = Y^(n) binom(H+s-2n, k)
  binom(H+s, k) X^(n)    = X^(n) binom(H+s+2n, k)
  X^(a) X^(b)            = binom(a+b, b) X^(a+b)        (same for Y)
  binom(H,a) binom(H,b)  = sum_i trinom(a,b,i) binom(H, a+b-i)
  binom(H+s, k)          = sum_u binom(s, k-u) binom(H, u)

The monomial-pair expansion is memoized per context; that table is the
performance-critical artifact (closures hit the same pairs constantly).
"""

import itertools

import numpy as np

from .scalars import binom_mod, inv_mod, is_prime, trinom_mod


class EngineError(RuntimeError):
    """Internal consistency failure: a closed-form claim the engine relies on
    (triangular solves, membership bounds) did not hold for computed data."""


class AlgebraContext:
    """Carries p, the level r, the U_r basis enumeration, and all memo tables."""

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        self.p = p
        self.r = r
        self.bound = p**r  # indices in U_r run over [0, bound)
        self.dim = p ** (3 * r)
        self.basis_list = list(itertools.product(range(self.bound), repeat=3))
        self.basis_index = {mono: i for i, mono in enumerate(self.basis_list)}
        self._mono_cache = {}
        self._shift_cache = {}
        self._hpair_cache = {}
        self._left_mats = {}
        self._right_mats = {}
        self.cache = {}  # scratch for higher layers (idempotent towers etc.)

    # -- element constructors ------------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(0, 0, 0): 1})

    def scalar(self, c: int) -> "AlgebraElement":
        c %= self.p
        return AlgebraElement(self, {(0, 0, 0): c} if c else {})

    def x(self, n: int, c: int = 1) -> "AlgebraElement":
        return self.monomial(0, 0, n, c)

    def y(self, n: int, c: int = 1) -> "AlgebraElement":
        return self.monomial(n, 0, 0, c)

    def h(self, n: int, c: int = 1) -> "AlgebraElement":
        return self.monomial(0, n, 0, c)

    def monomial(self, m: int, h: int, mp: int, c: int = 1) -> "AlgebraElement":
        assert m >= 0 and h >= 0 and mp >= 0
        c %= self.p
        return AlgebraElement(self, {(m, h, mp): c} if c else {})

    def from_terms(self, terms) -> "AlgebraElement":
        out = {}
        for mono, c in dict(terms).items():
            c %= self.p
            if c:
                out[mono] = c
        return AlgebraElement(self, out)

    # -- monomial product expansion -------------------------------------------

    def _shifted_h(self, c: int, k: int):
        """binom(H+c, k) in the binom(H,u) basis, as a tuple of (u, coeff)."""
        key = (c, k)
        out = self._shift_cache.get(key)
        if out is None:
            p = self.p
            out = tuple(
                (u, cv)
                for u in range(k + 1)
                if (cv := binom_mod(c, k - u, p))
            )
            self._shift_cache[key] = out
        return out

    def _h_pair(self, a: int, b: int):
        """binom(H,a)*binom(H,b) in the binom(H,u) basis."""
        key = (a, b) if a <= b else (b, a)
        out = self._hpair_cache.get(key)
        if out is None:
            p = self.p
            out = tuple(
                (a + b - i, cv)
                for i in range(min(a, b) + 1)
                if (cv := trinom_mod(a, b, i, p))
            )
            self._hpair_cache[key] = out
        return out

    def _h_fold(self, ha: dict, hb) -> dict:
        if not hb:
            return {}
        # fast path: hb == {0: 1} means multiplying by 1
        if len(hb) == 1 and hb[0][0] == 0:
            c = hb[0][1]
            if c == 1:
                return ha
            p = self.p
            return {u: cu * c % p for u, cu in ha.items()}
        p = self.p
        out = {}
        for u, cu in ha.items():
            for v, cv in hb:
                c = cu * cv % p
                for w, cw in self._h_pair(u, v):
                    nv = (out.get(w, 0) + c * cw) % p
                    if nv:
                        out[w] = nv
                    elif w in out:
                        del out[w]
        return out

    def mono_mul(self, a, b) -> dict:
        """Normal form of (monomial a) * (monomial b) as a {monomial: coeff} map."""
        key = (a, b)
        out = self._mono_cache.get(key)
        if out is not None:
            return out
        p = self.p
        m1, h1, e1 = a
        m2, h2, e2 = b
        acc = {}
        for i in range(min(e1, m2) + 1):
            n2 = m2 - i
            e3 = e1 - i
            cy = binom_mod(m1 + n2, n2, p)
            if not cy:
                continue
            cx = binom_mod(e3 + e2, e2, p)
            if not cx:
                continue
            c0 = cy * cx % p
            hpart = dict(self._shifted_h(-2 * n2, h1))
            hpart = self._h_fold(hpart, self._shifted_h(2 * i - e1 - m2, i))
            hpart = self._h_fold(hpart, self._shifted_h(-2 * e3, h2))
            big_m = m1 + n2
            big_e = e3 + e2
            for u, cu in hpart.items():
                mono = (big_m, u, big_e)
                nv = (acc.get(mono, 0) + c0 * cu) % p
                if nv:
                    acc[mono] = nv
                elif mono in acc:
                    del acc[mono]
        self._mono_cache[key] = acc
        return acc

    # -- coordinates over the U_r basis ----------------------------------------

    def vec(self, x: "AlgebraElement") -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        idx = self.basis_index
        for mono, c in x.terms.items():
            pos = idx.get(mono)
            if pos is None:
                raise ValueError(f"element leaves U_{self.r}: monomial {mono}")
            out[pos] = c
        return out

    def unvec(self, arr) -> "AlgebraElement":
        terms = {}
        p = self.p
        for pos in np.nonzero(arr)[0]:
            c = int(arr[pos]) % p
            if c:
                terms[self.basis_list[pos]] = c
        return AlgebraElement(self, terms)

    def monomial_left_matrix(self, mono) -> np.ndarray:
        """Matrix of left multiplication by a single monomial on U_r."""
        cached = self._left_mats.get(mono)
        if cached is not None:
            return cached
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        idx = self.basis_index
        for j, b in enumerate(self.basis_list):
            for mk, mv in self.mono_mul(mono, b).items():
                mat[idx[mk], j] = mv
        # caching every monomial matrix would cost dim^2 per entry, too much
        # beyond (2,2)/(5,1)-sized algebras; generators are always kept hot
        if self.dim <= 216 or sum(d != 0 for d in mono) <= 1:
            self._left_mats[mono] = mat
        return mat

    def monomial_right_matrix(self, mono) -> np.ndarray:
        """Matrix of right multiplication by a single monomial on U_r."""
        cached = self._right_mats.get(mono)
        if cached is not None:
            return cached
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        idx = self.basis_index
        for j, b in enumerate(self.basis_list):
            for mk, mv in self.mono_mul(b, mono).items():
                mat[idx[mk], j] = mv
        if self.dim <= 216 or sum(d != 0 for d in mono) <= 1:
            self._right_mats[mono] = mat
        return mat

    def gen_matrix(self, kind: str, i: int) -> np.ndarray:
        """Left multiplication by X^(p^i), Y^(p^i) or binom(H,p^i) on U_r."""
        q = self.p**i
        mono = {"X": (0, 0, q), "Y": (q, 0, 0), "H": (0, q, 0)}[kind]
        return self.monomial_left_matrix(mono)

    def left_matrix(self, x: "AlgebraElement") -> np.ndarray:
        """Matrix of left multiplication by x on U_r (x need not be monomial)."""
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        idx = self.basis_index
        p = self.p
        for mono, c in x.terms.items():
            for j, b in enumerate(self.basis_list):
                for mk, mv in self.mono_mul(mono, b).items():
                    mat[idx[mk], j] = (mat[idx[mk], j] + c * mv) % p
        return mat

    def right_matrix(self, x: "AlgebraElement") -> np.ndarray:
        """Matrix of right multiplication by x on U_r."""
        mat = np.zeros((self.dim, self.dim), dtype=np.int64)
        idx = self.basis_index
        p = self.p
        for mono, c in x.terms.items():
            for j, b in enumerate(self.basis_list):
                for mk, mv in self.mono_mul(b, mono).items():
                    mat[idx[mk], j] = (mat[idx[mk], j] + c * mv) % p
        return mat

    def __repr__(self):
        return f"AlgebraContext(p={self.p}, r={self.r})"


class AlgebraElement:
    """Sparse element of the divided-power algebra; immutable by convention."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: dict):
        self.ctx = ctx
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mono) -> int:
        return self.terms.get(mono, 0)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        p = self.ctx.p
        out = dict(self.terms)
        for mono, c in other.terms.items():
            nv = (out.get(mono, 0) + c) % p
            if nv:
                out[mono] = nv
            elif mono in out:
                del out[mono]
        return AlgebraElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return AlgebraElement(self.ctx, {m: (p - c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        p = ctx.p
        if isinstance(other, int):
            c = other % p
            if c == 0:
                return ctx.zero()
            return AlgebraElement(ctx, {m: cv * c % p for m, cv in self.terms.items()})
        out = {}
        mono_mul = ctx.mono_mul
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                c = ca * cb % p
                if not c:
                    continue
                for mk, mv in mono_mul(ma, mb).items():
                    nv = (out.get(mk, 0) + c * mv) % p
                    if nv:
                        out[mk] = nv
                    elif mk in out:
                        del out[mk]
        return AlgebraElement(ctx, out)

    def __rmul__(self, other):
        assert isinstance(other, int)
        return self * other

    def __pow__(self, n: int):
        assert n >= 0
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return format_element(self)


# -- structure maps ------------------------------------------------------------


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def fr(x: AlgebraElement) -> AlgebraElement:
    """The Frobenius endomorphism: divides every index by p, kills the rest."""
    p = x.ctx.p
    out = {}
    for (m, h, mp), c in x.terms.items():
        if m % p == 0 and h % p == 0 and mp % p == 0:
            out[(m // p, h // p, mp // p)] = c
    return AlgebraElement(x.ctx, out)


def fr_prime(x: AlgebraElement) -> AlgebraElement:
    """The linear section of fr: multiplies every index by p, basis-wise."""
    p = x.ctx.p
    return AlgebraElement(
        x.ctx, {(m * p, h * p, mp * p): c for (m, h, mp), c in x.terms.items()}
    )


def degree_components(x: AlgebraElement) -> dict:
    """Splits x by monomial degree mp - m; the degree-0 part is the A-part."""
    buckets = {}
    for mono, c in x.terms.items():
        d = mono[2] - mono[0]
        buckets.setdefault(d, {})[mono] = c
    return {d: AlgebraElement(x.ctx, t) for d, t in sorted(buckets.items())}


def in_ur(x: AlgebraElement, level: int | None = None) -> bool:
    ctx = x.ctx
    bound = ctx.p ** (ctx.r if level is None else level)
    return all(m < bound and h < bound and mp < bound for (m, h, mp) in x.terms)


def weight_of(x: AlgebraElement, full: bool = False) -> int | None:
    """Weight of x as a simultaneous eigenvector of the binom(H,p^i) family.

    Returns lambda in [0, p^r) with binom(H,p^i).x = binom(lambda,p^i).x for
    i < r, or None when x is not a weight vector.  Checking the p^i family
    suffices by Lucas; full=True audits every binom(H,n), n < p^r.
    """
    ctx = x.ctx
    if x.is_zero():
        raise ValueError("weight of the zero element is undefined")
    if not in_ur(x):
        raise ValueError(f"element is not in U_{ctx.r}")
    p = ctx.p
    probe = next(iter(x.terms))
    inv_lead = inv_mod(x.terms[probe], p)
    digits = []
    for i in range(ctx.r):
        hx = ctx.h(p**i) * x
        c = hx.coeff(probe) * inv_lead % p
        if hx != x * c:
            return None
        digits.append(c)
    lam = sum(c * p**i for i, c in enumerate(digits))
    if full:
        for n in range(1, ctx.bound):
            if ctx.h(n) * x != x * binom_mod(lam, n, p):
                return None
    return lam


# -- serialization ---------------------------------------------------------------


def to_records(x: AlgebraElement) -> list:
    """Canonical JSON-ready form: terms sorted lexicographically on (m, h, mp)."""
    return [
        {"m": m, "h": h, "mp": mp, "c": c}
        for (m, h, mp), c in sorted(x.terms.items())
    ]


def from_records(ctx: AlgebraContext, records) -> AlgebraElement:
    return ctx.from_terms({(t["m"], t["h"], t["mp"]): t["c"] for t in records})


def format_element(x: AlgebraElement) -> str:
    """Canonical text form, e.g. 'Y(1)X(1) + H(1)' or '1 + 2H(1) + H(2)'.

    Terms are listed with higher Y-degree first, then by ascending H and X
    indices, so products read in the order the rewriting rules emit them.
    """
    if x.is_zero():
        return "0"
    parts = []
    for (m, h, mp), c in sorted(x.terms.items(), key=lambda t: (-t[0][0], t[0][1], t[0][2])):
        factors = ""
        if m:
            factors += f"Y({m})"
        if h:
            factors += f"H({h})"
        if mp:
            factors += f"X({mp})"
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append(factors)
        else:
            parts.append(f"{c}{factors}")
    return " + ".join(parts)


# -- batched products --------------------------------------------------------------


def pairwise_products(ctx: AlgebraContext, elems: list) -> np.ndarray:
    """All products elems[i]*elems[j] as U_r coordinate vectors, shape (n, n, dim).

    Contracts the memoized monomial table against the coefficient matrix with
    numpy instead of looping over n^2 sparse products; used for the idempotent
    orthogonality certificates where n^2 reaches ~1300.
    """
    p = ctx.p
    support = sorted({mono for e in elems for mono in e.terms})
    pos = {mono: i for i, mono in enumerate(support)}
    ns = len(support)
    n = len(elems)
    coeffs = np.zeros((n, ns), dtype=np.int64)
    for i, e in enumerate(elems):
        for mono, c in e.terms.items():
            coeffs[i, pos[mono]] = c
    table = np.zeros((ns, ns, ctx.dim), dtype=np.int64)
    idx = ctx.basis_index
    for s, ms in enumerate(support):
        for t, mt in enumerate(support):
            for mk, mv in ctx.mono_mul(ms, mt).items():
                table[s, t, idx[mk]] = mv
    left = np.tensordot(coeffs, table, axes=(1, 0)) % p  # (n, ns, dim)
    out = np.einsum("jt,itv->ijv", coeffs, left) % p  # (i, j, dim)
    return out
