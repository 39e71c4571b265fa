"""Concrete matrix modules: the regular module, cyclic submodules, and the
simple modules built from twisted tensor products of symmetric powers.

A module is stored as one matrix per generator X^(p^i), Y^(p^i), i < r.
These 2r elements generate the whole algebra, so every other action
matrix is assembled from them: divided powers via base-p digit products,
and the Cartan binomials via a triangular rewriting of X^(n)Y^(n).
"""

import itertools
from collections import deque

import numpy as np

from .oracle import rref, nullspace
from .pbw import AlgebraElement, AlgebraContext, EngineError
from .scalars import binom_mod, fact_mod, inv_mod


class ModuleRep:
    """Finite-dimensional module over F_p given by generator matrices.

    Matrices act on column coordinate vectors.  For submodules of the
    regular module, basis_labels are algebra elements and `embedding`
    holds their coefficient rows (in RREF, pivot columns in `pivots`),
    so actions can be computed and verified through the exact engine.
    """

    def __init__(
        self,
        ctx,
        dim,
        basis_labels,
        x_action,
        y_action,
        weights=None,
        embedding=None,
        pivots=None,
    ):
        assert len(x_action) == len(y_action) == ctx.r
        assert len(basis_labels) == dim
        self.ctx = ctx
        self.dim = dim
        self.basis_labels = list(basis_labels)
        self.x_action = [np.array(m, dtype=np.int64) % ctx.p for m in x_action]
        self.y_action = [np.array(m, dtype=np.int64) % ctx.p for m in y_action]
        self.weights = None if weights is None else [int(w) for w in weights]
        self.embedding = embedding
        self.pivots = None if pivots is None else list(pivots)
        self._xpow = {}
        self._ypow = {}
        self._hmat = {}
        self._tensor = None

    @property
    def gen_action(self):
        """The 2r generator matrices, X^(p^i) first, then Y^(p^i)."""
        return list(self.x_action) + list(self.y_action)

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, p={self.ctx.p}, r={self.ctx.r})"

    # -- assembling actions from the generators ------------------------------------

    def _coords(self, big):
        """Pull a ctx.dim x ctx.dim action matrix back to module coordinates."""
        p = self.ctx.p
        images = self.embedding @ big.T % p
        coeffs = images[:, self.pivots]
        if not np.array_equal(coeffs @ self.embedding % p, images):
            raise EngineError("action does not preserve the submodule")
        return coeffs.T.copy()

    def _digit_product(self, n, gens, cache):
        got = cache.get(n)
        if got is not None:
            return got
        p = self.ctx.p
        out = np.eye(self.dim, dtype=np.int64)
        unit = 1
        rem, i = n, 0
        while rem:
            d = rem % p
            rem //= p
            for _ in range(d):
                out = gens[i] @ out % p
            unit = unit * fact_mod(d, p) % p
            i += 1
        out = out * inv_mod(unit, p) % p
        cache[n] = out
        return out

    def x_divided(self, n):
        """Matrix of X^(n): digit products of the generators over n!-units."""
        assert 0 <= n < self.ctx.bound
        return self._digit_product(n, self.x_action, self._xpow)

    def y_divided(self, n):
        assert 0 <= n < self.ctx.bound
        return self._digit_product(n, self.y_action, self._ypow)

    def h_matrix(self, n):
        """Matrix of binom(H, n), derived rather than stored.

        Weight modules use the diagonal binom(weight, n).  Submodules of
        the regular module pull back the exact engine matrix.  Otherwise
        binom(H, n) is solved for triangularly from the straightening of
        X^(n)Y^(n), whose i < n terms only involve binom(H, u), u < n.
        """
        assert 0 <= n < self.ctx.bound
        got = self._hmat.get(n)
        if got is not None:
            return got
        p = self.ctx.p
        if n == 0:
            out = np.eye(self.dim, dtype=np.int64)
        elif self.weights is not None:
            out = np.diag([binom_mod(w, n, p) for w in self.weights])
        elif self.embedding is not None:
            out = self._coords(self.ctx.monomial_left_matrix((0, n, 0)))
        else:
            out = self.x_divided(n) @ self.y_divided(n) % p
            for i in range(n):
                inner = np.zeros((self.dim, self.dim), dtype=np.int64)
                for u in range(i + 1):
                    c = binom_mod(2 * i - 2 * n, i - u, p)
                    if c:
                        inner = (inner + c * self.h_matrix(u)) % p
                step = self.y_divided(n - i) @ inner @ self.x_divided(n - i)
                out = (out - step) % p
        self._hmat[n] = out
        return out

    def monomial_action(self, mono):
        """Matrix of the basis monomial Y^(m) binom(H,h) X^(mp)."""
        m, h, mp = mono
        p = self.ctx.p
        if self.embedding is not None:
            return self._coords(self.ctx.monomial_left_matrix(mono))
        out = self.x_divided(mp)
        if h:
            out = self.h_matrix(h) @ out % p
        if m:
            out = self.y_divided(m) @ out % p
        return out

    def action_tensor(self):
        """Stacked actions of every PBW basis monomial, shape (ctx.dim, dim, dim).

        Assembled from generator products in module coordinates; the
        engine-pullback path in monomial_action stays available as an
        independent cross-check for embedded modules.
        """
        if self._tensor is None:
            p = self.ctx.p
            out = np.empty((self.ctx.dim, self.dim, self.dim), dtype=np.int64)
            hx = {}
            for idx, (m, h, mp) in enumerate(self.ctx.basis_list):
                mat = hx.get((h, mp))
                if mat is None:
                    mat = self.h_matrix(h) @ self.x_divided(mp) % p
                    hx[(h, mp)] = mat
                if m:
                    mat = self.y_divided(m) @ mat % p
                out[idx] = mat
            self._tensor = out
        return self._tensor


def action_matrix(z, mod: ModuleRep):
    """Matrix of an arbitrary algebra element on the module."""
    ctx = mod.ctx
    ctx.vec(z)  # raises if z leaves the algebra
    p = ctx.p
    if mod.embedding is not None:
        return mod._coords(ctx.left_matrix(z))
    out = np.zeros((mod.dim, mod.dim), dtype=np.int64)
    for mono, c in z.terms.items():
        out = (out + c * mod.monomial_action(mono)) % p
    return out


def module_payload(mod: ModuleRep):
    """JSON-ready serialization: dimension plus row-major generator matrices."""
    return {
        "dim": mod.dim,
        "generators": [
            [[int(v) for v in row] for row in g] for g in mod.gen_action
        ],
    }


# -- cyclic submodules of the regular module ------------------------------------------


def cyclic_module(z: AlgebraElement, ctx: AlgebraContext) -> ModuleRep:
    """The submodule generated by z, by closure under the 2r generators.

    Maintains an echelonized basis (first-nonzero pivots in the PBW
    coordinate order) and feeds every new vector back through the
    generators.  The Cartan generators binom(H, p^i) are redundant for
    closure but are applied once the X/Y closure stabilizes, as a guard.
    """
    if z.is_zero():
        raise ValueError("cyclic module generator must be nonzero")
    p = ctx.p
    v0 = ctx.vec(z)
    key = ("cyclic_module", z)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached

    rows = np.zeros((ctx.dim, ctx.dim), dtype=np.int64)
    pivots = []
    count = 0
    work = deque()

    def reduce_add(v):
        nonlocal count
        v = v % p
        if count:
            v = (v - v[pivots] @ rows[:count]) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = v * inv_mod(int(v[piv]), p) % p
        col = rows[:count, piv].copy()
        hit = np.nonzero(col)[0]
        if hit.size:
            rows[hit] = (rows[hit] - np.outer(col[hit], v)) % p
        rows[count] = v
        pivots.append(piv)
        count += 1
        work.append(v.copy())
        return True

    gens = [ctx.gen_matrix("X", i) for i in range(ctx.r)]
    gens += [ctx.gen_matrix("Y", i) for i in range(ctx.r)]
    guards = [ctx.gen_matrix("H", i) for i in range(ctx.r)]

    reduce_add(v0)
    while True:
        while work:
            base = work.popleft()
            for g in gens:
                reduce_add(g @ base % p)
        grew = False
        for g in guards:
            for j in range(count):
                grew |= reduce_add(g @ rows[j] % p)
        if not grew:
            break

    order = np.argsort(np.array(pivots, dtype=np.int64))
    emb = rows[:count][order].copy()
    piv_sorted = [pivots[k] for k in order]

    def pulled(g):
        images = emb @ g.T % p
        coeffs = images[:, piv_sorted]
        if not np.array_equal(coeffs @ emb % p, images):
            raise EngineError("generator closure left the computed span")
        return coeffs.T.copy()

    x_action = [pulled(gens[i]) for i in range(ctx.r)]
    y_action = [pulled(gens[ctx.r + i]) for i in range(ctx.r)]
    labels = [ctx.unvec(row) for row in emb]
    mod = ModuleRep(
        ctx,
        count,
        labels,
        x_action,
        y_action,
        embedding=emb,
        pivots=piv_sorted,
    )
    ctx.cache[key] = mod
    return mod


# -- simple modules --------------------------------------------------------------------


def simple_module(lam: int, ctx: AlgebraContext) -> ModuleRep:
    """L(lam) as a twisted tensor product over the base-p digits of lam.

    Each digit d contributes a weight basis m_0..m_d with
    X^(n) m_k = binom(d-k+n, n) m_{k-n} and Y^(n) m_k = binom(k+n, n) m_{k+n};
    the i-th tensor slot carries the action of X^(p^i) and Y^(p^i).
    """
    p, r = ctx.p, ctx.r
    if not 0 <= lam < ctx.bound:
        raise ValueError(f"highest weight must lie in [0, {ctx.bound - 1}]")
    digits = [(lam // p**i) % p for i in range(r)]
    basis = list(itertools.product(*[range(d + 1) for d in digits]))
    index = {k: pos for pos, k in enumerate(basis)}
    dim = len(basis)

    x_action, y_action = [], []
    for i in range(r):
        xm = np.zeros((dim, dim), dtype=np.int64)
        ym = np.zeros((dim, dim), dtype=np.int64)
        for k in basis:
            col = index[k]
            if k[i] >= 1:
                lower = k[:i] + (k[i] - 1,) + k[i + 1 :]
                xm[index[lower], col] = (digits[i] - k[i] + 1) % p
            if k[i] < digits[i]:
                upper = k[:i] + (k[i] + 1,) + k[i + 1 :]
                ym[index[upper], col] = (k[i] + 1) % p
        x_action.append(xm)
        y_action.append(ym)

    weights = [
        sum(p**i * (digits[i] - 2 * k[i]) for i in range(r)) for k in basis
    ]
    return ModuleRep(ctx, dim, basis, x_action, y_action, weights=weights)


# -- weight-space analysis -------------------------------------------------------------


def _refine_rows(mod: ModuleRep, start):
    """Split the row span of `start` into joint eigenspaces of the
    binom(H, p^i) family; returns [(weight mod p^r, rows)] with rows in
    ambient module coordinates.  Raises if the family is not semisimple."""
    p, r = mod.ctx.p, mod.ctx.r
    base, k0, _ = rref(start, p)
    if k0 == 0:
        return []
    spaces = [((), base)]
    for i in range(r):
        hmat = mod.h_matrix(p**i)
        refined = []
        for digits, R in spaces:
            R, k, piv = rref(R, p)
            full = R @ hmat.T % p
            coeffs = full[:, piv]
            if not np.array_equal(coeffs @ R % p, full):
                raise EngineError("Cartan action does not preserve a weight slice")
            found = 0
            for c in range(p):
                shifted = (coeffs - c * np.eye(k, dtype=np.int64)) % p
                ker = nullspace(shifted.T, p)
                if ker.shape[0]:
                    refined.append((digits + (c,), ker @ R % p))
                    found += ker.shape[0]
            if found != k:
                raise EngineError("Cartan family failed to act semisimply")
        spaces = refined
    out = []
    for digits, R in spaces:
        w = sum(d * p**i for i, d in enumerate(digits)) % mod.ctx.bound
        out.append((w, R))
    return out


def weight_decompose(mod: ModuleRep, rows=None):
    """Multiplicity of each weight (as a residue mod p^r) in the module,
    or in the submodule spanned by the given coordinate rows."""
    if rows is None:
        rows = np.eye(mod.dim, dtype=np.int64)
    return {w: rr.shape[0] for w, rr in _refine_rows(mod, rows)}


def find_maximal_vectors(mod: ModuleRep):
    """Basis of the joint kernel of all X^(p^i), tagged with weights.

    Returns [(coordinate vector, weight mod p^r)].  Killing the X^(p^i)
    kills every X^(n), n < p^r, since those are digit products of the
    generators, so these are exactly the maximal vectors.
    """
    stacked = np.vstack(mod.x_action) % mod.ctx.p
    ker = nullspace(stacked, mod.ctx.p)
    out = []
    for w, rows in _refine_rows(mod, ker):
        for row in rows:
            out.append((row.copy(), w))
    return out
