"""Brute-force linear algebra over F_p used as ground truth.

Everything here is deliberately naive: row reduction, kernels, and
subspace arithmetic on dense integer matrices.  The structural reports
in :mod:`sl2ur.structure` are checked against these routines, so this
module must stay independent of the closed-form constructions it is
used to verify.  The only algebra-specific facts used are that the
simple modules are known constructively (tensor products of twisted
symmetric powers, built in :mod:`sl2ur.modules`) and that an element
annihilating every simple module lies in the radical.
"""

import numpy as np

from .scalars import inv_mod


def rref(mat, p):
    """Reduced row echelon form of an integer matrix over F_p.

    Returns (rows, rank, pivots) where rows is a (rank x ncols) array
    in RREF, and pivots lists the pivot column of each row in order.
    """
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    nrows, ncols = a.shape
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        pr = rank + int(nz[0])
        if pr != rank:
            a[[rank, pr]] = a[[pr, rank]]
        a[rank] = a[rank] * inv_mod(int(a[rank, col]), p) % p
        other = a[:, col].copy()
        other[rank] = 0
        hit = np.nonzero(other)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(other[hit], a[rank])) % p
        pivots.append(col)
        rank += 1
    return a[:rank], rank, pivots


def mat_mul_mod(a, b, p):
    """Exact (a @ b) % p routed through float64 BLAS.

    numpy integer matmul does not use BLAS and is far slower on the
    sizes that show up here.  Entries are reduced mod p first, so every
    float product is exact as long as inner_dim * p^2 < 2^53; the
    assert guards that.
    """
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    inner = a.shape[-1]
    assert inner * (p - 1) ** 2 < 2**53, "accumulator may lose precision"
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return np.rint(prod).astype(np.int64) % p


def nullspace(mat, p):
    """Basis of the right kernel {v : mat @ v = 0}, as rows of an array."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    ncols = a.shape[1]
    rows, rank, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-int(rows[i, f])) % p
    return basis


class Subspace:
    """Subspace of F_p^n stored as an RREF row basis."""

    def __init__(self, ambient, vectors, p):
        self.ambient = ambient
        self.p = p
        if len(vectors) == 0:
            self.rows = np.zeros((0, ambient), dtype=np.int64)
            self.pivots = []
        else:
            arr = np.array(vectors, dtype=np.int64).reshape(-1, ambient)
            self.rows, _, self.pivots = rref(arr, p)

    def dim(self):
        return self.rows.shape[0]

    def contains_vector(self, v):
        v = np.asarray(v, dtype=np.int64).reshape(self.ambient) % self.p
        if self.dim():
            v = (v - v[self.pivots] @ self.rows) % self.p
        return not v.any()

    def contains(self, other):
        assert other.ambient == self.ambient
        return all(self.contains_vector(row) for row in other.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.dim() == other.dim()
            and self.contains(other)
        )

    def __hash__(self):
        raise TypeError("Subspace is unhashable")

    def sum(self, other):
        assert other.ambient == self.ambient
        stacked = np.vstack([self.rows, other.rows])
        return Subspace(self.ambient, stacked, self.p)

    def intersect(self, other):
        assert other.ambient == self.ambient
        if self.dim() == 0 or other.dim() == 0:
            return Subspace(self.ambient, [], self.p)
        # x = alpha @ self.rows lies in other iff alpha kills the
        # residues of self.rows after reduction against other.rows.
        resid = (self.rows - self.rows[:, other.pivots] @ other.rows) % self.p
        alphas = nullspace(resid.T, self.p)
        return Subspace(self.ambient, alphas @ self.rows % self.p, self.p)


def subspace_equal(a, b):
    if a.ambient != b.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    return a == b


def radical_oracle(ctx):
    """Jacobson radical of the full algebra as a Subspace of coefficient vectors.

    rad = intersection of the kernels of the actions on all simple
    modules, computed by stacking one column block per simple.
    """
    cached = ctx.cache.get("radical_oracle")
    if cached is not None:
        return cached
    from .modules import simple_module

    blocks = []
    for lam in range(ctx.bound):
        mod = simple_module(lam, ctx)
        tensor = mod.action_tensor()
        blocks.append(tensor.reshape(ctx.dim, mod.dim * mod.dim))
    phi = np.concatenate(blocks, axis=1)
    rad = Subspace(ctx.dim, nullspace(phi.T, ctx.p), ctx.p)
    ctx.cache["radical_oracle"] = rad
    return rad


def socle_oracle(mod, rad):
    """Socle of a module: joint kernel of the radical action.

    Returns a Subspace in the module's own coordinates.
    """
    if rad.dim() == 0:
        return Subspace(mod.dim, np.eye(mod.dim, dtype=np.int64), mod.ctx.p)
    tensor = mod.action_tensor()
    flat = tensor.reshape(tensor.shape[0], mod.dim * mod.dim)
    acts = mat_mul_mod(rad.rows, flat, mod.ctx.p)
    stacked = acts.reshape(rad.dim() * mod.dim, mod.dim)
    return Subspace(mod.dim, nullspace(stacked, mod.ctx.p), mod.ctx.p)


def nilpotency_index(ctx, rad, dim_limit=216):
    """Smallest k with rad^k = 0, by iterated left multiplication.

    Builds one left-multiplication matrix per radical basis vector, so
    it is only run on small algebras (ctx.dim <= dim_limit).
    """
    if ctx.dim > dim_limit:
        raise ValueError("algebra too large for the direct nilpotency check")
    p = ctx.p
    mats = [ctx.left_matrix(ctx.unvec(row)) for row in rad.rows]
    current = rad.rows
    k = 1
    while current.shape[0]:
        images = [m @ current.T % p for m in mats]
        if images:
            stacked = np.hstack(images).T
        else:
            stacked = np.zeros((0, ctx.dim), dtype=np.int64)
        current, _, _ = rref(stacked, p)
        k += 1
        assert k <= 3 * ctx.r * p, "radical power chain failed to terminate"
    return k
