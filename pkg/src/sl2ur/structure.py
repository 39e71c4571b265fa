"""Structure theory of U_r as executable, self-verifying constructions.

Each function returns data together with certificates that were checked
against the exact engine and, where one exists, against the brute-force
linear-algebra oracle.  A failed certificate raises VerificationError
instead of returning a flagged result: the closed-form combinatorics
(translated idempotent bases, window counts, nu-vectors) must reproduce
the machine-computed radicals, socles and dimensions exactly.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .idempotents import (
    b_r,
    b_translated,
    classify,
    in_x_set,
    in_y_set,
    index_quadruple,
    index_table,
    label_tuples,
    sigma_tau,
    theta_set,
    validate_pair,
)
from .modules import (
    cyclic_module,
    find_maximal_vectors,
    simple_module,
    weight_decompose,
)
from .oracle import (
    Subspace,
    mat_mul_mod,
    radical_oracle,
    rref,
    socle_oracle,
    subspace_equal,
)
from .pbw import pairwise_products


class VerificationError(RuntimeError):
    """A structural certificate failed to check out against the engine."""


@dataclass
class BasisReport:
    """A verified family of translated idempotents spanning a module.

    label is (label tuple, eps); elements is a list of (theta, t, element)
    in the deterministic enumeration order; verified maps check names to
    booleans (all True by construction, else the constructor raised).
    """

    label: tuple
    elements: list
    claimed_dim: int
    verified: dict


@dataclass
class NuVector:
    """Per-slot socle dimensions minus one, and the highest weight they encode."""

    nu: tuple
    lam: int


@dataclass
class HeadSocleReport:
    label: tuple
    module: object
    lam: int
    head_dim: int
    socle_dim: int
    verified: dict
    self_dual_weights: bool  # informational only, never asserted


def format_label(label_tuple):
    """Slot list "a,j;a,j;..." with half-integer j printed as n/2."""
    parts = []
    for a, j2 in label_tuple:
        j = str(j2 // 2) if j2 % 2 == 0 else f"{j2}/2"
        parts.append(f"{a},{j}")
    return ";".join(parts)


def _validated(label_tuple, ctx):
    tup = tuple(validate_pair(pr, ctx.p) for pr in label_tuple)
    if len(tup) != ctx.r:
        raise ValueError(f"label tuple must have length r={ctx.r}, got {len(tup)}")
    return tup


def _reduced(label_tuple, p):
    return tuple((pr.a % p, pr.j2) for pr in label_tuple)


def nu_vector(label_tuple, p):
    """The integer table nu_i = 2j-1 (cases A/D) or p-2j-1 (cases B/C).

    Cross-checked against two other descriptions: the shifted base point
    b_i + 2 n^(0) and the window length n^(0) + nt^(0).
    """
    nus = []
    for pr in label_tuple:
        pr = validate_pair(pr, p)
        tag = classify(pr, p)
        nu = pr.j2 - 1 if tag.case in ("A", "D") else p - pr.j2 - 1
        assert 0 <= nu <= p - 1, (pr, nu)
        quad = index_quadruple(pr, p)
        base = pr.a % p - (p if tag.case in ("A", "C") else 0)
        assert base + 2 * quad.n0 == nu, (pr, nu)
        assert quad.n0 + quad.nt0 == nu, (pr, nu)
        nus.append(nu)
    lam = sum(n * p**i for i, n in enumerate(nus))
    return NuVector(tuple(nus), lam)


def unity_decomposition(ctx):
    """All |P|^r idempotents B^(0), verified orthogonal with sum 1."""
    cached = ctx.cache.get("unity_decomposition")
    if cached is not None:
        return cached
    tuples = label_tuples(ctx.p, ctx.r)
    zero = (0,) * ctx.r
    elems = [b_r(tup, zero, ctx) for tup in tuples]
    table = pairwise_products(ctx, elems)
    vecs = np.array([ctx.vec(e) for e in elems], dtype=np.int64)
    for i, tup in enumerate(tuples):
        if not np.array_equal(table[i, i], vecs[i]):
            raise VerificationError(f"B(0)({format_label(tup)}) is not idempotent")
        for k in range(len(tuples)):
            if k != i and table[i, k].any():
                raise VerificationError(
                    f"B(0)({format_label(tup)}) and B(0)({format_label(tuples[k])}) "
                    "are not orthogonal"
                )
    if not np.array_equal(vecs.sum(axis=0) % ctx.p, ctx.vec(ctx.one())):
        raise VerificationError("idempotent family does not sum to 1")
    out = list(zip(tuples, elems))
    ctx.cache["unity_decomposition"] = out
    return out


def module_basis(label_tuple, eps, ctx):
    """The translated-idempotent basis of U_r B^(eps), eps on the hat side.

    Verifies each element is nonzero, the family is distinct and linearly
    independent, every element lies in the cyclic closure of B^(eps), and
    the count equals the closure dimension.
    """
    p = ctx.p
    tup = _validated(label_tuple, ctx)
    eps = tuple(int(e) for e in eps)
    if not in_y_set(eps, tup, p):
        raise ValueError(
            f"eps={eps} is not hat-side admissible for {format_label(tup)}; "
            "translate X-side indices by tau first"
        )
    key = ("module_basis", _reduced(tup, p), eps)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    entries = theta_set(tup, eps, True, ctx)
    elements = [(theta, t, b_translated(tup, theta, t, ctx)) for theta, t in entries]
    mat = np.array([ctx.vec(el) for _, _, el in elements], dtype=np.int64)
    mat = mat.reshape(len(elements), ctx.dim)
    _, rank, _ = rref(mat, p)
    mod = cyclic_module(b_r(tup, eps, ctx), ctx)
    resid = (mat - mat[:, mod.pivots] @ mod.embedding) % p
    verified = {
        "nonzero": all(not el.is_zero() for _, _, el in elements),
        "distinct": len({row.tobytes() for row in mat}) == len(elements),
        "independent": rank == len(elements),
        "inside_module": not resid.any(),
        "count_matches_dim": len(elements) == mod.dim,
    }
    for check, ok in verified.items():
        if not ok:
            raise VerificationError(
                f"basis check '{check}' failed for {format_label(tup)}, eps={eps}"
            )
    report = BasisReport((tup, eps), elements, len(elements), verified)
    ctx.cache[key] = report
    return report


def _span_closure(rows, mod):
    """Smallest submodule (row span closed under all generators) containing
    the given coordinate rows; returns RREF rows."""
    p = mod.ctx.p
    gens = mod.gen_action + [mod.h_matrix(p**i) for i in range(mod.ctx.r)]
    cur, rank, _ = rref(rows, p)
    while True:
        stacked = [cur] + [cur @ g.T % p for g in gens]
        nxt, nrank, _ = rref(np.vstack(stacked), p)
        if nrank == rank:
            return nxt
        cur, rank = nxt, nrank


def socle_report(label_tuple, ctx):
    """U_r B^(1) with its simplicity certificate and L(lambda) match.

    Simplicity: the oracle radical annihilates the module and every basis
    vector generates it; the isomorphism type is pinned by dimension,
    weight multiset, and the unique maximal line of weight lambda.
    """
    p = ctx.p
    tup = _validated(label_tuple, ctx)
    key = ("socle_report", _reduced(tup, p))
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    nu = nu_vector(tup, p)
    mod = cyclic_module(b_r(tup, (1,) * ctx.r, ctx), ctx)
    rad = radical_oracle(ctx)
    simple = simple_module(nu.lam, ctx)
    maximal = find_maximal_vectors(mod)
    eye = np.eye(mod.dim, dtype=np.int64)
    evidence = {
        "dim_matches_nu": mod.dim == math.prod(n + 1 for n in nu.nu),
        "radical_annihilates": socle_oracle(mod, rad).dim() == mod.dim,
        "every_vector_generates": all(
            _span_closure(eye[i : i + 1], mod).shape[0] == mod.dim
            for i in range(mod.dim)
        ),
        "dim_matches_simple": mod.dim == simple.dim,
        "weights_match_simple": weight_decompose(mod) == weight_decompose(simple),
        "unique_maximal_line": len(maximal) == 1,
        "maximal_weight": bool(maximal) and maximal[0][1] == nu.lam % ctx.bound,
    }
    for check, ok in evidence.items():
        if not ok:
            raise VerificationError(
                f"socle check '{check}' failed for {format_label(tup)}"
            )
    out = (mod, nu.lam, evidence)
    ctx.cache[key] = out
    return out


def pim_radical_basis(label_tuple, ctx):
    """Radical basis of the PIM U_r B^(0): its basis minus the head window V.

    The basis of the PIM is enumerated on the X side (eps = 0) and
    re-indexed through tau to the hat side; both descriptions are checked
    to coincide elementwise.  V keeps the theta = tau stratum with all
    t_i in [-nt^(0), n^(0)]; the complement must be killed by right
    multiplication by B^(1) while V maps onto a space of full rank |V|.
    """
    p, r = ctx.p, ctx.r
    tup = _validated(label_tuple, ctx)
    key = ("pim_radical_basis", _reduced(tup, p))
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    _, tau = sigma_tau(tup, p)
    rep = module_basis(tup, tau, ctx)
    plain = theta_set(tup, (0,) * r, False, ctx)
    if len(plain) != len(rep.elements):
        raise VerificationError(
            f"X-side and hat-side enumerations differ in size for {format_label(tup)}"
        )
    for (theta0, t0), (theta1, t1, el) in zip(plain, rep.elements):
        lifted = tuple((a + b) % 2 for a, b in zip(theta0, tau))
        if lifted != theta1 or t0 != t1:
            raise VerificationError(
                f"X-side enumeration misaligned with hat side for {format_label(tup)}"
            )
        if b_translated(tup, theta0, t0, ctx) != el:
            raise VerificationError(
                f"re-indexed translate differs from hat-side element "
                f"for {format_label(tup)}, theta={theta0}, t={t0}"
            )
    windows = [index_table(pr, 0, p) for pr in tup]
    core, complement = [], []
    for theta, t, el in rep.elements:
        in_v = theta == tau and all(
            -nt <= ti <= n for ti, (n, nt) in zip(t, windows)
        )
        (core if in_v else complement).append((theta, t, el))
    nu = nu_vector(tup, p)
    rmat = ctx.right_matrix(b_r(tup, (1,) * r, ctx))
    cmat = np.array(
        [ctx.vec(el) for _, _, el in complement], dtype=np.int64
    ).reshape(len(complement), ctx.dim)
    vmat = np.array([ctx.vec(el) for _, _, el in core], dtype=np.int64).reshape(
        len(core), ctx.dim
    )
    _, vrank, _ = rref(mat_mul_mod(vmat, rmat.T, p), p)
    verified = {
        "window_count": len(core) == math.prod(n + 1 for n in nu.nu),
        "complement_in_kernel": not mat_mul_mod(cmat, rmat.T, p).any(),
        "window_spans_head": vrank == len(core),
    }
    for check, ok in verified.items():
        if not ok:
            raise VerificationError(
                f"radical check '{check}' failed for {format_label(tup)}"
            )
    report = BasisReport((tup, (0,) * r), complement, len(complement), verified)
    ctx.cache[key] = report
    return report


def _radical_nilpotency(rows, ctx):
    """Smallest N with rad^N = 0, via the power chain on every PIM."""
    if rows.shape[0] == 0:
        return 1
    p, r = ctx.p, ctx.r
    n_max = 1
    for tup in label_tuples(p, r):
        mod = cyclic_module(b_r(tup, (0,) * r, ctx), ctx)
        tensor = mod.action_tensor()
        flat = tensor.reshape(ctx.dim, mod.dim * mod.dim)
        acts = mat_mul_mod(rows, flat, p).reshape(rows.shape[0], mod.dim, mod.dim)
        mod._tensor = None  # free: rebuilding is cheaper than keeping all of them
        cur = np.eye(mod.dim, dtype=np.int64)
        k = 0
        while cur.shape[0]:
            images = np.einsum("zoi,vi->zvo", acts, cur) % p
            cur, _, _ = rref(images.reshape(-1, mod.dim), p)
            k += 1
            if k > mod.dim:
                raise VerificationError("radical power chain failed to terminate")
        n_max = max(n_max, k)
    return n_max


def jacobson_radical_basis(ctx):
    """Global radical basis: union of the per-PIM complements.

    Verifies independence, the dimension formula p^{3r} - sum(dim L)^2,
    subspace equality with the annihilator oracle, and nilpotency.  The
    elements are concatenated in label enumeration order under the label
    ((), (0,...,0)).
    """
    cached = ctx.cache.get("jacobson_radical_basis")
    if cached is not None:
        return cached
    p, r = ctx.p, ctx.r
    elements = []
    for tup in label_tuples(p, r):
        elements.extend(pim_radical_basis(tup, ctx).elements)
    mat = np.array([ctx.vec(el) for _, _, el in elements], dtype=np.int64)
    mat = mat.reshape(len(elements), ctx.dim)
    _, rank, _ = rref(mat, p)
    expected = ctx.dim - sum(
        simple_module(lam, ctx).dim ** 2 for lam in range(ctx.bound)
    )
    mine = Subspace(ctx.dim, mat, p)
    nilp = _radical_nilpotency(mine.rows, ctx)
    verified = {
        "independent": rank == len(elements),
        "dimension": rank == expected,
        "matches_oracle": subspace_equal(mine, radical_oracle(ctx)),
        "nilpotent": nilp <= ctx.dim,
    }
    for check, ok in verified.items():
        if not ok:
            raise VerificationError(f"global radical check '{check}' failed")
    verified["nilpotency_index"] = nilp
    report = BasisReport(((), (0,) * r), elements, len(elements), verified)
    ctx.cache["jacobson_radical_basis"] = report
    return report


def _weights_minus(whole, part):
    out = dict(whole)
    for w, c in part.items():
        out[w] = out.get(w, 0) - c
    return {w: c for w, c in out.items() if c}


def head_socle_report(label_tuple, eps, ctx):
    """Head and socle of U_r B^(eps) for arbitrary eps in F_2^r.

    Verifies that the socle equals U_r B^(1) sitting inside the module,
    and that head and socle are simple of the same type as L(lambda),
    pinned by dimension and weight multiset.
    """
    p, r = ctx.p, ctx.r
    tup = _validated(label_tuple, ctx)
    eps = tuple(int(e) for e in eps)
    if len(eps) != r or any(e not in (0, 1) for e in eps):
        raise ValueError(f"eps must lie in F_2^{r}, got {eps}")
    # B^(eps) only depends on eps through the non-E slots
    masked = tuple(
        1 if classify(pr, p).satisfies_e else e for e, pr in zip(eps, tup)
    )
    key = ("head_socle_report", _reduced(tup, p), masked)
    cached = ctx.cache.get(key)
    if cached is not None:
        return replace(cached, label=(tup, eps))
    nu = nu_vector(tup, p)
    mod = cyclic_module(b_r(tup, eps, ctx), ctx)
    rad = radical_oracle(ctx)
    if rad.dim():
        tensor = mod.action_tensor()
        flat = tensor.reshape(ctx.dim, mod.dim * mod.dim)
        acts = mat_mul_mod(rad.rows, flat, p).reshape(rad.dim(), mod.dim, mod.dim)
        radm, radm_rank, _ = rref(
            acts.transpose(0, 2, 1).reshape(-1, mod.dim), p
        )
    else:
        radm = np.zeros((0, mod.dim), dtype=np.int64)
        radm_rank = 0
    head_dim = mod.dim - radm_rank
    socle = socle_oracle(mod, rad)
    mod._tensor = None
    soc_mod = cyclic_module(b_r(tup, (1,) * r, ctx), ctx)
    coeffs = soc_mod.embedding[:, mod.pivots]
    if not np.array_equal(coeffs @ mod.embedding % p, soc_mod.embedding):
        raise VerificationError(
            f"U_r B^(1) does not sit inside U_r B^{eps} for {format_label(tup)}"
        )
    simple = simple_module(nu.lam, ctx)
    simple_weights = weight_decompose(simple)
    whole_weights = weight_decompose(mod)
    expected = math.prod(n + 1 for n in nu.nu)
    verified = {
        "socle_is_generator_module": subspace_equal(
            socle, Subspace(mod.dim, coeffs, p)
        ),
        "socle_dim": socle.dim() == expected,
        "head_dim": head_dim == expected,
        "head_weights": _weights_minus(
            whole_weights, weight_decompose(mod, radm)
        )
        == simple_weights,
        "socle_weights": weight_decompose(mod, socle.rows) == simple_weights,
    }
    for check, ok in verified.items():
        if not ok:
            raise VerificationError(
                f"head/socle check '{check}' failed for {format_label(tup)}, eps={eps}"
            )
    self_dual = whole_weights == {
        (-w) % ctx.bound: c for w, c in whole_weights.items()
    }
    report = HeadSocleReport(
        (tup, masked), mod, nu.lam, head_dim, socle.dim(), verified, self_dual
    )
    ctx.cache[key] = report
    return replace(report, label=(tup, eps))


def ur_b_eps_nesting(label_tuple, eps, rho, ctx):
    """Containment U_r B^(eps) <= U_r B^(rho) for X-side eps, rho.

    Computed by rank through the cyclic closures; must coincide with the
    coordinatewise order eps >= rho, else VerificationError.
    """
    p = ctx.p
    tup = _validated(label_tuple, ctx)
    eps, rho = tuple(int(e) for e in eps), tuple(int(e) for e in rho)
    if not in_x_set(eps, tup, p) or not in_x_set(rho, tup, p):
        raise ValueError("eps and rho must be X-side admissible")
    m_eps = cyclic_module(b_r(tup, eps, ctx), ctx)
    m_rho = cyclic_module(b_r(tup, rho, ctx), ctx)
    resid = (m_eps.embedding - m_eps.embedding[:, m_rho.pivots] @ m_rho.embedding) % p
    contained = not resid.any()
    expected = all(a >= b for a, b in zip(eps, rho))
    if contained != expected:
        raise VerificationError(
            f"containment for eps={eps}, rho={rho} on {format_label(tup)} "
            "contradicts the order criterion"
        )
    return contained


def structure_payload(label_tuple, ctx):
    """JSON-ready structural summary of one label: cases, nu, dims, basis."""
    from .pbw import format_element

    p, r = ctx.p, ctx.r
    tup = _validated(label_tuple, ctx)
    nu = nu_vector(tup, p)
    _, tau = sigma_tau(tup, p)
    basis = module_basis(tup, tau, ctx)
    radical = pim_radical_basis(tup, ctx)
    head = head_socle_report(tup, (0,) * r, ctx)
    tags = [
        classify(pr, p).case + ("/E" if classify(pr, p).satisfies_e else "")
        for pr in tup
    ]
    return {
        "label": format_label(tup),
        "case_tags": tags,
        "nu": list(nu.nu),
        "dims": {
            "module": basis.claimed_dim,
            "head": head.head_dim,
            "socle": head.socle_dim,
            "radical": radical.claimed_dim,
        },
        "basis": [
            {
                "theta": list(theta),
                "t": list(t),
                "element": format_element(el),
            }
            for theta, t, el in basis.elements
        ],
    }
