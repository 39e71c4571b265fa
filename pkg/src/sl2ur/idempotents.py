"""Primitive idempotent towers and their translation combinatorics.

The algebra U_r of level r splits as a direct sum of projective
indecomposables cut out by idempotents B^(0)(a,j) indexed by pairs
(a, j) with 0 <= a <= p-1 and j in {0, ..., (p-1)/2} (for p = 2 the
three pairs (0,1/2), (1,0), (1,1)).  This module builds those elements
bottom-up: weight idempotents mu_a, the level-1 elements B^(eps)(a,j)
as polynomial expressions in mu_a*YX, the lifting maps Z^(eps) that
climb one level, and the r-fold towers with their translated families
u^(0,t_0)...u^(r-1,t_{r-1}) B^(eps).

Half-integer labels at p = 2 are stored doubled (j2 = 2j), so all label
arithmetic is integer arithmetic.
"""

import itertools
from typing import NamedTuple

from .pbw import EngineError, degree_components, fr_prime, in_ur
from .scalars import binom_mod, fact_mod, inv_mod


class LabelPair(NamedTuple):
    """Pair (a, j) with j doubled; a may be any integer."""

    a: int
    j2: int


class CaseTag(NamedTuple):
    case: str  # one of "A", "B", "C", "D"
    satisfies_e: bool


class IndexQuadruple(NamedTuple):
    n0: int
    n1: int
    nt0: int
    nt1: int


def validate_pair(pair, p):
    a, j2 = pair
    if p == 2:
        if a % 2 == 0 and j2 != 1:
            raise ValueError(f"p=2 pair with even a needs j=1/2, got {pair}")
        if a % 2 == 1 and j2 not in (0, 2):
            raise ValueError(f"p=2 pair with odd a needs j in {{0,1}}, got {pair}")
    else:
        if j2 % 2 != 0 or not 0 <= j2 <= p - 1:
            raise ValueError(f"pair {pair} needs j2 = 2j even in [0, {p - 1}]")
    return LabelPair(a, j2)


def labels(p):
    """All pairs with 0 <= a <= p-1, in (a, j2) order."""
    if p == 2:
        return [LabelPair(0, 1), LabelPair(1, 0), LabelPair(1, 2)]
    return [LabelPair(a, j2) for a in range(p) for j2 in range(0, p, 2)]


def label_tuples(p, r):
    """All r-tuples of labels, lexicographic in the slot-0-first order."""
    return list(itertools.product(labels(p), repeat=r))


def classify(pair, p):
    """Which of the four window conditions the pair satisfies, plus (E)."""
    a, j2 = validate_pair(pair, p)
    ahat = a % p
    if p == 2:
        if ahat == 0:
            return CaseTag("B", False)
        return CaseTag("C", True) if j2 == 0 else CaseTag("D", True)
    sat_e = j2 == 0
    if ahat % 2 == 0:
        if j2 >= p - ahat + 1:
            return CaseTag("A", sat_e)
        return CaseTag("B", sat_e)
    if j2 <= ahat - 1:
        return CaseTag("C", sat_e)
    return CaseTag("D", sat_e)


def index_quadruple(pair, p):
    """The four bounds (n^(0), n^(1), nt^(0), nt^(1)) attached to a pair."""
    a, j2 = pair
    tag = classify(pair, p)
    ahat = a % p
    if tag.case == "A":
        vals = (p - ahat - 1 + j2, 3 * p - ahat - 1 - j2,
                ahat - p - 1 + j2, p + ahat - 1 - j2)
    elif tag.case == "B":
        vals = (p - ahat - 1 - j2, p - ahat - 1 + j2,
                p + ahat - 1 - j2, p + ahat - 1 + j2)
    elif tag.case == "C":
        vals = (2 * p - ahat - 1 - j2, 2 * p - ahat - 1 + j2,
                ahat - 1 - j2, ahat - 1 + j2)
    else:
        vals = (j2 - ahat - 1, 2 * p - ahat - 1 - j2,
                ahat - 1 + j2, 2 * p + ahat - 1 - j2)
    assert all(v % 2 == 0 for v in vals), (pair, vals)
    quad = IndexQuadruple(*(v // 2 for v in vals))
    assert 0 <= quad.n0 <= quad.n1 <= p - 1
    assert (quad.n0 == quad.n1) == tag.satisfies_e
    assert quad.n0 + quad.nt1 == quad.n1 + quad.nt0 == p - 1
    return quad


def index_table(pair, eps, p):
    """(n^(eps), nt^(eps)) for eps in F_2."""
    quad = index_quadruple(pair, p)
    return (quad.n0, quad.nt0) if eps == 0 else (quad.n1, quad.nt1)


def mu(a, level, ctx):
    """Weight idempotent binom(H-a-1, p^level - 1), expanded in binom(H,i)."""
    if not 1 <= level <= ctx.r:
        raise ValueError(f"level must be in [1, {ctx.r}], got {level}")
    p = ctx.p
    q = p**level
    terms = {}
    for i in range(q):
        c = binom_mod(-a - 1, q - 1 - i, p)
        if c:
            terms[(0, i, 0)] = c
    return ctx.from_terms(terms)


def _poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for k, gk in enumerate(g):
                out[i + k] = (out[i + k] + fi * gk) % p
    return out


def psi_coeffs(pair, eps, p):
    """Ascending coefficient list of the degree p-1 polynomial psi_j^(eps)."""
    if p == 2:
        raise ValueError("psi polynomials are only defined for odd p")
    _, j2 = validate_pair(pair, p)
    j = j2 // 2
    if j == 0:
        poly = [1]
        head = range(1, (p - 1) // 2 + 1)
    else:
        jj = j * j % p
        if eps == 0:
            poly = _poly_mul([0, 2], [jj, 1], p)
        else:
            poly = _poly_mul([0, 1], [(-jj) % p, 1], p)
        head = (i for i in range(1, (p - 1) // 2 + 1) if i != j)
    for i in head:
        factor = [(-i * i) % p, 1]
        poly = _poly_mul(poly, _poly_mul(factor, factor, p), p)
    assert len(poly) == p
    return poly


def b1(pair, eps, ctx):
    """Level-1 element B^(eps)(a,j) in normal form."""
    p = ctx.p
    pair = validate_pair(pair, p)
    key = ("b1", pair.a % p, pair.j2, eps)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    yx = ctx.monomial(1, 0, 1)  # ordinary product Y*X
    if p == 2:
        if pair.a % 2 == 0:
            out = mu(0, 1, ctx) if eps == 0 else mu(0, 1, ctx) * yx
        else:
            mu1 = mu(1, 1, ctx)
            out = mu1 * yx if pair.j2 == 0 else mu1 * yx + mu1
    else:
        inv2 = inv_mod(2, p)
        shift = (pair.a + 1) * inv2 % p
        mu_a = mu(pair.a, 1, ctx)
        arg = mu_a * yx + shift * shift % p
        coeffs = psi_coeffs(pair, eps, p)
        out = ctx.scalar(coeffs[-1])
        for c in reversed(coeffs[:-1]):
            out = out * arg + c
        out = out * mu_a
    assert in_ur(out, 1) and set(degree_components(out)) <= {0}
    ctx.cache[key] = out
    return out


def extract_c(pair, eps, side, ctx):
    """Coefficients (c_m) with B^(eps) = mu_a * sum_m c_m Y^m X^m (side "YX")
    or the tilde coefficients against mu_a * sum_m c_m X^m Y^m (side "XY").

    Solved triangularly from m = p-1 down; the family member for slot m has
    a unit times m!^2 at the reference monomial (m, p-1, m), and members for
    m' < m never touch blocks above m'.
    """
    if side not in ("YX", "XY"):
        raise ValueError(f"side must be YX or XY, got {side!r}")
    p = ctx.p
    pair = validate_pair(pair, p)
    key = ("extract_c", pair.a % p, pair.j2, eps, side)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    mu_a = mu(pair.a, 1, ctx)
    residual = b1(pair, eps, ctx)
    coeffs = [0] * p
    for m in reversed(range(p)):
        f2 = fact_mod(m, p) ** 2 % p
        if side == "YX":
            fam = mu_a * ctx.monomial(m, 0, m, f2)
        else:
            fam = mu_a * (ctx.monomial(0, 0, m, f2) * ctx.monomial(m, 0, 0))
        ref = (m, p - 1, m)
        cm = residual.coeff(ref) * inv_mod(fam.coeff(ref), p) % p
        if cm:
            residual = residual - fam * cm
        coeffs[m] = cm
    if not residual.is_zero():
        raise EngineError(f"coefficient extraction failed to reconstruct {pair}")
    n_eps, nt_eps = index_table(pair, eps, p)
    lead = n_eps if side == "YX" else nt_eps
    if any(coeffs[:lead]) or not coeffs[lead]:
        raise EngineError(
            f"extracted coefficients violate the support window for {pair}, "
            f"eps={eps}, side={side}: {coeffs}"
        )
    ctx.cache[key] = coeffs
    return coeffs


def s_shift(pair, p):
    """Exponent split used by the lifting map in window cases A and C."""
    tag = classify(pair, p)
    if tag.case not in ("A", "C"):
        raise ValueError(f"s-shift is only defined in cases A/C, got {tag.case}")
    if p == 2:
        s = 1
    else:
        ahat = pair.a % p
        s = (p - ahat + 1) // 2 if ahat % 2 == 0 else (p - ahat) // 2
    for eps in (0, 1):
        n_eps, _ = index_table(pair, eps, p)
        assert n_eps >= s, (pair, eps, n_eps, s)
    return s


def z_map(z, pair, eps, ctx):
    """One-level lift: linear injection with Z(1) = B^(eps)(a,j) and
    Z(z1)Z(z2) = Z(z1 z2) against the eps = 0 twin."""
    p = ctx.p
    pair = validate_pair(pair, p)
    tag = classify(pair, p)
    fz = fr_prime(z)
    if tag.case in ("B", "D"):
        out = fz * b1(pair, eps, ctx)
    else:
        c = extract_c(pair, eps, "YX", ctx)
        s = s_shift(pair, p)
        n_eps, _ = index_table(pair, eps, p)
        xs = ctx.monomial(0, 0, s, fact_mod(s, p))
        acc = ctx.zero()
        for m in range(n_eps, p):
            if not c[m]:
                continue
            head = ctx.monomial(m, 0, m - s, c[m] * fact_mod(m, p) * fact_mod(m - s, p))
            acc = acc + head * fz * xs
        out = mu(pair.a, 1, ctx) * acc
    if in_ur(z, ctx.r - 1) and not in_ur(out, ctx.r):
        raise EngineError(f"lift of a level-{ctx.r - 1} element left U_{ctx.r}")
    return out


def b_r(label_tuple, eps, ctx):
    """Tower element B^(eps)(a,j) for a tuple of <= r labels.

    Slot 0 is the innermost level; the element lies in the degree-0 part
    of U_len(tuple).
    """
    pairs = tuple(validate_pair(pr, ctx.p) for pr in label_tuple)
    rr = len(pairs)
    if not 1 <= rr <= ctx.r:
        raise ValueError(f"tuple length must be in [1, {ctx.r}], got {rr}")
    if len(eps) != rr:
        raise ValueError("eps length must match the label tuple")
    key = ("b_r", tuple((pr.a % ctx.p, pr.j2) for pr in pairs), tuple(eps))
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    if rr == 1:
        out = b1(pairs[0], eps[0], ctx)
    else:
        out = z_map(b_r(pairs[1:], eps[1:], ctx), pairs[0], eps[0], ctx)
    assert in_ur(out, rr) and set(degree_components(out)) <= {0}
    ctx.cache[key] = out
    return out


# -- scalar combinatorics of Definition 4.1 ----------------------------------------


def gamma(i, pair, p):
    """gamma_i(a,j) = j^2 - ((a+1)/2)^2 - i(i+a+1) in F_p."""
    a, j2 = pair
    if p == 2:
        num = j2 * j2 - (a + 1) * (a + 1)
        assert num % 4 == 0
        return (num // 4 - i * (i + a + 1)) % 2
    inv2 = inv_mod(2, p)
    j = j2 * inv2 % p
    half = (a + 1) * inv2 % p
    return (j * j - half * half - i * (i + a + 1)) % p


def gamma_tilde(i, pair, p):
    return gamma(i, LabelPair(-pair[0], pair[1]), p)


def beta(n, pair, p):
    out = 1
    for i in range(n):
        out = out * gamma(i, pair, p) % p
    return out


def beta_tilde(n, pair, p):
    return beta(n, LabelPair(-pair[0], pair[1]), p)


def sigma_tau(label_tuple, p):
    """The extreme vectors: sigma_i = 0 exactly at (E) slots, tau = 1 - sigma."""
    sigma = tuple(0 if classify(pr, p).satisfies_e else 1 for pr in label_tuple)
    tau = tuple(1 - s for s in sigma)
    return sigma, tau


def in_x_set(eps, label_tuple, p):
    """eps has a zero at every (E) slot."""
    return all(
        e == 0 or not classify(pr, p).satisfies_e
        for e, pr in zip(eps, label_tuple)
    )


def in_y_set(eps, label_tuple, p):
    """eps has a one at every (E) slot."""
    return all(
        e == 1 or not classify(pr, p).satisfies_e
        for e, pr in zip(eps, label_tuple)
    )


def theta_set(label_tuple, eps, hat, ctx):
    """Enumerate the translation index set: pairs (theta, t) with
    eps <= theta ranging over the Y-side (hat) or X-side (non-hat)
    de-duplication set, and t_i in [-nt^(theta_i+1), n^(theta_i+1)].

    Deterministic order: theta lexicographic, then t lexicographic.
    """
    p = ctx.p
    checker = in_y_set if hat else in_x_set
    if not checker(eps, label_tuple, p):
        raise ValueError(f"eps={eps} is not admissible for hat={hat}")
    options = []
    for e, pr in zip(eps, label_tuple):
        sat_e = classify(pr, p).satisfies_e
        allowed = ((1,) if hat else (0,)) if sat_e else (0, 1)
        options.append(tuple(t for t in allowed if t >= e))
    out = []
    for theta in itertools.product(*options):
        windows = []
        for th, pr in zip(theta, label_tuple):
            n_opp, nt_opp = index_table(pr, th ^ 1, p)
            windows.append(range(-nt_opp, n_opp + 1))
        for t in itertools.product(*windows):
            out.append((theta, t))
    return out


def u_element(i, t, ctx):
    """(X^(p^i))^t for t >= 0, (Y^(p^i))^(-t) for t < 0; zero when |t| >= p."""
    if abs(t) >= ctx.p:
        return ctx.zero()
    if t >= 0:
        return ctx.monomial(0, 0, t * ctx.p**i, fact_mod(t, ctx.p))
    return ctx.monomial(-t * ctx.p**i, 0, 0, fact_mod(-t, ctx.p))


def b_translated(label_tuple, eps, t, ctx):
    """u^(0,t_0) u^(1,t_1) ... u^(r-1,t_{r-1}) B^(eps)(a,j)."""
    if len(t) != len(label_tuple):
        raise ValueError("translation vector length must match the label tuple")
    out = b_r(label_tuple, eps, ctx)
    for i in reversed(range(len(t))):
        u = u_element(i, t[i], ctx)
        if u.is_zero():
            return ctx.zero()
        out = u * out
    return out
