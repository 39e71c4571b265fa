"""Tests for the structural reports: bases, socles, radicals, nesting."""

import itertools
import math

import numpy as np
import pytest

from sl2ur.idempotents import (
    LabelPair,
    b_r,
    in_x_set,
    in_y_set,
    index_table,
    label_tuples,
    sigma_tau,
)
from sl2ur.modules import cyclic_module, weight_decompose
from sl2ur.oracle import Subspace, radical_oracle, socle_oracle, subspace_equal
from sl2ur.structure import (
    jacobson_radical_basis,
    head_socle_report,
    module_basis,
    nu_vector,
    pim_radical_basis,
    socle_report,
    structure_payload,
    unity_decomposition,
    ur_b_eps_nesting,
    format_label,
)

from conftest import shared_ctx


def all_eps(r):
    return list(itertools.product((0, 1), repeat=r))


def test_unity_counts_and_cache():
    for p, r, count in [(2, 1, 3), (3, 1, 6), (2, 2, 9), (3, 2, 36), (5, 1, 15)]:
        ctx = shared_ctx(p, r)
        out = unity_decomposition(ctx)
        assert len(out) == count
        assert out is unity_decomposition(ctx)
        for tup, el in out:
            assert el == b_r(tup, (0,) * r, ctx)


def test_module_basis_examples():
    ctx = shared_ctx(3, 1)
    assert module_basis((LabelPair(0, 2),), (0,), ctx).claimed_dim == 6
    st = module_basis((LabelPair(1, 0),), (1,), ctx)
    assert st.claimed_dim == 3
    assert [t for _, t, _ in st.elements] == [(0,), (1,), (2,)]
    with pytest.raises(ValueError):
        module_basis((LabelPair(1, 0),), (0,), ctx)  # eps not hat-side
    with pytest.raises(ValueError):
        module_basis((LabelPair(1, 0),) * 2, (1, 1), ctx)  # wrong length


def test_module_basis_eps_one_counts():
    # the all-ones stratum has prod(n0+nt0+1) elements
    for p, r in [(2, 1), (3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            rep = module_basis(tup, (1,) * r, ctx)
            expect = math.prod(
                sum(index_table(pr, 0, p)) + 1 for pr in tup
            )
            assert rep.claimed_dim == expect, tup


def test_module_basis_all_admissible_eps():
    for p, r in [(2, 2), (3, 1), (5, 1)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            for eps in all_eps(r):
                if not in_y_set(eps, tup, p):
                    continue
                rep = module_basis(tup, eps, ctx)
                assert rep.claimed_dim == len(rep.elements)
                assert all(rep.verified.values())


def test_nu_vector_frozen():
    expect3 = {(0, 0): 2, (1, 0): 2, (2, 0): 2, (1, 2): 1, (2, 2): 1, (0, 2): 0}
    for (a, j2), nu in expect3.items():
        got = nu_vector((LabelPair(a, j2),), 3)
        assert got.nu == (nu,) and got.lam == nu
    expect2 = {(0, 1): 0, (1, 0): 1, (1, 2): 1}
    for (a, j2), nu in expect2.items():
        assert nu_vector((LabelPair(a, j2),), 2).nu == (nu,)
    # multi-slot weight assembly
    got = nu_vector((LabelPair(1, 2), LabelPair(1, 0)), 3)
    assert got.nu == (1, 2) and got.lam == 1 + 3 * 2


def test_nu_multiset_matches_simple_dims():
    # each weight lam is hit by exactly dim L(lam) label tuples
    for p, r in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)]:
        ctx = None
        counts = {}
        for tup in label_tuples(p, r):
            lam = nu_vector(tup, p).lam
            counts[lam] = counts.get(lam, 0) + 1
        for lam, mult in counts.items():
            digits = [(lam // p**i) % p for i in range(r)]
            assert mult == math.prod(d + 1 for d in digits), (p, r, lam)
        assert sum(counts.values()) == len(label_tuples(p, r))


def test_socle_report_examples():
    c3 = shared_ctx(3, 1)
    mod, lam, _ = socle_report((LabelPair(0, 0),), c3)
    assert (mod.dim, lam) == (3, 2)
    mod, lam, _ = socle_report((LabelPair(0, 2),), c3)
    assert (mod.dim, lam) == (1, 0)
    c22 = shared_ctx(2, 2)
    mod, lam, _ = socle_report((LabelPair(1, 0), LabelPair(1, 2)), c22)
    assert (mod.dim, lam) == (4, 3)


def test_socle_reports_all_labels():
    for p, r in [(2, 1), (3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            mod, lam, evidence = socle_report(tup, ctx)
            nu = nu_vector(tup, p)
            assert lam == nu.lam
            assert mod.dim == math.prod(n + 1 for n in nu.nu)
            assert all(evidence.values())


def test_pim_radical_examples():
    c3 = shared_ctx(3, 1)
    rep = pim_radical_basis((LabelPair(0, 2),), c3)
    assert rep.claimed_dim == 5
    assert module_basis((LabelPair(0, 2),), (0,), c3).claimed_dim == 6
    # Steinberg-type labels: PIM is simple, radical zero
    for a in range(3):
        st = pim_radical_basis((LabelPair(a, 0),), c3)
        assert st.claimed_dim == 0


def test_pim_radical_dimension_bookkeeping():
    for p, r in [(2, 1), (3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            _, tau = sigma_tau(tup, p)
            whole = module_basis(tup, tau, ctx).claimed_dim
            head = math.prod(n + 1 for n in nu_vector(tup, p).nu)
            rep = pim_radical_basis(tup, ctx)
            assert rep.claimed_dim == whole - head, tup
            assert all(rep.verified.values())


def test_jacobson_radical_dims_and_nilpotency():
    for p, r, dim in [(2, 1, 3), (3, 1, 13), (2, 2, 39)]:
        ctx = shared_ctx(p, r)
        rep = jacobson_radical_basis(ctx)
        assert rep.claimed_dim == dim
        assert rep.verified["matches_oracle"]
        idx = rep.verified["nilpotency_index"]
        assert 3 <= idx <= 2 * r * (p - 1) + 1, (p, r, idx)
        assert rep is jacobson_radical_basis(ctx)


def test_head_socle_all_labels_and_eps():
    for p, r in [(2, 1), (3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            expect = math.prod(n + 1 for n in nu_vector(tup, p).nu)
            for eps in all_eps(r):
                rep = head_socle_report(tup, eps, ctx)
                assert rep.head_dim == rep.socle_dim == expect
                assert rep.label == (tup, eps)
                assert all(rep.verified.values())
                if eps == (1,) * r:
                    assert rep.module.dim == expect  # simple module
    with pytest.raises(ValueError):
        head_socle_report((LabelPair(0, 2),), (2,), shared_ctx(3, 1))


def test_nesting_order_criterion():
    # containment iff eps >= rho, exhaustively over X-side pairs
    for p, r in [(3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        for tup in label_tuples(p, r):
            xs = [e for e in all_eps(r) if in_x_set(e, tup, p)]
            for eps in xs:
                for rho in xs:
                    got = ur_b_eps_nesting(tup, eps, rho, ctx)
                    assert got == all(a >= b for a, b in zip(eps, rho))
    # incomparable pair at r=2: neither containment
    ctx = shared_ctx(2, 2)
    tup = (LabelPair(0, 1), LabelPair(0, 1))
    assert not ur_b_eps_nesting(tup, (1, 0), (0, 1), ctx)
    assert not ur_b_eps_nesting(tup, (0, 1), (1, 0), ctx)
    with pytest.raises(ValueError):
        ur_b_eps_nesting((LabelPair(1, 0),), (1,), (0,), shared_ctx(3, 1))


def test_pim_dims_sum_to_algebra_dimension():
    for p, r in [(2, 1), (3, 1), (2, 2), (5, 1)]:
        ctx = shared_ctx(p, r)
        total = 0
        for tup in label_tuples(p, r):
            _, tau = sigma_tau(tup, p)
            total += module_basis(tup, tau, ctx).claimed_dim
        assert total == ctx.dim


def test_socle_of_regular_module():
    # sum of the U_r B^(1) equals the oracle socle of the regular module
    for p, r in [(2, 1), (3, 1), (2, 2)]:
        ctx = shared_ctx(p, r)
        regular = cyclic_module(ctx.one(), ctx)
        assert regular.dim == ctx.dim
        rad = radical_oracle(ctx)
        oracle_soc = socle_oracle(regular, rad)
        stacked = np.vstack(
            [
                cyclic_module(b_r(tup, (1,) * r, ctx), ctx).embedding
                for tup in label_tuples(p, r)
            ]
        )
        coords = stacked[:, regular.pivots]
        assert np.array_equal(coords @ regular.embedding % p, stacked)
        assert subspace_equal(oracle_soc, Subspace(regular.dim, coords, p))


def test_action_tensor_matches_engine_pullback():
    # generator-product assembly agrees with the exact engine pullback
    for p, r, pair in [(3, 1, (LabelPair(0, 2),)), (2, 2, (LabelPair(0, 1), LabelPair(1, 0)))]:
        ctx = shared_ctx(p, r)
        mod = cyclic_module(b_r(pair, (0,) * r, ctx), ctx)
        tensor = mod.action_tensor()
        for i, mono in enumerate(ctx.basis_list):
            assert np.array_equal(tensor[i], mod.monomial_action(mono)), mono


def test_weight_decompose_submodule_rows():
    ctx = shared_ctx(3, 1)
    mod = cyclic_module(b_r((LabelPair(0, 0),), (1,), ctx), ctx)
    whole = weight_decompose(mod)
    assert sum(whole.values()) == mod.dim
    empty = np.zeros((0, mod.dim), dtype=np.int64)
    assert weight_decompose(mod, empty) == {}


def test_structure_payload_shape():
    ctx = shared_ctx(3, 1)
    pay = structure_payload((LabelPair(0, 2),), ctx)
    assert set(pay) == {"label", "case_tags", "nu", "dims", "basis"}
    assert pay["label"] == "0,1"
    assert pay["case_tags"] == ["B"]
    assert pay["dims"] == {"module": 6, "head": 1, "socle": 1, "radical": 5}
    assert len(pay["basis"]) == 6
    assert all(entry["element"] for entry in pay["basis"])
    assert pay == structure_payload((LabelPair(0, 2),), ctx)
    assert format_label((LabelPair(0, 1), LabelPair(1, 2))) == "0,1/2;1,1"
