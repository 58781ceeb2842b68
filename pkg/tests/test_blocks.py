import copy

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockforge.blocks import (block_covering, block_partition, central_characters, has_nonprincipal_real_2block,
                               partition_independent, real_blocks)
from blockforge.chartab import TableError, compute_table, conj_permutation, fusion_from_groups, ingest_table
from blockforge.cyclotomic import CycInt
from blockforge.groups import MatrixGroup, group_create
from blockforge.verify import default_fixture_dir

from oracles import osima_blocks

FIX = default_fixture_dir()


@pytest.fixture(scope="module")
def tables():
    out = {key: compute_table(group_create(*key)) for key in
           [("SL", 2, 3), ("GL", 2, 3), ("SU", 2, 3), ("SL", 3, 3), ("SL", 2, 5)]}
    for name in ("m11.ctx", "m22.ctx", "2m22.ctx", "su3_5.ctx"):
        out[name] = ingest_table(FIX / name)
    return out


def _osima(T, ell=2):
    return osima_blocks([[v.to_complex() for v in row] for row in T.values], T.sizes, T.orders, ell)


def test_central_character_examples(tables):
    T = tables[("SL", 2, 3)]
    omega = central_characters(T)
    assert omega[0] == [CycInt.from_int(s) for s in T.sizes]
    assert all(row[0] == 1 for row in omega)
    # the degree-3 character vanishes on the classes of size 4
    i = T.degrees.index(3)
    for k, s in enumerate(T.sizes):
        if s == 4:
            assert omega[i][k] == 0


def test_sl23_single_block(tables):
    P = block_partition(tables[("SL", 2, 3)], 2)
    assert P.n_blocks == 1 and P.principal == 0 and P.defects == [3]


def test_sl33_blocks(tables):
    T = tables[("SL", 3, 3)]
    P = block_partition(T, 2)
    assert P.n_blocks == 5
    for i in range(P.n_blocks):
        if i != P.principal:
            assert P.defects[i] == 0 and not P.real[i]
    assert has_nonprincipal_real_2block(T, P) == (False, None)


def test_odd_prime_blocks(tables):
    # odd primes go through the same reduction code
    T = tables[("SL", 2, 5)]
    for ell in (3, 5):
        assert block_partition(T, ell).as_sets() == _osima(T, ell)


@pytest.mark.parametrize("name", [("SL", 2, 3), ("GL", 2, 3), ("SU", 2, 3), ("SL", 3, 3), ("SL", 2, 5),
                                  "m11.ctx", "m22.ctx", "2m22.ctx", "su3_5.ctx"])
def test_blocks_match_inner_product_oracle(tables, name):
    T = tables[name]
    assert block_partition(T, 2).as_sets() == _osima(T, 2)


def test_fixture_reality_flags(tables):
    assert has_nonprincipal_real_2block(tables["m11.ctx"])[0] is False
    assert has_nonprincipal_real_2block(tables["m22.ctx"])[0] is False
    ok, idx = has_nonprincipal_real_2block(tables["su3_5.ctx"])
    assert ok and idx != 0


def test_rejects_non_prime(tables):
    with pytest.raises(ValueError):
        block_partition(tables[("SL", 2, 3)], 4)


def test_partition_json(tables):
    P = block_partition(tables[("GL", 2, 3)], 2)
    data = P.to_json()
    assert data["n_blocks"] == P.n_blocks
    assert sorted(sum((b["characters"] for b in data["blocks"]), [])) == list(range(8))


def test_covering_sl23_over_q8(tables):
    T_G = tables[("SL", 2, 3)]
    spec = group_create("SL", 2, 3)
    G = spec.matrix_group()
    cd = G.conjugacy_data()
    N = MatrixGroup(spec.entries, [M for M in G.elements() if cd.orders[cd.class_of(M)] in (1, 2, 4)])
    T_N = compute_table(N)
    fusion = fusion_from_groups(G, N)
    P_N = block_partition(T_N, 2)
    assert P_N.n_blocks == 1
    assert block_covering(T_G, T_N, fusion, 0) == {0}


def test_covering_identity_fusion(tables):
    T = tables[("GL", 2, 3)]
    P = block_partition(T, 2)
    fusion = list(range(T.n_classes))
    for b in range(P.n_blocks):
        assert block_covering(T, T, fusion, b) == {b}


def test_principal_covers_principal(tables):
    # SL2(3) in GL2(3)
    G = group_create("GL", 2, 3).matrix_group()
    S = group_create("SL", 2, 3)
    N = MatrixGroup(S.entries, list(S.matrix_group().elements()))
    T_G = tables[("GL", 2, 3)]
    T_N = compute_table(N)
    fusion = fusion_from_groups(G, N)
    P_G, P_N = block_partition(T_G, 2), block_partition(T_N, 2)
    assert P_N.principal in block_covering(T_G, T_N, fusion, P_G.principal, P_G, P_N)


@pytest.mark.parametrize("name", ["m11.ctx", "su3_5.ctx", ("SL", 3, 3), ("GL", 2, 3)])
def test_independence_across_ideals(tables, name):
    ok, _ = partition_independent(tables[name], 2)
    assert ok


def test_independence_with_several_ideals(tables):
    T = tables["m11.ctx"]   # exponent 1320, odd part 165: several primes above 2
    ok, n = partition_independent(T, 2)
    assert ok and n > 1


@pytest.mark.parametrize("name", [("GL", 2, 3), ("SL", 3, 3), "m22.ctx", "su3_5.ctx"])
def test_conjugation_permutes_blocks(tables, name):
    T = tables[name]
    P = block_partition(T, 2)
    perm = conj_permutation(T)
    images = [frozenset(perm[i] for i in b) for b in P.blocks]
    assert sorted(map(sorted, images)) == sorted(map(sorted, P.blocks))
    assert 0 in images[P.principal]
    assert P.real[P.principal]


@pytest.mark.parametrize("name", [("SL", 3, 3), "m11.ctx"])
def test_partition_sums_and_defect_zero(tables, name):
    T = tables[name]
    P = block_partition(T, 2)
    assert sorted(i for b in P.blocks for i in b) == list(range(T.n_classes))
    a = (T.order & -T.order).bit_length() - 1
    for b, d in zip(P.blocks, P.defects):
        if d == 0:
            assert len(b) == 1 and T.degree(b[0]) % (2**a) == 0


@settings(max_examples=15)
@given(st.permutations(list(range(1, 10))))
def test_reality_invariant_under_row_relabelling(perm):
    T = ingest_table(FIX / "m11.ctx")
    base = block_partition(T, 2)
    U = copy.deepcopy(T)
    U.values = [T.values[0]] + [T.values[i] for i in perm]
    P = block_partition(U, 2)
    relabel = [0] + list(perm)
    mapped = frozenset(frozenset(relabel[i] for i in b) for b in P.blocks)
    assert mapped == base.as_sets()
    assert sorted(P.real) == sorted(base.real)
    assert has_nonprincipal_real_2block(U, P)[0] == has_nonprincipal_real_2block(T, base)[0]


def test_non_integral_central_character_rejected(tables):
    T = copy.deepcopy(tables[("SL", 2, 3)])
    T.values[1] = [CycInt.from_int(3)] + T.values[1][1:]
    with pytest.raises(TableError):
        central_characters(T)
