import copy
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockforge import fields as ff
from blockforge.groups import GroupError, contains, group_create, i_matrix, j_matrix, spec_element_order
from blockforge.witnesses import (NoWitness, Witness, WitnessError, certify, certify_witness, check_condition_A,
                                  check_condition_B, check_condition_C, construct, construct_typeA,
                                  construct_typeB_SO, construct_typeC_Sp, construct_typeD, dumps, phi, psi,
                                  recheck_certificate, type_a_grid)

from oracles import brute_group, brute_order, mat_mul


def _t(M):
    return tuple(tuple(int(x) for x in row) for row in M)


def test_gl25_witness_by_brute_force():
    w = construct_typeA(2, 5, 1)
    assert isinstance(w, Witness)
    s = _t(w.matrix)
    G = brute_group(2, 5, lambda d: True)
    assert s in G
    o = brute_order(s, 5)
    assert o == 3
    s_inv = next(X for X in G if mat_mul(s, X, 5) == ((1, 0), (0, 1)))
    # real: some x with x s = s^-1 x
    assert any(mat_mul(x, s, 5) == mat_mul(s_inv, x, 5) for x in G)
    # no central twist s z (z = 2, 3, 4) is conjugate to s
    for z in (2, 3, 4):
        sz = tuple(tuple(v * z % 5 for v in row) for row in s)
        assert not any(mat_mul(x, s, 5) == mat_mul(sz, x, 5) for x in G)
    # det 1 puts it in the derived subgroup SL2(5)
    assert (s[0][0] * s[1][1] - s[0][1] * s[1][0]) % 5 == 1
    cert = certify_witness(w)
    assert all(cert["conditions"][k]["pass"] for k in "ABC")


@pytest.mark.parametrize("n,q,eps", [(2, 3, 1), (2, 3, -1), (3, 3, 1), (3, 3, -1)])
def test_no_witness_cases(n, q, eps):
    w = construct_typeA(n, q, eps)
    assert isinstance(w, NoWitness)
    cert = certify_witness(w)
    assert cert["status"] == "NO_WITNESS"
    assert recheck_certificate(cert) == (True, [])


def test_small_exception_grid():
    grid = type_a_grid(ns=range(2, 5), qs=(3, 5, 7), epss=(1, -1))
    none = {k for k, c in grid.items() if c["status"] == "NO_WITNESS"}
    b_fail = {k for k, c in grid.items() if c["status"] != "NO_WITNESS" and not c["conditions"]["B"]["pass"]}
    assert none == {(2, 3), (2, -3), (3, 3), (3, -3)}
    assert b_fail == {(3, -5), (3, 7)}
    for k, c in grid.items():
        if c["status"] != "NO_WITNESS":
            assert c["conditions"]["A"]["pass"] and c["conditions"]["C"]["pass"]


def test_b_failure_has_conjugator():
    w = construct_typeA(3, 7, 1)
    B = check_condition_B(w.spec, w.matrix)
    assert not B["pass"]
    hit = [e for e in B["central"] if e["verdict"] == "conjugate"]
    assert hit and "conjugator" in hit[0]
    cert = certify_witness(w)
    assert cert["conclusion"].startswith("part (a)")
    assert recheck_certificate(cert)[0]


@pytest.mark.parametrize("kind,n,q,eps,N", [("A", 4, 3, 1, 4), ("A", 4, 3, -1, 4), ("A", 2, 9, -1, 2),
                                            ("B", 2, 5, 1, 5), ("C", 3, 5, 1, 6), ("D", 4, 5, 1, 8),
                                            ("D", 4, 5, -1, 8), ("D", 4, 3, -1, 8)])
def test_witnesses_certify_and_recheck(kind, n, q, eps, N):
    w = construct(kind, n, q, eps)
    assert w.matrix.shape == (N, N) and contains(w.spec, w.matrix)
    o = spec_element_order(w.spec, w.matrix)
    assert o > 1 and o % 2 == 1
    cert = certify_witness(w)
    assert cert["status"] == "PASSED"
    assert all(cert["conditions"][k]["pass"] for k in "ABC")
    ok, problems = recheck_certificate(json.loads(dumps(cert)))
    assert ok, problems


@pytest.mark.parametrize("builder,key", [(construct_typeC_Sp, ("Sp", 2, 3)), (construct_typeB_SO, ("SO", 2, 3))])
def test_special_witnesses_order_five(builder, key):
    w = builder(2, 3)
    spec = group_create(*key)
    assert spec_element_order(spec, w.matrix) == 5
    F = spec.entries
    X = i_matrix(2, 3) if key[0] == "Sp" else j_matrix(5)
    s_inv = ff.mat_pow(F, w.matrix, 4)
    assert np.array_equal(ff.matmul(F, X, w.matrix), ff.matmul(F, s_inv, X))
    assert w.trace["torus_check"]["inverted_by_form"]


def test_tampered_certificates_rejected():
    cert = certify_witness(construct_typeC_Sp(2, 3))
    bad = copy.deepcopy(cert)
    bad["element"][0][0] = [(bad["element"][0][0][0] + 1) % 3]
    assert not recheck_certificate(bad)[0]
    bad = copy.deepcopy(cert)
    conj = bad["conditions"]["A"]["reality"]["conjugator"]
    conj[0], conj[1] = conj[1], conj[0]
    assert not recheck_certificate(bad)[0]
    bad = copy.deepcopy(cert)
    bad["conditions"]["A"]["order"] = 10
    assert not recheck_certificate(bad)[0]
    bad = copy.deepcopy(cert)
    vals = bad["conditions"]["B"]["eigenvalues"]["values"]
    vals[0] = [0] * len(vals[0])   # zero is never an eigenvalue of an invertible matrix
    assert not recheck_certificate(bad)[0]


def test_identity_and_minus_identity_fail_condition_a():
    spec = group_create("Sp", 2, 5)
    F = spec.entries
    assert certify(spec, ff.mat_identity(4))["status"] == "FAILED"
    A = check_condition_A(spec, ff.mat_scalar(F, F.neg(1), ff.mat_identity(4)))
    assert not A["pass"] and not A["odd"]


def test_certify_rejects_non_member():
    with pytest.raises(GroupError):
        certify(group_create("SL", 2, 5), np.diag([2, 1]))


def test_condition_c_examples():
    GL = group_create("GL", 3, 5)
    assert check_condition_C(GL, np.diag([2, 3, 1]))["pass"]
    assert not check_condition_C(GL, np.diag([2, 1, 1]))["pass"]
    SO = group_create("SO", 2, 3)
    assert check_condition_C(SO, j_matrix(5))["method"] == "undecidable"


def test_bad_parameters():
    for args in [("A", 2, 4, 1), ("A", 1, 5, 1), ("D", 3, 5, 1), ("X", 2, 5, 1), ("A", 2, 5, 0)]:
        with pytest.raises(WitnessError):
            construct(*args)


def _random_gl(F, n, rng):
    while True:
        M = rng.integers(0, F.q, size=(n, n))
        if ff.mat_det(F, M):
            return M


@settings(max_examples=100)
@given(st.sampled_from([(2, 3), (3, 3), (2, 5), (3, 5), (2, 9), (4, 7)]), st.integers(0, 2**32))
def test_embeddings_land_in_groups(nq, seed):
    n, q = nq
    rng = np.random.default_rng(seed)
    Sp, SOp = group_create("Sp", n, q), group_create("SO", n, q)
    F = Sp.entries
    g, h = _random_gl(F, n, rng), _random_gl(F, n, rng)
    assert contains(Sp, phi(F, g))
    assert contains(SOp, psi(F, g, 1))
    assert np.array_equal(phi(F, ff.matmul(F, g, h)), ff.matmul(F, phi(F, g), phi(F, h)))
    assert np.array_equal(psi(F, ff.matmul(F, g, h)), ff.matmul(F, psi(F, g), psi(F, h)))
    if n >= 4:
        assert contains(group_create("SO+", n, q), phi(F, g))
    if n >= 3:
        minus = group_create("SO-", n + 1, q)
        E = minus.entries
        gE = ff.mat_map(ff.embedding_table(F, E), g)
        assert contains(minus, psi(E, gE, 2))
