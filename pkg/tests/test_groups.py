import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockforge import fields as ff
from blockforge.groups import (ConjugacyWitness, GroupError, MatrixGroup, NotConjugate, Undecidable,
                               center_elements, contains, element_order, group_create, i_matrix,
                               in_derived_subgroup, is_conjugate, j_matrix)

from oracles import brute_classes, brute_derived_subgroup, brute_group, brute_order

# orders enumerated by closure and, for the large ones, standard published values
ORDERS = [
    (("SL", 2, 3), 24), (("GL", 2, 3), 48), (("SU", 2, 3), 24), (("GU", 2, 3), 96),
    (("SL", 3, 3), 5616), (("SU", 3, 3), 6048), (("GU", 3, 3), 24192), (("GL", 3, 3), 11232),
    (("Sp", 2, 3), 51840), (("SO", 2, 3), 51840), (("SL", 2, 5), 120),
]
LARGE_ORDERS = [
    (("Sp", 3, 3), 9170703360), (("SO", 3, 3), 9170703360), (("SL", 3, 7), 5630688),
    (("SU", 3, 5), 378000), (("SO+", 4, 3), 19808719257600),
]


def _tuple(M):
    return tuple(tuple(int(x) for x in row) for row in M)


@pytest.fixture(scope="module")
def gl23_oracle():
    G = brute_group(2, 3, lambda d: True)
    classes, inv = brute_classes(G, 3)
    return G, classes, inv


@pytest.fixture(scope="module")
def sl23_oracle():
    G = brute_group(2, 3, lambda d: d == 1)
    classes, inv = brute_classes(G, 3)
    return G, classes, inv


@pytest.mark.parametrize("key,order", ORDERS)
def test_orders_match_enumeration(key, order):
    spec = group_create(*key)
    assert spec.order() == order
    assert len(spec.matrix_group().elements()) == order


@pytest.mark.parametrize("key,order", LARGE_ORDERS)
def test_large_orders(key, order):
    assert group_create(*key).order() == order


def test_create_rejects_bad_input():
    for args in [("GL", 2, 4), ("GL", 2, 6), ("XX", 2, 3), ("SO+", 3, 3), ("GL", 1, 3)]:
        with pytest.raises(GroupError):
            group_create(*args)


def test_enumeration_matches_brute_force(gl23_oracle, sl23_oracle):
    for oracle, key in ((gl23_oracle, ("GL", 2, 3)), (sl23_oracle, ("SL", 2, 3))):
        G = group_create(*key).matrix_group()
        assert {_tuple(M) for M in G.elements()} == set(oracle[0])


def test_class_data_matches_brute_force(gl23_oracle, sl23_oracle):
    for oracle, key, r in ((gl23_oracle, ("GL", 2, 3), 8), (sl23_oracle, ("SL", 2, 3), 7)):
        G = group_create(*key).matrix_group()
        cd = G.conjugacy_data()
        assert cd.n_classes == len(oracle[1]) == r
        assert sorted(cd.sizes) == sorted(len(c) for c in oracle[1])
        for cls in oracle[1]:
            ids = {cd.class_of(np.array(M)) for M in cls}
            assert len(ids) == 1
            assert cd.orders[ids.pop()] == brute_order(next(iter(cls)), 3)


def test_trivial_group_has_one_class():
    G = MatrixGroup(ff.field_create(3), [ff.mat_identity(2)])
    cd = G.conjugacy_data()
    assert G.order() == 1 and cd.n_classes == 1 and cd.sizes == [1]


def test_generator_order_does_not_change_classes():
    spec = group_create("SL", 2, 3)
    gens = list(spec.matrix_group().elements()[1:4])
    a = MatrixGroup(spec.entries, gens).conjugacy_data()
    b = MatrixGroup(spec.entries, gens[::-1]).conjugacy_data()
    assert sorted(map(_tuple, a.reps)) == sorted(map(_tuple, b.reps))


def test_contains_examples():
    GL, SL = group_create("GL", 2, 3), group_create("SL", 2, 3)
    assert contains(GL, np.array([[2, 0], [0, 1]]))
    assert not contains(SL, np.array([[2, 0], [0, 1]]))
    assert not contains(GL, np.array([[1, 1], [1, 1]]))
    Sp = group_create("Sp", 2, 3)
    assert contains(Sp, i_matrix(2, 3))
    assert not contains(Sp, np.diag([2, 1, 1, 1]))
    SO = group_create("SO", 2, 3)
    assert contains(SO, j_matrix(5))
    SO7 = group_create("SO", 3, 3)
    assert not contains(SO7, j_matrix(7))   # det j7 = -1
    assert contains(SO7, ff.mat_scalar(SO7.entries, 2, j_matrix(7)))


def test_element_order_examples():
    F = ff.field_create(5)
    assert element_order(F, np.array([[0, 4], [1, 4]])) == 3
    assert element_order(F, ff.mat_identity(3)) == 1
    assert element_order(F, np.array([[1, 1], [0, 1]])) == 5


def test_center_examples():
    assert len(center_elements(group_create("GL", 3, 3))) == 2
    assert len(center_elements(group_create("GU", 3, 3))) == 4
    assert len(center_elements(group_create("SU", 3, 3))) == 1
    assert len(center_elements(group_create("SL", 3, 7))) == 3
    assert len(center_elements(group_create("SO", 3, 3))) == 1
    assert np.array_equal(center_elements(group_create("Sp", 2, 5))[0], ff.mat_identity(4))


def test_derived_subgroup_of_sl23_is_q8(sl23_oracle):
    G, _, inv = sl23_oracle
    D = brute_derived_subgroup(G, inv, 3)
    assert len(D) == 8
    spec = group_create("SL", 2, 3)
    for M in G:
        assert in_derived_subgroup(spec, np.array(M))[0] == (M in D)


def test_derived_subgroup_examples():
    GL = group_create("GL", 3, 5)
    assert in_derived_subgroup(GL, np.diag([2, 3, 1]))[0]
    assert not in_derived_subgroup(GL, np.diag([2, 1, 1]))[0]
    SO = group_create("SO", 2, 3)
    with pytest.raises(Undecidable):
        in_derived_subgroup(SO, j_matrix(5))


def test_is_conjugate_agrees_with_classes_on_gl23(gl23_oracle):
    spec = group_create("GL", 2, 3)
    _, classes, _ = gl23_oracle
    label = {M: i for i, c in enumerate(classes) for M in c}
    mats = sorted(label)
    F = spec.entries
    for a in mats:
        for b in mats:
            res = is_conjugate(spec, np.array(a), np.array(b))
            if label[a] == label[b]:
                assert isinstance(res, ConjugacyWitness) and res.verify(F, np.array(a), np.array(b))
            else:
                assert isinstance(res, NotConjugate)
                # conjugate elements share their characteristic polynomial
                if ff.charpoly(F, np.array(a)) != ff.charpoly(F, np.array(b)):
                    assert res.invariant in ("element order", "characteristic polynomial")


def test_diagonal_torus_element_inverted_by_j5_over_gf81():
    E = ff.field_create(3, 4)
    lam = ff.primitive_root_of_unity(E, 5).code
    d = np.diag([E.pow(lam, k) for k in (1, 3, 0, 2, 4)]).astype(np.int64)
    spec = group_create("SO", 2, 3)
    X = spec.form
    res = is_conjugate(spec, d, ff.mat_inv(E, d), hints=[X], F=E, algebraic=True)
    assert isinstance(res, ConjugacyWitness)
    assert np.array_equal(ff.matmul(E, ff.matmul(E, X, d), ff.mat_inv(E, X)), ff.mat_inv(E, d))


def test_is_conjugate_rejects_non_members():
    spec = group_create("SL", 2, 3)
    with pytest.raises(GroupError):
        is_conjugate(spec, np.diag([2, 1]), ff.mat_identity(2))


def test_not_conjugate_to_central_twist():
    spec = group_create("GL", 3, 3)
    s = np.array([[0, 0, 1], [1, 0, 2], [0, 1, 0]])   # companion of x^3 + x + 2
    res = is_conjugate(spec, s, ff.mat_scalar(spec.entries, 2, s))
    assert isinstance(res, NotConjugate)


GROUPS = [("SL", 2, 3), ("GU", 2, 3), ("Sp", 2, 3), ("SO", 2, 3), ("SU", 3, 3)]


@settings(max_examples=30)
@given(st.sampled_from(GROUPS), st.integers(0, 10**9), st.integers(0, 10**9))
def test_closure_and_center(key, i, j):
    spec = group_create(*key)
    G = spec.matrix_group()
    X = G.elements()
    F = spec.entries
    a, b = X[i % len(X)], X[j % len(X)]
    assert contains(spec, a) and contains(spec, b)
    assert contains(spec, ff.matmul(F, a, b))
    assert contains(spec, ff.mat_inv(F, a))
    for Z in center_elements(spec):
        assert contains(spec, Z)
        assert np.array_equal(ff.matmul(F, Z, a), ff.matmul(F, a, Z))


@pytest.mark.parametrize("key", GROUPS)
def test_class_sizes_divide_order(key):
    spec = group_create(*key)
    cd = spec.matrix_group().conjugacy_data()
    assert sum(cd.sizes) == spec.order()
    assert all(spec.order() % s == 0 for s in cd.sizes)
    assert cd.sizes[0] == 1 and cd.orders[0] == 1
