import numpy as np
import pytest
from hypothesis import given, strategies as st

from blockforge import fields as ff
from blockforge.fields import FieldError, eigenvalue_multiset, field_create, primitive_root_of_unity

from oracles import gf_elements_order

SMALL = [(2, 1), (2, 3), (3, 1), (3, 2), (3, 4), (5, 1), (5, 2), (7, 2), (9 // 3, 3)]


def test_same_parameters_same_descriptor():
    assert field_create(3, 4) is field_create(3, 4)
    assert field_create(5, 2).q == 25


def test_conway_modulus_for_gf9():
    # Conway polynomial x^2 - x - 1 = x^2 + 2x + 2 over GF(3)
    assert tuple(field_create(3, 2).modulus) == (2, 2, 1)


def test_rejects_bad_parameters():
    with pytest.raises(FieldError):
        field_create(4, 1)
    with pytest.raises(FieldError):
        field_create(2, 64)
    with pytest.raises(FieldError):
        field_create(3, 3, bound=26)
    with pytest.raises(FieldError):
        primitive_root_of_unity(field_create(5, 1), 3)


def test_order_three_roots_in_gf25():
    F = field_create(5, 2)
    orders = gf_elements_order(F)
    roots = sorted(a for a, o in orders.items() if o == 3)
    assert len(roots) == 2
    assert primitive_root_of_unity(F, 3).code in roots


@pytest.mark.parametrize("p,k", [(2, 4), (3, 4), (5, 2), (7, 2)])
def test_generator_is_primitive(p, k):
    F = field_create(p, k)
    assert gf_elements_order(F)[F.gen] == F.q - 1
    assert all(F.order(a) == o for a, o in gf_elements_order(F).items())


def test_eigenvalues_of_order_three_companion_over_gf5():
    F = field_create(5, 1)
    # x^2 - t x + 1 with t = lambda + lambda^-1 = -1 for lambda of order 3
    t = F.neg(1)
    C = np.array([[0, F.neg(1)], [1, t]], dtype=np.int64)
    E, eig = eigenvalue_multiset(F, C)
    assert (E.p, E.k) == (5, 2)
    lam = primitive_root_of_unity(E, 3).code
    assert sorted(eig) == sorted([lam, E.mul(lam, lam)])
    # brute force: roots of x^2 + x + 1 among all 25 elements
    roots = [x for x in range(E.q) if E.add(E.add(E.mul(x, x), x), 1) == 0]
    assert sorted(roots) == sorted(eig)


def test_eigenvalues_of_diagonal():
    F = field_create(7, 1)
    E, eig = eigenvalue_multiset(F, np.diag([3, 3, 5]))
    assert E is F and eig == [3, 3, 5]


def test_subfield_embeddings_compatible():
    F, M, E = field_create(3, 1), field_create(3, 2), field_create(3, 4)
    FM, ME, FE = ff.embedding_table(F, M), ff.embedding_table(M, E), ff.embedding_table(F, E)
    assert all(ME[FM[c]] == FE[c] for c in range(F.q))
    # embeddings are ring homomorphisms
    for a in range(M.q):
        for b in range(M.q):
            assert ME[M.mul(a, b)] == E.mul(int(ME[a]), int(ME[b]))
            assert ME[M.add(a, b)] == E.add(int(ME[a]), int(ME[b]))


@st.composite
def field_and_elems(draw, n=3):
    p, k = draw(st.sampled_from(SMALL))
    F = field_create(p, k)
    return F, [draw(st.integers(0, F.q - 1)) for _ in range(n)]


@given(field_and_elems())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1


@given(field_and_elems(2))
def test_frobenius_is_ring_map(data):
    F, (a, b) = data
    p = F.p
    assert F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p))
    assert F.pow(F.mul(a, b), p) == F.mul(F.pow(a, p), F.pow(b, p))
    assert F.pow(a, F.q) == a


@given(field_and_elems(1), st.integers(2, 6))
def test_vectorised_ops_match_scalar(data, e):
    F, _ = data
    xs = np.arange(F.q, dtype=np.int64)
    ys = xs[::-1].copy()
    assert list(F.vmul(xs, ys)) == [F.mul(int(x), int(y)) for x, y in zip(xs, ys)]
    assert list(F.vadd(xs, ys)) == [F.add(int(x), int(y)) for x, y in zip(xs, ys)]
    assert list(F.vpow(xs, e)) == [F.pow(int(x), e) for x in xs]


@given(st.integers(0, 10**6))
def test_matrix_inverse_and_det(seed):
    F = field_create(3, 2)
    rng = np.random.default_rng(seed)
    M = rng.integers(0, F.q, size=(3, 3))
    d = ff.mat_det(F, M)
    if d == 0:
        with pytest.raises(Exception):
            ff.mat_inv(F, M)
        return
    assert np.array_equal(ff.matmul(F, M, ff.mat_inv(F, M)), ff.mat_identity(3))
    N = rng.integers(0, F.q, size=(3, 3))
    assert ff.mat_det(F, ff.matmul(F, M, N)) == F.mul(d, ff.mat_det(F, N))
