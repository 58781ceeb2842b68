import math

import pytest
import sympy
from hypothesis import given, strategies as st

from blockforge.cyclotomic import (CycInt, CyclotomicError, IdealReduction, cyc_conjugate, format_cycint,
                                   parse_cycint, reduce_mod2, totient)

from oracles import poly_add, poly_mod_cyclotomic, poly_mul

CONDUCTORS = [1, 3, 4, 5, 7, 8, 9, 12, 15, 20, 21, 24]


@st.composite
def cycints(draw, conductors=CONDUCTORS, bound=20):
    n = draw(st.sampled_from(conductors))
    return CycInt(n, [draw(st.integers(-bound, bound)) for _ in range(totient(n))])


def z(n, k=1):
    return CycInt.root_of_unity(n, k)


def test_conjugate_examples():
    assert cyc_conjugate(z(3)) == -1 - z(3)
    x = z(5) + z(5, 4)
    assert cyc_conjugate(x) == x
    assert cyc_conjugate(z(4)) == -z(4)


def test_equality_across_conductors():
    assert CycInt.from_int(3) == CycInt.from_int(3).lift(12)
    assert z(3) == z(12, 4)
    assert z(4) * z(4) == CycInt.from_int(-1)
    assert sum((z(5, k) for k in range(5)), CycInt.from_int(0)) == 0


def test_reduce_mod2_examples():
    R = IdealReduction(12, 2)
    F = R.field
    assert reduce_mod2(CycInt.from_int(2), R) == 0
    assert reduce_mod2(z(4), R) == 1
    w = reduce_mod2(z(3), R)
    assert F.add(F.add(F.mul(w, w), w), 1) == 0
    assert w != 1


def test_reduce_rejects_odd_ideal():
    with pytest.raises(CyclotomicError):
        reduce_mod2(z(3), IdealReduction(3, 3))


@pytest.mark.parametrize("e", [7, 15, 21, 63, 231, 1848])
def test_factor_count_matches_factorisation_mod_2(e):
    m = e
    while m % 2 == 0:
        m //= 2
    x = sympy.Symbol("x")
    _, facs = sympy.factor_list(sympy.cyclotomic_poly(m, x), modulus=2)
    assert IdealReduction(e, 2).n_factors == sum(mult for _, mult in facs)


def test_factor_index_out_of_range():
    with pytest.raises(CyclotomicError):
        IdealReduction(7, 2, factor_index=2)


def test_format_round_trip_examples():
    assert format_cycint(CycInt.from_int(-4)) == "-4"
    x = z(7) + 2 * z(7, 3)
    assert parse_cycint(format_cycint(x)) == x
    with pytest.raises(CyclotomicError):
        parse_cycint("c(5,1)")


def test_wrong_coordinate_count():
    with pytest.raises(CyclotomicError):
        CycInt(5, [1, 2])


def _at(x, N):
    """Group-ring vector of x at conductor N, reduced by long division."""
    vec = [0] * N
    step = N // x.n
    for i, c in enumerate(x.coeffs):
        vec[i * step] += c
    return poly_mod_cyclotomic(vec, N)


@given(cycints(), cycints())
def test_arithmetic_matches_long_division(a, b):
    N = math.lcm(a.n, b.n)
    pa, pb = _at(a, N), _at(b, N)
    assert list((a * b).lift(N).coeffs) == poly_mod_cyclotomic(poly_mul(pa, pb), N)
    assert list((a + b).lift(N).coeffs) == poly_mod_cyclotomic(poly_add(pa, pb), N)
    assert list((a - b).lift(N).coeffs) == poly_mod_cyclotomic(poly_add(pa, [-c for c in pb]), N)


@given(cycints(), cycints(), cycints())
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


@given(cycints())
def test_conjugation_is_involutive_and_multiplicative(a):
    assert cyc_conjugate(cyc_conjugate(a)) == a
    b = a * a + 1
    assert cyc_conjugate(a * b) == cyc_conjugate(a) * cyc_conjugate(b)
    assert (a * cyc_conjugate(a)).trace() >= 0


@given(cycints(), st.sampled_from([2, 3, 5]))
def test_lift_preserves_value(a, k):
    b = a.lift(a.n * k)
    assert a == b
    assert abs(a.to_complex() - b.to_complex()) < 1e-6


@given(cycints([1, 3, 4, 5, 12, 15, 20]), cycints([1, 3, 4, 5, 12, 15, 20]), st.integers(0, 1))
def test_reduction_is_ring_homomorphism(a, b, idx):
    R = IdealReduction(60, 2, factor_index=idx)
    F = R.field
    assert reduce_mod2(a + b, R) == F.add(reduce_mod2(a, R), reduce_mod2(b, R))
    assert reduce_mod2(a * b, R) == F.mul(reduce_mod2(a, R), reduce_mod2(b, R))
    assert reduce_mod2(2 * a, R) == 0


@given(cycints())
def test_format_parse_round_trip(a):
    assert parse_cycint(format_cycint(a)) == a
