from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given, strategies as st

from degperiod.cyclotomic import (
    CycElem,
    GaloisAuto,
    SubfieldSpec,
    apply_auto,
    characteristic_polynomial,
    complex_embeddings,
    conjugates,
    cyclotomic_polynomial,
    degree,
    euler_phi,
    is_root_of_unity,
    minimal_polynomial,
    norm,
    sqrt,
    stabilizer,
    units,
)
from degperiod.errors import ModulusMismatch
from degperiod import poly

MODULI = [1, 2, 3, 4, 5, 7, 8, 9, 12, 15, 16]


def elems(m, lo=-4, hi=4):
    return st.lists(st.integers(lo, hi), min_size=euler_phi(m), max_size=euler_phi(m)).map(
        lambda cs: CycElem(m, cs)
    )


@st.composite
def elem_triples(draw):
    m = draw(st.sampled_from(MODULI))
    return m, draw(elems(m)), draw(elems(m)), draw(elems(m))


# -- cyclotomic polynomials ------------------------------------------------------


def _phi_by_division(m):
    """x^m - 1 divided by Phi_d for every proper divisor d (exact integer long division)."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = poly.divmod_poly(num, _phi_by_division(d))
            assert not poly.trim(r)
            num = q
    return [int(c) for c in num]


@pytest.mark.parametrize("m", range(1, 31))
def test_cyclotomic_polynomial_matches_division(m):
    assert cyclotomic_polynomial(m) == _phi_by_division(m)
    assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m)


def test_phi_12_frozen():
    assert cyclotomic_polynomial(12) == [1, 0, -1, 0, 1]


def test_units():
    assert units(12) == (1, 5, 7, 11)
    assert units(1) == (1,)


# -- arithmetic ------------------------------------------------------------------


def test_zeta_reduction_frozen():
    z = CycElem.zeta(5)
    assert z**5 == 1
    assert 1 + z + z**2 + z**3 + z**4 == 0
    w = CycElem.zeta(3)
    assert (1 + 2 * w) ** 2 == -3


def test_mixed_fields_rejected():
    with pytest.raises(ModulusMismatch):
        CycElem.zeta(3) + CycElem.zeta(5)


@given(elem_triples())
def test_ring_axioms(t):
    m, a, b, c = t
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a


@given(elem_triples())
def test_inverse(t):
    m, a, _, _ = t
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1
        assert a / a == 1


@given(elem_triples(), st.integers(0, 200))
def test_automorphism_is_homomorphism(t, seed):
    m, a, b, _ = t
    us = units(m)
    s = GaloisAuto(m, us[seed % len(us)])
    assert s(a + b) == s(a) + s(b)
    assert s(a * b) == s(a) * s(b)


@given(st.sampled_from([5, 7, 9, 12, 15]), st.integers(0, 100), st.integers(0, 100))
def test_composition_law(m, i, j):
    us = units(m)
    t, u = us[i % len(us)], us[j % len(us)]
    a = CycElem(m, range(1, euler_phi(m) + 1))
    assert GaloisAuto(m, t)(GaloisAuto(m, u)(a)) == GaloisAuto(m, t * u % m)(a)
    assert GaloisAuto(m, 1)(a) == a


def test_json_roundtrip():
    a = CycElem(7, [Fraction(1, 3), -2, 0, 5])
    assert CycElem.from_json(a.to_json()) == a


# -- Galois theory ---------------------------------------------------------------


def test_subfield_closure():
    K = SubfieldSpec(13, (3,))
    assert sorted(K.group()) == [1, 3, 9]
    assert SubfieldSpec.rationals(13).is_rationals()
    assert not K.is_rationals()


def test_frozen_degrees():
    Q5 = SubfieldSpec.rationals(5)
    z = CycElem.zeta(5)
    assert degree(z, Q5) == 4
    assert degree(z + z**4, Q5) == 2
    assert degree(CycElem.rational(5, 3), Q5) == 1
    # Gauss sum for p = 3 is sqrt(-3): degree 2
    assert degree(1 + 2 * CycElem.zeta(3), SubfieldSpec.rationals(3)) == 2


def test_minimal_polynomial_frozen():
    z = CycElem.zeta(5)
    mp = minimal_polynomial(z + z**4, SubfieldSpec.rationals(5))
    assert [c.to_fraction() for c in mp] == [-1, 1, 1]  # x^2 + x - 1


@given(elem_triples())
def test_minimal_polynomial_properties(t):
    m, a, _, _ = t
    K = SubfieldSpec.rationals(m)
    mp = minimal_polynomial(a, K)
    assert len(mp) - 1 == degree(a, K)
    assert poly.evaluate(mp, a) == 0
    assert all(c.is_rational() for c in mp)
    for u in K.group():
        assert minimal_polynomial(GaloisAuto(m, u)(a), K) == mp
    # degree = index of the stabilizer
    assert degree(a, K) * len(stabilizer(a, K)) == K.order()


@given(elem_triples())
def test_stabilizer_is_subgroup(t):
    m, a, _, _ = t
    H = set(stabilizer(a, SubfieldSpec.rationals(m)))
    assert 1 in H
    assert all((x * y) % max(m, 2) in H or m <= 2 for x in H for y in H)


@given(elem_triples())
def test_norm_is_product_of_conjugates(t):
    m, a, _, _ = t
    K = SubfieldSpec.rationals(m)
    prod = CycElem(m, [1])
    for u in K.group():
        prod = prod * GaloisAuto(m, u)(a)
    assert norm(a, K) == prod
    assert norm(a, K).is_rational()
    cp = characteristic_polynomial(a, K)
    assert len(cp) - 1 == K.order()


def test_relative_degree():
    m = 13
    K = SubfieldSpec(m, (3,))  # fixed field of order-3 subgroup, index 4 in the full group
    z = CycElem.zeta(m)
    assert degree(z, K) == 3
    eta = z + z**3 + z**9
    assert degree(eta, K) == 1
    assert degree(eta, SubfieldSpec.rationals(m)) == 4
    assert len(conjugates(z, K)) == 3


def test_root_of_unity():
    assert is_root_of_unity(CycElem.zeta(5)) == 5
    assert is_root_of_unity(-CycElem.zeta(5)) == 10
    assert is_root_of_unity(CycElem.rational(5, 1)) == 1
    assert is_root_of_unity(CycElem.zeta(12, 3)) == 4
    assert is_root_of_unity(1 + CycElem.zeta(5)) is None
    assert is_root_of_unity(CycElem.rational(7, 2)) is None


def test_complex_embeddings_frozen():
    vals = complex_embeddings(CycElem.zeta(4), 30)
    assert mpmath.almosteq(vals[0], mpmath.mpc(0, 1), 1e-25)
    assert mpmath.almosteq(vals[1], mpmath.mpc(0, -1), 1e-25)


@given(elem_triples())
def test_sqrt_of_square(t):
    m, a, _, _ = t
    r = sqrt(a * a)
    assert r is not None and r * r == a * a


def test_sqrt_frozen():
    r = sqrt(CycElem.rational(3, -3))
    assert r * r == -3 and r in (1 + 2 * CycElem.zeta(3), -(1 + 2 * CycElem.zeta(3)))
    assert sqrt(CycElem.rational(1, Fraction(9, 4))) == Fraction(3, 2)
    assert sqrt(CycElem.rational(3, 2)) is None
