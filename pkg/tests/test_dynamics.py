import pytest
from hypothesis import given, strategies as st

from degperiod.cyclotomic import CycElem, GaloisAuto, SubfieldSpec, units
from degperiod.dynamics import CycPoly, diagonal_fixedness, equivariance_holds, iterate, orbit_degree_analysis
from degperiod.errors import ModulusMismatch


def test_squaring_roots_of_unity():
    f = CycPoly(16, (0, 0, 1))
    rec = iterate(f, CycElem.zeta(16), 10)
    degs, cert = orbit_degree_analysis(rec, SubfieldSpec.rationals(16))
    assert degs[:6] == [8, 4, 2, 1, 1, 1]
    assert cert.N <= 3 and cert.r == 1


def test_rotation_orbit():
    f = CycPoly(3, (0, CycElem.zeta(3)))
    rec = iterate(f, CycElem(3, [1]), 9)
    degs, cert = orbit_degree_analysis(rec, SubfieldSpec.rationals(3))
    assert degs[:3] == [1, 2, 2] and cert.r == 3
    diag = diagonal_fixedness(f, CycElem(3, [1]), GaloisAuto(3, 2), 9)
    assert diag.pattern == [True, False, False] * 3 + [True]


def test_size_budget_truncates():
    f = CycPoly(5, (1, 0, 1))
    rec = iterate(f, CycElem(5, [1, 1]), 40, size_budget_bits=200)
    assert rec.truncated and len(rec.points) < 41
    assert all(b <= 200 for b in rec.bits)


def test_points_follow_f():
    f = CycPoly(5, (CycElem.zeta(5), 0, 1))
    rec = iterate(f, CycElem(5, [0]), 5)
    for x, y in zip(rec.points, rec.points[1:]):
        assert f(x) == y


def test_polynomial_trimming_and_mismatch():
    assert CycPoly(5, (1, 2, 0, 0)).degree == 1
    with pytest.raises(ModulusMismatch):
        CycPoly(5, (CycElem.zeta(3),))
    with pytest.raises(ModulusMismatch):
        iterate(CycPoly(5, (0, 1)), CycElem.zeta(7), 3)


@st.composite
def dyn_cases(draw):
    m = draw(st.sampled_from([3, 4, 5, 8]))
    phi = len(units(m))
    el = st.lists(st.integers(-1, 1), min_size=phi, max_size=phi).map(lambda cs: CycElem(m, cs))
    f = CycPoly(m, tuple(draw(el) for _ in range(draw(st.integers(1, 3)))))
    t = draw(st.sampled_from(units(m)))
    return f, draw(el), GaloisAuto(m, t)


@given(dyn_cases())
def test_equivariance(case):
    f, a, sigma = case
    rec = iterate(f, a, 5, size_budget_bits=4000)
    assert equivariance_holds(f, a, sigma, rec)


@given(dyn_cases())
def test_diagonal_matches_stabilizer_when_f_is_fixed(case):
    f, a, sigma = case
    # with sigma(f) = f, the diagonal pattern is exactly "sigma fixes f^n(a)"
    f = CycPoly(f.m, tuple(CycElem(f.m, [c.coeffs[0] if c.coeffs else 0]) for c in f.coeffs))
    rec = iterate(f, a, 5, size_budget_bits=4000)
    diag = diagonal_fixedness(f, a, sigma, 5, size_budget_bits=4000)
    n = min(len(rec.points), len(diag.pattern))
    assert diag.pattern[:n] == [sigma(x) == x for x in rec.points[:n]]
