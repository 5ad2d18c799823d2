import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from degperiod.cyclotomic import CycElem, sqrt
from degperiod.errors import NotASquare
from degperiod.errors import ReconstructionError
from degperiod.expsum import MultiPoly, exp_sums
from degperiod.lrs import (
    CERTIFIED,
    EMPIRICAL,
    UNDECIDABLE,
    Recurrence,
    arithmetic_subsequence,
    berlekamp_massey,
    certify_zero_set_order_le2,
    extend,
    generating_function,
    lfunction_from_sums,
    lfunction_series,
    pade,
    polynomial_combination,
    zero_set_empirical,
)

small = st.integers(-3, 3)


@st.composite
def rational_recurrences(draw, max_order=3):
    m = draw(st.integers(1, max_order))
    coeffs = draw(st.lists(small, min_size=m, max_size=m))
    initial = draw(st.lists(small, min_size=m, max_size=m))
    return Recurrence(tuple(Fraction(c) for c in coeffs), tuple(Fraction(x) for x in initial))


@st.composite
def cyclotomic_recurrences(draw, m=5, max_order=2):
    order = draw(st.integers(1, max_order))
    el = st.lists(small, min_size=m - 1, max_size=m - 1).map(lambda cs: CycElem(m, cs))
    return Recurrence(tuple(draw(el) for _ in range(order)), tuple(draw(el) for _ in range(order)))


def test_fibonacci_frozen():
    fib = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    rec = berlekamp_massey(fib)
    assert rec.coeffs == (1, 1) and rec.confirmed
    assert extend(rec, 3) == [55, 89, 144]
    gf = generating_function(rec)
    assert list(gf.num) == [0, 1] and list(gf.den) == [1, -1, -1]


def test_bm_short_input_rejected():
    with pytest.raises(ValueError):
        berlekamp_massey([1])


def test_bm_unconfirmed_flag():
    rec = berlekamp_massey([1, 2, 4, 8, 17])
    assert not rec.confirmed


@given(rational_recurrences())
def test_bm_recovers_and_is_idempotent(rec):
    terms = rec.first(4 * rec.order + 4)
    found = berlekamp_massey(terms)
    assert found.order <= rec.order
    assert found.first(len(terms)) == terms
    again = berlekamp_massey(found.first(len(terms)))
    assert again.coeffs == found.coeffs


@given(cyclotomic_recurrences())
def test_bm_over_cyclotomic_field(rec):
    terms = rec.first(10)
    found = berlekamp_massey(terms)
    assert found.order <= rec.order and found.confirmed
    assert extend(found, 4) == rec.first(14)[10:]


@given(rational_recurrences())
def test_generating_function_round_trip(rec):
    gf = generating_function(rec)
    assert gf.series(20) == rec.first(20)
    if rec.coeffs[-1] != 0:
        assert gf.vanishes_at_infinity() or not any(rec.first(20))


@given(rational_recurrences(), st.integers(0, 4), st.integers(1, 4))
def test_subsequence_order_bounded(rec, i, r):
    sub = arithmetic_subsequence(rec, i, r, count=2 * rec.order + 4)
    assert sub.order <= rec.order
    full = rec.first(i + r * 20 + 1)
    assert sub.first(20) == full[i::r][:20]


def test_polynomial_combination_square():
    fib = Recurrence((1, 1), (0, 1))
    sq = polynomial_combination([fib], {(2,): 1}, 12)
    assert sq.order == 3  # F_n^2 satisfies an order-3 recurrence
    assert sq.first(12) == [x * x for x in fib.first(12)]
    with pytest.raises(ValueError):
        polynomial_combination([fib], {(1, 1): 1}, 5)


def test_pade_frozen():
    rf = pade([Fraction(1), 2, 4, 8, 16, 32], 4)
    assert list(rf.num) == [1] and list(rf.den) == [1, -2] and rf.confirmed


def test_lfunction_quadratic_p3():
    sums = exp_sums(MultiPoly.monomial(2), 3, 4)
    L = lfunction_from_sums(sums)
    assert L.confirmed
    assert list(L.den) == [1]
    assert L.num[0] == 1 and L.num[1] == 1 + 2 * CycElem.zeta(3)


@pytest.mark.parametrize("d,p", [(2, 3), (3, 7), (2, 5), (4, 5)])
def test_lfunction_matches_bm_roots(d, p):
    # for one-variable monomials L(T) = prod (1 - w_i T) and S_k = -sum w_i^k
    sums = exp_sums(MultiPoly.monomial(d), p, 8)
    L = lfunction_from_sums(sums)
    rec = berlekamp_massey(sums)
    assert L.confirmed and rec.confirmed
    assert list(L.den) == [1]
    assert list(L.num) == [1] + [-c for c in rec.coeffs]
    assert len(L.num) - 1 == d - 1


def test_lfunction_series_exp():
    # S_k = 1 for all k gives 1/(1 - T)
    assert lfunction_series([1] * 5, 5) == [1] * 5


def test_lfunction_inconsistent_raises_or_unconfirmed():
    rng = random.Random(3)
    sums = [Fraction(rng.randint(-50, 50)) for _ in range(6)]
    try:
        L = lfunction_from_sums(sums)
    except ReconstructionError:
        return
    assert not L.confirmed


# -- zero sets --------------------------------------------------------------------


def test_zero_set_root_of_unity_ratio():
    z = CycElem.zeta(3)
    rec = Recurrence((z + 1, -z), (CycElem(3, [0]), z - 1))  # a_n = zeta^n - 1
    desc = certify_zero_set_order_le2(rec)
    assert desc.exactness == CERTIFIED
    assert desc.members(30) == list(range(0, 30, 3))


def test_zero_set_empty():
    rec = Recurrence((Fraction(3), Fraction(-2)), (Fraction(-2), Fraction(-1)))  # 2^n - 3
    desc = certify_zero_set_order_le2(rec)
    assert desc.exactness == CERTIFIED and desc.members(200) == []


def test_zero_set_finite_exceptional():
    rec = Recurrence((Fraction(3), Fraction(-2)), (Fraction(-3), Fraction(-2)))  # 2^n - 4
    desc = certify_zero_set_order_le2(rec)
    assert desc.exactness == CERTIFIED and desc.members(100) == [2]


def test_zero_set_repeated_root():
    rec = Recurrence((Fraction(4), Fraction(-4)), (Fraction(3), Fraction(4)))  # (3 - n) 2^n
    desc = certify_zero_set_order_le2(rec)
    assert desc.exactness == CERTIFIED and desc.members(50) == [3]


def test_zero_set_rejects_high_order():
    with pytest.raises(ValueError):
        certify_zero_set_order_le2(Recurrence((1, 1, 1), (0, 0, 1)))


def test_zero_set_empirical_frozen():
    terms = [0 if n % 4 in (1, 2) else 1 for n in range(20)]
    desc = zero_set_empirical(terms)
    assert desc.exactness == EMPIRICAL and desc.modulus == 4 and desc.residues == [1, 2]


def _certify_or_nonsquare(rec):
    try:
        return certify_zero_set_order_le2(rec)
    except NotASquare:
        m = next((x.m for x in rec.coeffs if isinstance(x, CycElem)), 1)
        c1, c2 = (CycElem(m, [x]) if not isinstance(x, CycElem) else x for x in rec.coeffs)
        assert sqrt(c1 * c1 + 4 * c2) is None
        return None


@given(cyclotomic_recurrences(m=3))
def test_certify_agrees_with_empirical(rec):
    desc = _certify_or_nonsquare(rec)
    if desc is None:
        return
    terms = rec.first(60)
    zeros = [n for n, t in enumerate(terms) if t == 0]
    if desc.exactness == CERTIFIED:
        assert desc.members(60) == zeros
    else:
        assert desc.exactness == UNDECIDABLE


@given(rational_recurrences(max_order=2))
def test_certify_rational(rec):
    desc = certify_zero_set_order_le2(rec) if rec.order == 1 else _certify_or_nonsquare(rec)
    if desc is None:
        return
    zeros = [n for n, t in enumerate(rec.first(80)) if t == 0]
    # over Q a root ratio on the unit circle is +-1, so certification never gives up
    assert desc.exactness == CERTIFIED
    assert desc.members(80) == zeros
