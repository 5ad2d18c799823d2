import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degperiod.errors import BudgetExceeded
from degperiod.finitefield import (
    FieldTables,
    FqConfig,
    enumerate_field,
    find_irreducible,
    irreducibles,
    is_irreducible,
    is_prime,
    power_walk_coords,
    power_walk_traces,
    trace,
    trace_by_definition,
)

CONFIGS = [(2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (5, 3)]


def _irreducible_by_root_search(f, p):
    """Degree <= 3: irreducible iff no root in F_p."""
    return all(sum(c * pow(x, i, p) for i, c in enumerate(f)) % p for x in range(p))


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 3)])
def test_irreducibility_against_root_search(p, k):
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        assert is_irreducible(f, p) == _irreducible_by_root_search(f, p)


def test_irreducible_counts():
    # number of monic irreducibles of degree k over F_p (necklace formula)
    assert sum(1 for _ in irreducibles(2, 4)) == 3
    assert sum(1 for _ in irreducibles(3, 4)) == 18
    assert sum(1 for _ in irreducibles(5, 2)) == 10


def test_default_modulus_is_lexicographically_first():
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert find_irreducible(3, 2) == next(irreducibles(3, 2))


def test_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_config_validation():
    with pytest.raises(ValueError):
        FqConfig(4, 2)
    with pytest.raises(ValueError):
        FqConfig(3, 2, (2, 0, 1))  # x^2 - 1 is reducible
    assert FqConfig(3, 2, (1, 0, 1)).q == 9


@st.composite
def field_triples(draw):
    p, k = draw(st.sampled_from(CONFIGS))
    cfg = FqConfig(p, k)
    pick = st.integers(0, cfg.q - 1).map(cfg.from_index)
    return cfg, draw(pick), draw(pick), draw(pick)


@given(field_triples())
def test_field_axioms(t):
    cfg, a, b, c = t
    assert a + b == b + a and a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == cfg.zero()
    if not a.is_zero():
        assert a * a.inverse() == cfg.one()
    assert a ** cfg.q == a


@given(field_triples())
def test_trace_matches_definition_and_frobenius(t):
    cfg, a, b, _ = t
    assert trace(a) == trace_by_definition(a)
    assert trace(a.frobenius()) == trace(a)
    assert trace(a + b) == (trace(a) + trace(b)) % cfg.p


@pytest.mark.parametrize("p,k", CONFIGS)
def test_trace_surjective_uniform(p, k):
    cfg = FqConfig(p, k)
    counts = [0] * p
    for x in enumerate_field(cfg):
        counts[trace_by_definition(x)] += 1
    assert counts == [p ** (k - 1)] * p


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_field(FqConfig(3, 5), budget=100))


@pytest.mark.parametrize("p,k", CONFIGS)
def test_primitive_element_order(p, k):
    cfg = FqConfig(p, k)
    g = cfg.primitive_element
    seen = set()
    x = cfg.one()
    for _ in range(cfg.q - 1):
        seen.add(x)
        x = x * g
    assert len(seen) == cfg.q - 1 and x == cfg.one()


@pytest.mark.parametrize("p,k", [(3, 4), (5, 3), (7, 2)])
def test_power_walk_against_scalar(p, k):
    cfg = FqConfig(p, k)
    c = cfg.primitive_element ** 3
    start, count = 5, 200
    coords = power_walk_coords(cfg, c, start, count)
    traces = power_walk_traces(cfg, c, start, count)
    x = c**start
    for i in range(count):
        assert tuple(int(v) for v in coords[i]) == x.coeffs
        assert traces[i] == trace_by_definition(x)
        x = x * c


def test_field_tables():
    cfg = FqConfig(5, 2)
    tabs = FieldTables(cfg)
    g = cfg.primitive_element
    for x in enumerate_field(cfg):
        if x.is_zero():
            assert tabs.log[x.index()] == -1
            with pytest.raises(ZeroDivisionError):
                tabs.log_of(x)
        else:
            assert g ** tabs.log_of(x) == x
    assert list(tabs.power_traces[:3]) == [trace(g**i) for i in range(3)]


def test_config_json_roundtrip():
    cfg = FqConfig(5, 3)
    assert FqConfig.from_json(cfg.to_json()) == cfg
