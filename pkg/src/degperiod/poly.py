"""Dense univariate polynomials as coefficient lists, lowest degree first.

The helpers are generic over any exact field whose elements support ``+``,
``-``, ``*``, ``/`` and comparison against the integer ``0``: ``Fraction``
and :class:`degperiod.cyclotomic.CycElem` are the two used in this package.
The zero polynomial is the empty list.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Sequence, Tuple

Poly = List[Any]


def _div(x, y):
    # int / int would silently produce a float
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


def trim(a: Sequence) -> Poly:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(a: Sequence) -> int:
    """Degree of ``a``; ``-1`` for the zero polynomial."""
    return len(trim(a)) - 1


def add(a: Sequence, b: Sequence) -> Poly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def neg(a: Sequence) -> Poly:
    return [-c for c in a]


def sub(a: Sequence, b: Sequence) -> Poly:
    return add(a, neg(b))


def scale(a: Sequence, c) -> Poly:
    return trim([c * x for x in a])


def mul(a: Sequence, b: Sequence) -> Poly:
    if not a or not b:
        return []
    out: list = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_poly(a: Sequence, b: Sequence) -> Tuple[Poly, Poly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    db = len(b) - 1
    lead = b[-1]
    if len(r) - 1 < db:
        return [], r
    q: list = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = _div(r[-1], lead)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = r[shift + i] - c * y
        r.pop()
        r = trim(r)
    return trim(q), r


def monic(a: Sequence) -> Poly:
    a = trim(a)
    if not a:
        return []
    lead = a[-1]
    return [_div(c, lead) for c in a]


def gcd(a: Sequence, b: Sequence) -> Poly:
    """Monic gcd; ``gcd(0, 0) == []``."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def xgcd(a: Sequence, b: Sequence) -> Tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return monic(r0), [_div(c, lead) for c in s0], [_div(c, lead) for c in t0]


def evaluate(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def series_inverse_mul(num: Sequence, den: Sequence, n: int) -> list:
    """First ``n`` power-series coefficients of ``num/den``; needs ``den[0] != 0``."""
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator must have a nonzero constant term")
    d0 = den[0]
    out: list = []
    for i in range(n):
        acc = num[i] if i < len(num) else 0
        for j in range(1, min(i, len(den) - 1) + 1):
            acc = acc - den[j] * out[i - j]
        out.append(_div(acc, d0))
    return out


def to_fractions(a: Sequence) -> List[Fraction]:
    return [Fraction(c) for c in a]


def format_poly(a: Sequence, var: str = "x") -> str:
    a = trim(a)
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        cs = str(c)
        if i == 0:
            parts.append(cs)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            parts.append(mono if cs == "1" else f"({cs})*{mono}")
    return " + ".join(parts)
