"""Linear recurrence sequences over Q and Q(zeta_m).

Field elements may be ``Fraction``/``int`` or :class:`CycElem`; every
algorithm here only uses ring operations, exact division, and comparison
against ``0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from . import poly
from .cyclotomic import CycElem, complex_embeddings, is_root_of_unity, sqrt as cyc_sqrt
from .errors import NotASquare, ReconstructionError
from .sequences import fit_eventual_period

CERTIFIED = "certified"
EMPIRICAL = "empirical"
UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class Recurrence:
    """a_n = c_1 a_{n-1} + ... + c_m a_{n-m} for n >= m.

    ``terms`` holds every term the recurrence was inferred from (at least the
    ``m`` initial ones); :func:`extend` continues after the last of them.
    """

    coeffs: Tuple[Any, ...]
    initial: Tuple[Any, ...]
    terms: Tuple[Any, ...] = ()
    confirmed: bool = True

    def __post_init__(self):
        if len(self.initial) != len(self.coeffs):
            raise ValueError("need exactly one initial term per coefficient")
        if not self.terms:
            object.__setattr__(self, "terms", tuple(self.initial))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def characteristic_polynomial(self) -> list:
        """x^m - c_1 x^(m-1) - ... - c_m, lowest degree first."""
        return [-c for c in reversed(self.coeffs)] + [1]

    def first(self, count: int) -> list:
        out = list(self.initial[:count])
        while len(out) < count:
            out.append(_step(self.coeffs, out))
        return out


def _step(coeffs: Sequence, seq: Sequence):
    acc = 0
    for i, c in enumerate(coeffs, 1):
        if c != 0:
            acc = acc + c * seq[-i]
    return acc


def _div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


def berlekamp_massey(terms: Sequence) -> Recurrence:
    """Shortest linear recurrence generating ``terms``.

    The result is flagged ``confirmed`` when twice its order does not exceed
    the number of terms, which makes it unique.
    """
    terms = list(terms)
    if len(terms) < 2:
        raise ValueError("need at least two terms")
    C: list = [1]
    B: list = [1]
    L = 0
    shift = 1
    b = 1
    for n, s in enumerate(terms):
        d = s
        for i in range(1, L + 1):
            if i < len(C) and C[i] != 0:
                d = d + C[i] * terms[n - i]
        if d == 0:
            shift += 1
            continue
        coef = _div(d, b)
        T = list(C)
        upd = [0] * shift + [coef * x for x in B]
        C = [(C[i] if i < len(C) else 0) - (upd[i] if i < len(upd) else 0) for i in range(max(len(C), len(upd)))]
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            shift = 1
        else:
            shift += 1
    C = C + [0] * (L + 1 - len(C))
    coeffs = tuple(-C[i] for i in range(1, L + 1))
    return Recurrence(coeffs, tuple(terms[:L]), tuple(terms), 2 * L <= len(terms))


def extend(rec: Recurrence, count: int) -> list:
    """The ``count`` terms following ``rec.terms``."""
    seq = list(rec.terms)
    if rec.order == 0:
        return [0] * count
    out = []
    for _ in range(count):
        nxt = _step(rec.coeffs, seq)
        seq.append(nxt)
        out.append(nxt)
    return out


@dataclass(frozen=True)
class RationalFn:
    """num(x) / den(x), coefficient lists lowest degree first, den(0) = 1."""

    num: Tuple[Any, ...]
    den: Tuple[Any, ...]
    confirmed: bool = True

    def series(self, count: int) -> list:
        return poly.series_inverse_mul(list(self.num), list(self.den), count)

    def vanishes_at_infinity(self) -> bool:
        return poly.degree(self.num) < poly.degree(self.den)

    def __str__(self):
        return f"({poly.format_poly(self.num)}) / ({poly.format_poly(self.den)})"


def normalize_rational(num: Sequence, den: Sequence, confirmed: bool = True) -> RationalFn:
    """Lowest terms with den(0) = 1."""
    num, den = poly.trim(num), poly.trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if num:
        g = poly.gcd(num, den)
        if len(g) > 1:
            num = poly.divmod_poly(num, g)[0]
            den = poly.divmod_poly(den, g)[0]
    c0 = den[0]
    if c0 == 0:
        raise ReconstructionError("denominator vanishes at 0; not a power series")
    return RationalFn(tuple(_div(c, c0) for c in num), tuple(_div(c, c0) for c in den), confirmed)


def generating_function(rec: Recurrence) -> RationalFn:
    m = rec.order
    den = [1] + [-c for c in rec.coeffs]
    if m == 0:
        return RationalFn((), (1,))
    head = rec.first(m)
    num = poly.mul(den, head)[:m]
    rf = normalize_rational(num, den, rec.confirmed)
    check = rec.first(3 * m)
    if rf.series(3 * m) != check:
        raise AssertionError("generating function does not re-expand to the sequence")
    return rf


def arithmetic_subsequence(rec: Recurrence, i: int, r: int, count: Optional[int] = None) -> Recurrence:
    """Recurrence for a_{i + n r}, n >= 0."""
    if r < 1 or i < 0:
        raise ValueError("need i >= 0 and r >= 1")
    count = count if count is not None else 2 * rec.order + 2
    count = max(count, 2)
    full = rec.first(i + r * (count - 1) + 1)
    return berlekamp_massey(full[i::r][:count])


def polynomial_combination(recs: Sequence[Recurrence], g: Dict[Tuple[int, ...], Any], count: int) -> Recurrence:
    """Recurrence for n -> g(a_{1n}, ..., a_{ln}); ``g`` maps exponent tuples to coefficients."""
    ell = len(recs)
    for e in g:
        if len(e) != ell:
            raise ValueError(f"monomial {e} does not have {ell} exponents")
    seqs = [r.first(count) for r in recs]
    vals = []
    for n in range(count):
        acc = 0
        for e, c in g.items():
            term = c
            for j, ej in enumerate(e):
                if ej:
                    term = term * seqs[j][n] ** ej
            acc = acc + term
        vals.append(acc)
    return berlekamp_massey(vals)


def lfunction_series(sums: Sequence, count: int) -> list:
    """Coefficients l_0..l_{count-1} of exp(sum_k S_k T^k / k), from n l_n = sum_k S_k l_{n-k}."""
    out: list = [1]
    for n in range(1, count):
        acc = 0
        for k in range(1, n + 1):
            if k <= len(sums):
                acc = acc + sums[k - 1] * out[n - k]
        out.append(_div(acc, n) if isinstance(acc, int) else acc / n)
    return out


def pade(series: Sequence, bound: int) -> RationalFn:
    """Lowest-total-degree num/den matching ``series`` mod T^len(series).

    Candidates are the remainder/cofactor pairs of the extended Euclidean
    algorithm on (T^N, series); the one with den(0) != 0 and the smallest
    ``deg num + deg den`` wins.  ``confirmed`` means the match is unique among
    rational functions of that size (2 * max degree < N).
    """
    N = len(series)
    r0: list = [0] * N + [1]
    r1 = poly.trim(list(series))
    t0: list = []
    t1: list = [1]
    best = None
    while r1:
        dn, dd = poly.degree(r1), poly.degree(t1)
        if t1 and t1[0] != 0 and dn + dd <= bound:
            if best is None or dn + dd < best[0]:
                best = (dn + dd, r1, t1)
        q, r = poly.divmod_poly(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, poly.sub(t0, poly.mul(q, t1))
    if best is None:
        raise ReconstructionError("no rational function with den(0) != 0 matches the series")
    _, num, den = best
    rf = normalize_rational(num, den)
    confirmed = 2 * max(poly.degree(rf.num), poly.degree(rf.den)) < N
    return RationalFn(rf.num, rf.den, confirmed)


def lfunction_from_sums(sums: Sequence) -> RationalFn:
    """Rational L(T) = exp(sum S_k T^k / k) reconstructed from S_1..S_M."""
    M = len(sums)
    if M < 2:
        raise ValueError("need at least two sums")
    ser = lfunction_series(sums, M + 1)
    rf = pade(ser, M - 1)
    if rf.series(M + 1) != ser:
        raise ReconstructionError("reconstruction does not reproduce the series")
    if poly.degree(rf.num) + poly.degree(rf.den) >= M - 1:
        rf = RationalFn(rf.num, rf.den, False)
    return rf


# -- zero sets ------------------------------------------------------------------


@dataclass
class ZeroSetDescription:
    """Zeros = ``exceptional`` U {n >= start : n mod modulus in residues}."""

    exceptional: List[int] = field(default_factory=list)
    residues: List[int] = field(default_factory=list)
    modulus: Optional[int] = 1
    start: int = 0
    exactness: str = EMPIRICAL
    horizon: Optional[int] = None
    note: str = ""

    def contains(self, n: int) -> bool:
        if n in self.exceptional:
            return True
        if self.modulus is None or n < self.start:
            return False
        return n % self.modulus in self.residues

    def members(self, horizon: int) -> List[int]:
        return [n for n in range(horizon) if self.contains(n)]

    def to_json(self) -> dict:
        return {
            "exceptional": self.exceptional,
            "residues": self.residues,
            "modulus": self.modulus,
            "start": self.start,
            "exactness": self.exactness,
            "horizon": self.horizon,
            "note": self.note,
        }


def zero_set_empirical(terms: Sequence, min_periods: int = 2) -> ZeroSetDescription:
    """Eventually periodic description of the zero indices of ``terms`` (see :func:`fit_eventual_period`)."""
    M = len(terms)
    if M < 8:
        raise ValueError("need at least 8 terms")
    z = [t == 0 for t in terms]
    fit = fit_eventual_period(z, min_periods)
    if fit is None:
        zeros = [n for n in range(M) if z[n]]
        return ZeroSetDescription(zeros, [], None, M, UNDECIDABLE, M, "no eventually periodic fit within horizon")
    start, r = fit
    residues = sorted({n % r for n in range(start, start + r) if z[n]})
    exceptional = [n for n in range(start) if z[n]]
    return ZeroSetDescription(exceptional, residues, r, start, EMPIRICAL, M)


def _as_cyc(x, m: int) -> CycElem:
    return x if isinstance(x, CycElem) else CycElem(m, [Fraction(x)])


def _field_modulus(rec: Recurrence) -> int:
    for x in tuple(rec.coeffs) + tuple(rec.initial):
        if isinstance(x, CycElem):
            return x.m
    return 1


def certify_zero_set_order_le2(rec: Recurrence, precision: int = 50) -> ZeroSetDescription:
    """Exact zero set of an order <= 2 recurrence over Q(zeta_m).

    Distinct characteristic roots alpha, beta give a_n = A alpha^n + B beta^n,
    whose zeros solve (alpha/beta)^n = -B/A.  A root-of-unity ratio yields a
    progression; a ratio with some embedding off the unit circle confines
    zeros below an explicit bound, checked term by term.  Remaining cases are
    reported as undecidable.
    """
    if rec.order > 2:
        raise ValueError("certification is implemented for order <= 2 only")
    m = _field_modulus(rec)
    c = [_as_cyc(x, m) for x in rec.coeffs]
    a = [_as_cyc(x, m) for x in rec.initial]
    if rec.order == 0 or all(x == 0 for x in a):
        return ZeroSetDescription([], [0], 1, 0, CERTIFIED, None, "zero sequence")
    if rec.order == 2 and c[1] == 0:
        # a_n = c_1 a_{n-1} for n >= 2: order one from index 1
        head = [0] if a[0] == 0 else []
        tail = certify_zero_set_order_le2(Recurrence((c[0],), (a[1],)))
        return _shift(tail, 1, head)
    if rec.order == 1:
        if a[0] == 0:
            return ZeroSetDescription([], [0], 1, 0, CERTIFIED)
        if c[0] == 0:
            return ZeroSetDescription([], [0], 1, 1, CERTIFIED, None, "zero from index 1")
        return ZeroSetDescription([], [], 1, 0, CERTIFIED)
    c1, c2 = c
    disc = c1 * c1 + 4 * c2
    if disc == 0:
        alpha = c1 / 2
        A = a[0]
        B = a[1] / alpha - A
        if B == 0:
            return ZeroSetDescription([], [0] if A == 0 else [], 1, 0, CERTIFIED, None, "repeated root")
        n0 = -A / B
        zeros = []
        if n0.is_rational():
            q = n0.to_fraction()
            if q.denominator == 1 and q >= 0:
                zeros = [int(q)]
        return ZeroSetDescription(zeros, [], 1, max(zeros, default=-1) + 1, CERTIFIED, None, "repeated root")
    s = cyc_sqrt(disc)
    if s is None:
        raise NotASquare("characteristic roots do not lie in the working cyclotomic field")
    alpha, beta = (c1 + s) / 2, (c1 - s) / 2
    A = (a[1] - beta * a[0]) / (alpha - beta)
    B = (alpha * a[0] - a[1]) / (alpha - beta)
    if A == 0 or B == 0:
        if A == 0 and B == 0:
            return ZeroSetDescription([], [0], 1, 0, CERTIFIED)
        return ZeroSetDescription([], [], 1, 0, CERTIFIED, None, "single geometric term")
    rho = alpha / beta
    tau = -B / A
    e = is_root_of_unity(rho)
    if e is not None:
        residues = []
        cur = CycElem(m, [1])
        for n in range(e):
            if cur == tau:
                residues.append(n)
            cur = cur * rho
        return ZeroSetDescription([], residues, e, 0, CERTIFIED, None, f"ratio is a root of unity of order {e}")
    with mpmath.workdps(precision):
        er = complex_embeddings(rho, precision)
        et = complex_embeddings(tau, precision)
        best = None
        for vr, vt in zip(er, et):
            lr = mpmath.log(abs(vr))
            if abs(lr) > mpmath.mpf(10) ** (-precision // 2):
                if best is None or abs(lr) > abs(best[0]):
                    best = (lr, mpmath.log(abs(vt)))
        if best is None:
            return ZeroSetDescription(
                [], [], None, 0, UNDECIDABLE, None, "ratio has all embeddings on the unit circle but is not a root of unity"
            )
        bound = int(mpmath.floor(abs(best[1]) / abs(best[0]))) + 2
    # any zero n satisfies n log|rho| = log|tau| at that embedding, so n < bound
    terms = rec.first(bound + 1)
    zeros = [n for n, t in enumerate(terms) if t == 0]
    return ZeroSetDescription(zeros, [], 1, bound + 1, CERTIFIED, None, f"zeros confined below n = {bound}")


def _shift(desc: ZeroSetDescription, by: int, head: List[int]) -> ZeroSetDescription:
    residues = desc.residues
    modulus = desc.modulus
    if modulus is not None and residues:
        residues = sorted({(x + by) % modulus for x in residues})
    return ZeroSetDescription(
        head + [n + by for n in desc.exceptional],
        residues,
        modulus,
        desc.start + by,
        desc.exactness,
        desc.horizon,
        desc.note,
    )
