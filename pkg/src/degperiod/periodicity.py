"""Degree periodicity for sequences in Q(zeta_m).

For each Galois element sigma of H_K the indices n with sigma(a_n) = a_n
form an eventually periodic set; the stabilizer of a_n, and hence its
degree, is read off row by row.  For power sequences alpha^n the fixed sets
are exact arithmetic progressions and the whole certificate is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from . import poly
from .cyclotomic import (
    CycElem,
    SubfieldSpec,
    _apply_t,
    characteristic_polynomial,
    degree,
    is_root_of_unity,
    minimal_polynomial,
    stabilizer,
)
from .errors import DetectionError
from .lrs import RationalFn, Recurrence, berlekamp_massey, normalize_rational
from .sequences import fit_eventual_period


@dataclass(frozen=True)
class PeriodCertificate:
    """terms[n + r] == terms[n] for every n >= N (0-based) within ``horizon`` terms."""

    N: int
    r: int
    horizon: int
    exact: bool = False

    def to_json(self) -> dict:
        return {"N": self.N, "r": self.r, "horizon": self.horizon, "exact": self.exact}


def detect_virtual_period(terms: Sequence, min_periods: int = 2) -> PeriodCertificate:
    """Empirical (N, r) for an eventually periodic sequence.

    >>> detect_virtual_period([7, 1, 3, 1, 3, 1, 3, 1, 3])
    PeriodCertificate(N=1, r=2, horizon=9, exact=False)
    """
    if len(terms) < 6:
        raise ValueError("need at least 6 terms")
    fit = fit_eventual_period(list(terms), min_periods)
    if fit is None:
        raise DetectionError(f"no eventually periodic fit in {len(terms)} terms; increase the horizon")
    return PeriodCertificate(fit[0], fit[1], len(terms), False)


def combine(certs: Sequence[PeriodCertificate], horizon: int, exact: bool = False) -> PeriodCertificate:
    """Uniform (max N, lcm r) valid for every row at once."""
    if not certs:
        return PeriodCertificate(0, 1, horizon, exact)
    return PeriodCertificate(max(c.N for c in certs), reduce(math.lcm, (c.r for c in certs)), horizon, exact)


@dataclass
class FixednessRow:
    t: int
    pattern: List[bool]
    cert: Optional[PeriodCertificate]


@dataclass
class FixednessProfile:
    rows: Dict[int, FixednessRow]
    combined: Optional[PeriodCertificate]

    def stabilizer_at(self, n: int) -> List[int]:
        return [t for t, row in self.rows.items() if row.pattern[n]]

    def to_json(self) -> dict:
        return {
            str(t): {
                "pattern": "".join("1" if b else "0" for b in row.pattern),
                "N": row.cert.N if row.cert else None,
                "r": row.cert.r if row.cert else None,
            }
            for t, row in self.rows.items()
        }


def _common_modulus(terms: Sequence[CycElem], K: SubfieldSpec):
    for a in terms:
        if a.m != K.m:
            raise ValueError(f"term in Q(zeta_{a.m}) but the subfield is given for m = {K.m}")


def fixedness_profile(terms: Sequence[CycElem], K: SubfieldSpec) -> FixednessProfile:
    _common_modulus(terms, K)
    rows = {}
    for t in K.group():
        pattern = [_apply_t(t, a) == a for a in terms]
        try:
            cert = detect_virtual_period(pattern)
        except (DetectionError, ValueError):
            cert = None
        rows[t] = FixednessRow(t, pattern, cert)
    certs = [r.cert for r in rows.values()]
    combined = None if any(c is None for c in certs) else combine(certs, len(terms))
    return FixednessProfile(rows, combined)


def degree_sequence_analysis(
    terms: Sequence[CycElem], K: SubfieldSpec
) -> Tuple[List[int], PeriodCertificate]:
    """Degrees [K(a_n):K] with their detected period, cross-checked against the fixedness rows."""
    if len(terms) < 6:
        raise ValueError("need at least 6 terms")
    degrees = [degree(a, K) for a in terms]
    cert = detect_virtual_period(degrees)
    profile = fixedness_profile(terms, K)
    if profile.combined is None:
        raise DetectionError("some fixedness row has no eventually periodic fit")
    if profile.combined.r % cert.r:
        raise DetectionError(
            f"degree period {cert.r} does not divide the combined fixedness period {profile.combined.r}"
        )
    return degrees, cert


def degree_genfun(degrees: Sequence[int], cert: PeriodCertificate, start: int = 1) -> RationalFn:
    """sum_j degrees[j] T^(start+j) as head polynomial + periodic tail / (1 - T^r)."""
    N, r = cert.N, cert.r
    if len(degrees) < N + r:
        raise ValueError("certificate needs at least N + r terms")
    for n in range(N, len(degrees) - r):
        if degrees[n + r] != degrees[n]:
            raise ValueError(f"degrees disagree with the certificate at index {n}")
    den = [Fraction(1)] + [Fraction(0)] * (r - 1) + [Fraction(-1)]
    head = [Fraction(0)] * start + [Fraction(d) for d in degrees[:N]]
    tail = [Fraction(0)] * (start + N) + [Fraction(d) for d in degrees[N:N + r]]
    num = poly.add(poly.mul(head, den), tail)
    rf = normalize_rational(num, den)
    if rf.series(start + len(degrees)) != [0] * start + [Fraction(d) for d in degrees]:
        raise AssertionError("degree generating function does not re-expand to the degrees")
    return rf


# -- minimal polynomials -------------------------------------------------------------


@dataclass
class MinPolyRecord:
    index: int
    stabilizer: List[int]
    poly: List[CycElem]

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def rational_coeffs(self) -> List[Fraction]:
        return [c.to_fraction() for c in self.poly]


@dataclass
class CoefficientSequenceReport:
    residue: Optional[int]
    coefficient: int
    order: int
    confirmed: bool
    recurrence: Recurrence


@dataclass
class MinPolyReport:
    records: List[MinPolyRecord]
    cert: PeriodCertificate
    classes: List[CoefficientSequenceReport] = field(default_factory=list)
    charpoly: List[CoefficientSequenceReport] = field(default_factory=list)

    def all_confirmed(self) -> bool:
        return all(c.confirmed for c in self.classes + self.charpoly)


def minpoly_sequence(terms: Sequence[CycElem], K: SubfieldSpec) -> MinPolyReport:
    """Minimal polynomials P_n of the terms and recurrences for their coefficients.

    Within each residue class n = N + i (mod r) of the degree certificate the
    degree is constant, and every T-coefficient of P_n is an elementary
    symmetric function of conjugate sequences; each such coefficient sequence
    goes through Berlekamp-Massey.  The same is done over all n for the full
    characteristic polynomial prod_{sigma in H_K} (T - sigma(a_n)), whose
    constant term is the norm sequence.
    """
    if len(terms) < 8:
        raise ValueError("need at least 8 terms")
    _common_modulus(terms, K)
    records = [MinPolyRecord(n, stabilizer(a, K), minimal_polynomial(a, K)) for n, a in enumerate(terms)]
    cert = detect_virtual_period([r.degree for r in records])
    report = MinPolyReport(records, cert)
    for i in range(cert.r):
        idx = list(range(cert.N + i, len(terms), cert.r))
        if len(idx) < 2:
            continue
        d = records[idx[0]].degree
        for j in range(d + 1):
            seq = [records[n].poly[j] for n in idx]
            rec = berlekamp_massey(seq)
            report.classes.append(CoefficientSequenceReport(i, j, rec.order, rec.confirmed, rec))
    chars = [characteristic_polynomial(a, K) for a in terms]
    for j in range(K.order() + 1):
        rec = berlekamp_massey([c[j] for c in chars])
        report.charpoly.append(CoefficientSequenceReport(None, j, rec.order, rec.confirmed, rec))
    return report


# -- power sequences -------------------------------------------------------------------


@dataclass
class PowerSequenceReport:
    alpha: CycElem
    orders: Dict[int, Optional[int]]
    profile: FixednessProfile
    degrees: List[int]
    cert: PeriodCertificate


def power_sequence_analysis(alpha: CycElem, K: SubfieldSpec, horizon: Optional[int] = None) -> PowerSequenceReport:
    """Exact fixedness profile and degree certificate for alpha^n, n >= 0.

    sigma fixes alpha^n iff (sigma(alpha)/alpha)^n = 1, so each fixed set is
    {n : e | n} when the ratio has finite order e and {0} otherwise.
    """
    if alpha.m != K.m:
        raise ValueError("alpha and K live in different cyclotomic fields")
    if alpha.is_zero():
        raise ZeroDivisionError("alpha must be nonzero")
    orders: Dict[int, Optional[int]] = {}
    row_certs = {}
    for t in K.group():
        e = is_root_of_unity(_apply_t(t, alpha) / alpha)
        orders[t] = e
        row_certs[t] = PeriodCertificate(0, e, 0, True) if e is not None else PeriodCertificate(1, 1, 0, True)

    def fixed(t: int, n: int) -> bool:
        e = orders[t]
        return n % e == 0 if e is not None else n == 0

    L = reduce(math.lcm, (c.r for c in row_certs.values()), 1)
    N0 = max(c.N for c in row_certs.values())
    if horizon is None:
        horizon = max(N0 + 2 * L, 12)
    span = max(horizon, N0 + 2 * L)
    group_order = K.order()
    degrees_all = [group_order // sum(fixed(t, n) for t in orders) for n in range(span)]
    # degrees are exactly L-periodic from N0, so one full period decides everything
    r = next(d for d in range(1, L + 1) if L % d == 0 and all(
        degrees_all[n + d] == degrees_all[n] for n in range(N0, N0 + L)))
    N = N0
    while N > 0 and degrees_all[N - 1] == degrees_all[N - 1 + r]:
        N -= 1
    rows = {
        t: FixednessRow(t, [fixed(t, n) for n in range(horizon)], PeriodCertificate(c.N, c.r, horizon, True))
        for t, c in row_certs.items()
    }
    profile = FixednessProfile(rows, PeriodCertificate(N0, L, horizon, True))
    return PowerSequenceReport(alpha, orders, profile, degrees_all[:horizon], PeriodCertificate(N, r, horizon, True))


def analysis_report(degrees: Sequence[int], cert: PeriodCertificate, profile: Optional[FixednessProfile],
                    start: int = 1) -> dict:
    """The JSON report shape shared by the CLI commands."""
    gf = degree_genfun(degrees, cert, start)
    return {
        "degrees": list(degrees),
        "certificate": cert.to_json(),
        "genfun": {"num": [str(c) for c in gf.num], "den": [str(c) for c in gf.den]},
        "profile": profile.to_json() if profile is not None else {},
    }
