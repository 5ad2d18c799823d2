"""Orbits of one-variable polynomials over Q(zeta_m) and their degree sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .cyclotomic import CycElem, GaloisAuto, SubfieldSpec, apply_auto, degree
from .errors import DetectionError, ModulusMismatch
from .periodicity import PeriodCertificate, detect_virtual_period

DEFAULT_SIZE_BUDGET_BITS = 10**6


@dataclass(frozen=True)
class CycPoly:
    """f(x) = sum coeffs[i] x^i over Q(zeta_m)."""

    m: int
    coeffs: Tuple[CycElem, ...]

    def __post_init__(self):
        cs = [c if isinstance(c, CycElem) else CycElem(self.m, [c]) for c in self.coeffs]
        for c in cs:
            if c.m != self.m:
                raise ModulusMismatch("polynomial coefficients from different fields")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: CycElem) -> CycElem:
        if x.m != self.m:
            raise ModulusMismatch("point and polynomial live in different fields")
        acc = CycElem(self.m, [])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def conjugate(self, sigma: GaloisAuto) -> "CycPoly":
        return CycPoly(self.m, tuple(apply_auto(sigma, c) for c in self.coeffs))


@dataclass
class OrbitRecord:
    points: List[CycElem]
    bits: List[int] = field(default_factory=list)
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "bits": self.bits,
            "truncated": self.truncated,
        }


def iterate(f: CycPoly, a: CycElem, n_max: int, size_budget_bits: int = DEFAULT_SIZE_BUDGET_BITS) -> OrbitRecord:
    """Points f^(0)(a) = a, f(a), ..., f^(n_max)(a), stopping early past the size budget."""
    if a.m != f.m:
        raise ModulusMismatch("point and polynomial live in different fields")
    rec = OrbitRecord([a], [a.max_bits()])
    x = a
    for _ in range(n_max):
        x = f(x)
        b = x.max_bits()
        if b > size_budget_bits:
            rec.truncated = True
            break
        rec.points.append(x)
        rec.bits.append(b)
    return rec


def orbit_degree_analysis(record: OrbitRecord, K: SubfieldSpec) -> Tuple[List[int], PeriodCertificate]:
    if len(record.points) < 6:
        raise DetectionError(f"orbit has only {len(record.points)} points; need 6")
    degrees = [degree(x, K) for x in record.points]
    return degrees, detect_virtual_period(degrees)


@dataclass
class DiagonalFixedness:
    pattern: List[bool]
    cert: Optional[PeriodCertificate]
    truncated: bool


def diagonal_fixedness(
    f: CycPoly,
    a: CycElem,
    sigma: GaloisAuto,
    n_max: int,
    size_budget_bits: int = DEFAULT_SIZE_BUDGET_BITS,
) -> DiagonalFixedness:
    """Iterate (x, y) -> (f(x), sigma(f)(y)) from (a, sigma(a)); record x == y at each step."""
    g = f.conjugate(sigma)
    x, y = a, apply_auto(sigma, a)
    pattern = [x == y]
    truncated = False
    for _ in range(n_max):
        x, y = f(x), g(y)
        if max(x.max_bits(), y.max_bits()) > size_budget_bits:
            truncated = True
            break
        pattern.append(x == y)
    try:
        cert = detect_virtual_period(pattern)
    except (DetectionError, ValueError):
        cert = None
    return DiagonalFixedness(pattern, cert, truncated)


def equivariance_holds(f: CycPoly, a: CycElem, sigma: GaloisAuto, record: OrbitRecord) -> bool:
    """sigma(f^(n)(a)) == sigma(f)^(n)(sigma(a)) at every recorded point."""
    g = f.conjugate(sigma)
    y = apply_auto(sigma, a)
    for n, x in enumerate(record.points):
        if n:
            y = g(y)
        if apply_auto(sigma, x) != y:
            return False
    return True
