"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Elements are stored in the power basis ``1, z, ..., z^(phi(m)-1)`` with one
``Fraction`` per coordinate.  The Galois group is ``(Z/m)^*`` acting by
``z -> z^t``; subfields are described by the subgroup of ``(Z/m)^*`` fixing
them (:class:`SubfieldSpec`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath

from . import poly
from .errors import ModulusMismatch


@lru_cache(maxsize=None)
def _cyclotomic_int(m: int) -> Tuple[int, ...]:
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            q, r = divmod_poly_int(num, list(_cyclotomic_int(d)))
            assert not any(r)
            num = q
    return tuple(num)


def divmod_poly_int(a: Sequence[int], b: Sequence[int]) -> Tuple[List[int], List[int]]:
    # exact division by a monic integer polynomial
    r = list(a)
    db = len(b) - 1
    q = [0] * max(len(r) - db, 1)
    for shift in range(len(r) - 1 - db, -1, -1):
        c = r[shift + db]
        if c:
            q[shift] = c
            for i, y in enumerate(b):
                r[shift + i] -= c * y
    return q, r[:db]


def cyclotomic_polynomial(m: int) -> List[int]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first.

    >>> cyclotomic_polynomial(12)
    [1, 0, -1, 0, 1]
    """
    return list(_cyclotomic_int(m))


def euler_phi(m: int) -> int:
    return len(_cyclotomic_int(m)) - 1


@lru_cache(maxsize=None)
def units(m: int) -> Tuple[int, ...]:
    if m == 1:
        return (1,)
    return tuple(t for t in range(1, m) if math.gcd(t, m) == 1)


@lru_cache(maxsize=None)
def _power_table(m: int) -> Tuple[Tuple[int, ...], ...]:
    """``z^e`` in the power basis for ``0 <= e < max(m, 2*phi(m))``."""
    phi = euler_phi(m)
    phi_m = _cyclotomic_int(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(max(m, 2 * phi)):
        rows.append(tuple(cur))
        # multiply by z, then reduce z^phi = -(phi_m[0] + ... )
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * phi_m[i]
    return tuple(rows)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class CycElem:
    """Immutable element of Q(zeta_m)."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Iterable = ()):
        phi = euler_phi(m)
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > phi:
            cs = _reduce(m, cs)
        cs = cs + [Fraction(0)] * (phi - len(cs))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycElem is immutable")

    @classmethod
    def rational(cls, m: int, q) -> "CycElem":
        return cls(m, [q])

    @classmethod
    def zeta(cls, m: int, e: int = 1) -> "CycElem":
        return cls(m, _power_table(m)[e % m])

    @classmethod
    def from_exponent_counts(cls, m: int, counts: Sequence[int]) -> "CycElem":
        """``sum counts[e] * zeta^e`` for ``0 <= e < len(counts)``."""
        table = _power_table(m)
        acc = [0] * euler_phi(m)
        for e, c in enumerate(counts):
            if c:
                row = table[e % m]
                for i, v in enumerate(row):
                    if v:
                        acc[i] += c * v
        return cls(m, acc)

    # -- basic predicates -------------------------------------------------

    @property
    def phi(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.m != self.m:
                raise ModulusMismatch(f"moduli differ: {self.m} vs {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycElem(self.m, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycElem(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycElem(self.m, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.m, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        phi = self.phi
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycElem(self.m, _reduce(self.m, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        if self.is_rational():
            return CycElem(self.m, [1 / self.coeffs[0]])
        phi_m = [Fraction(c) for c in _cyclotomic_int(self.m)]
        g, s, _ = poly.xgcd(poly.trim(list(self.coeffs)), phi_m)
        # Phi_m irreducible, so g == 1 and s * self == 1 mod Phi_m
        assert g == [1], g
        return CycElem(self.m, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycElem(self.m, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycElem(self.m, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.coeffs[0]) if self.is_rational() else hash((self.m, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycElem({self.m}, {self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            mono = "zeta" if i == 1 else f"zeta^{i}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def max_bits(self) -> int:
        """Largest bit length over all numerators and denominators."""
        return max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in self.coeffs)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycElem":
        m = int(obj["m"])
        coeffs = [Fraction(int(n), int(d)) for n, d in obj["coeffs"]]
        if len(coeffs) != euler_phi(m):
            raise ValueError(f"expected {euler_phi(m)} coordinates for m={m}, got {len(coeffs)}")
        return cls(m, coeffs)


def _reduce(m: int, prod: Sequence[Fraction]) -> List[Fraction]:
    phi = euler_phi(m)
    if len(prod) <= phi:
        return list(prod)
    table = _power_table(m)
    out = list(prod[:phi])
    for e in range(phi, len(prod)):
        c = prod[e]
        if c:
            row = table[e] if e < len(table) else _power_table_row(m, e)
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return out


def _power_table_row(m: int, e: int) -> Tuple[int, ...]:
    return _power_table(m)[e % m]


def zero(m: int) -> CycElem:
    return CycElem(m, [])


def one(m: int) -> CycElem:
    return CycElem(m, [1])


def arith(a: CycElem, b: CycElem, op: str) -> CycElem:
    if a.m != b.m:
        raise ModulusMismatch(f"moduli differ: {a.m} vs {b.m}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def inverse(a: CycElem) -> CycElem:
    return a.inverse()


# -- Galois action ---------------------------------------------------------


@dataclass(frozen=True)
class GaloisAuto:
    """The automorphism ``zeta_m -> zeta_m^t``."""

    m: int
    t: int

    def __post_init__(self):
        if math.gcd(self.t, self.m) != 1:
            raise ValueError(f"t={self.t} is not a unit mod {self.m}")
        object.__setattr__(self, "t", self.t % self.m if self.m > 1 else 1)

    def __call__(self, a: CycElem) -> CycElem:
        return apply_auto(self, a)

    def compose(self, other: "GaloisAuto") -> "GaloisAuto":
        if other.m != self.m:
            raise ModulusMismatch("automorphisms of different fields")
        return GaloisAuto(self.m, self.t * other.t)


def apply_auto(sigma: GaloisAuto, a: CycElem) -> CycElem:
    if sigma.m != a.m:
        raise ModulusMismatch(f"automorphism of Q(zeta_{sigma.m}) applied to element of Q(zeta_{a.m})")
    return _apply_t(sigma.t, a)


def _apply_t(t: int, a: CycElem) -> CycElem:
    if t == 1 or a.is_rational():
        return a
    m = a.m
    table = _power_table(m)
    out = [Fraction(0)] * a.phi
    for j, c in enumerate(a.coeffs):
        if c:
            row = table[(j * t) % m]
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return CycElem(m, out)


@dataclass(frozen=True)
class SubfieldSpec:
    """Subfield K of Q(zeta_m), given by generators of the subgroup H_K fixing it.

    ``generators=None`` means the full group, i.e. K = Q.
    """

    m: int
    generators: Optional[Tuple[int, ...]] = None

    @classmethod
    def rationals(cls, m: int) -> "SubfieldSpec":
        return cls(m, None)

    def group(self) -> Tuple[int, ...]:
        return _subgroup(self.m, self.generators)

    def order(self) -> int:
        return len(self.group())

    def is_rationals(self) -> bool:
        return self.order() == euler_phi(self.m)


@lru_cache(maxsize=None)
def _subgroup(m: int, generators: Optional[Tuple[int, ...]]) -> Tuple[int, ...]:
    if generators is None:
        return units(m)
    if m <= 2:
        return (1,)
    gens = [g % m for g in generators]
    for g in gens:
        if math.gcd(g, m) != 1:
            raise ValueError(f"generator {g} is not a unit mod {m}")
    seen = {1}
    frontier = [1]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % m
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


def _check_compatible(a: CycElem, K: SubfieldSpec):
    if a.m != K.m:
        raise ModulusMismatch(f"element lives in Q(zeta_{a.m}), subfield given in Q(zeta_{K.m})")


def stabilizer(a: CycElem, K: SubfieldSpec) -> List[int]:
    """``{t in H_K : sigma_t(a) == a}``."""
    _check_compatible(a, K)
    if a.is_rational():
        return list(K.group())
    return [t for t in K.group() if _apply_t(t, a) == a]


def degree(a: CycElem, K: SubfieldSpec) -> int:
    """``[K(a) : K]``, the index of the stabilizer in H_K."""
    return K.order() // len(stabilizer(a, K))


def coset_representatives(group: Sequence[int], subgroup: Sequence[int], m: int) -> List[int]:
    sub = set(subgroup)
    reps: List[int] = []
    covered: set = set()
    for g in group:
        if g in covered:
            continue
        reps.append(g)
        covered.update((g * h) % m if m > 1 else 1 for h in sub)
    return reps


def conjugates(a: CycElem, K: SubfieldSpec) -> List[CycElem]:
    """Distinct K-conjugates of ``a``, one per coset of its stabilizer."""
    H = stabilizer(a, K)
    return [_apply_t(t, a) for t in coset_representatives(K.group(), H, a.m)]


def minimal_polynomial(a: CycElem, K: SubfieldSpec) -> List[CycElem]:
    """Monic minimal polynomial of ``a`` over K, coefficients lowest degree first."""
    result: list = [one(a.m)]
    for c in conjugates(a, K):
        result = poly.mul(result, [-c, one(a.m)])
    return result


def characteristic_polynomial(a: CycElem, K: SubfieldSpec) -> List[CycElem]:
    """Product of ``T - sigma(a)`` over all of H_K (a power of the minimal polynomial)."""
    result: list = [one(a.m)]
    for t in K.group():
        result = poly.mul(result, [-_apply_t(t, a), one(a.m)])
    return result


def norm(a: CycElem, K: SubfieldSpec) -> CycElem:
    acc = one(a.m)
    for t in K.group():
        acc = acc * _apply_t(t, a)
    return acc


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_root_of_unity(a: CycElem) -> Optional[int]:
    """Multiplicative order of ``a`` if it is a root of unity, else None."""
    if a.is_zero():
        raise ZeroDivisionError("zero is not a unit")
    if not a.is_integral():
        return None
    w = a.m * (2 if a.m % 2 else 1)
    if a ** w != 1:
        return None
    for e in _divisors(w):
        if a ** e == 1:
            return e
    raise AssertionError("unreachable: a^w == 1 but no divisor order")


def complex_embeddings(a: CycElem, precision: int = 30) -> List[mpmath.mpc]:
    """``a`` evaluated at ``exp(2 pi i t / m)`` for each unit t, ascending t.

    ``precision`` is the working precision in decimal digits.
    """
    with mpmath.workdps(precision):
        out = []
        for t in units(a.m):
            z = mpmath.expjpi(mpmath.mpf(2 * t) / a.m)
            acc = mpmath.mpc(0)
            zp = mpmath.mpc(1)
            for c in a.coeffs:
                if c:
                    acc += mpmath.mpf(c.numerator) / c.denominator * zp
                zp *= z
            out.append(acc)
        return out


def sqrt(d: CycElem) -> Optional[CycElem]:
    """An exact square root of ``d`` in Q(zeta_m), or None if ``d`` is not a square there.

    Candidates come from the complex embeddings (one sign choice per pair of
    complex-conjugate embeddings) solved back into the power basis, rounded
    to the lattice ``(1/den) Z[zeta_m]`` that must contain any root, and
    accepted only after an exact ``y*y == d`` check.
    """
    m = d.m
    if d.is_zero():
        return d
    if d.phi == 1:
        q = d.coeffs[0]
        if q < 0:
            return None
        n, dd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if n * n == q.numerator and dd * dd == q.denominator:
            return CycElem(m, [Fraction(n, dd)])
        return None
    den = math.lcm(*(c.denominator for c in d.coeffs))
    # (den*y)^2 = den^2 d is integral, so den*y lies in Z[zeta_m]
    target = d * (den * den)
    digits = 30 + max(len(str(abs(c.numerator))) for c in target.coeffs)
    ts = units(m)
    pos = {t: i for i, t in enumerate(ts)}
    phi = len(ts)
    with mpmath.workdps(digits):
        vals = complex_embeddings(target, digits)
        roots = [mpmath.sqrt(v) for v in vals]
        zs = [mpmath.expjpi(mpmath.mpf(2 * t) / m) for t in ts]
        V = mpmath.matrix(phi, phi)
        for i in range(phi):
            for j in range(phi):
                V[i, j] = zs[i] ** j
        Vinv = V ** -1
        pairs = sorted({min(t, m - t) for t in ts})
        free = pairs[1:]
        for mask in range(1 << len(free)):
            signs = {pairs[0]: 1}
            for b, t in enumerate(free):
                signs[t] = -1 if (mask >> b) & 1 else 1
            emb = mpmath.matrix(phi, 1)
            for t in ts:
                s = signs[min(t, m - t)]
                r = roots[pos[t]] if t <= m - t else mpmath.conj(roots[pos[m - t]])
                emb[pos[t], 0] = s * r
            coords = Vinv * emb
            ints = []
            ok = True
            for j in range(phi):
                c = coords[j, 0]
                if abs(mpmath.im(c)) > 1e-6:
                    ok = False
                    break
                n = int(mpmath.nint(mpmath.re(c)))
                if abs(mpmath.re(c) - n) > 1e-6:
                    ok = False
                    break
                ints.append(n)
            if not ok:
                continue
            y = CycElem(m, ints)
            if y * y == target:
                return y / den
    return None
