"""The finite field F_{p^k} as F_p[x] / (modulus).

Pure-Python :class:`FqElem` arithmetic is used for setup work (generator
search, trace functional, irreducibility).  The heavy loops over the whole
field are vectorised with numpy in :class:`FieldTables` and the walk helpers:
the multiplicative group is traversed as successive powers of a fixed
element, where multiplication by a constant is an F_p-linear map on
coordinates applied to whole blocks at once.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, ModulusMismatch

DEFAULT_BUDGET = int(os.environ.get("DEGPERIOD_BUDGET", 10**8))

_BLOCK = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> List[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, lists lowest degree first --------------------------


def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    r = [c % p for c in a]
    _trim(r)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(r) - 1 >= df:
        c = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - df
        for i, y in enumerate(f):
            r[shift + i] = (r[shift + i] - c * y) % p
        _trim(r)
    return r


def _pmulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Monic ``f`` of degree k is irreducible iff gcd(x^(p^i) - x, f) = 1 for i <= k/2."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(1, k // 2 + 1):
        # xp <- xp^p mod f
        acc, base, e = [1], xp, p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            e >>= 1
            if e:
                base = _pmulmod(base, base, f, p)
        xp = acc
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


def irreducibles(p: int, k: int) -> Iterator[Tuple[int, ...]]:
    """Monic irreducibles of degree k in lexicographic order of (c_{k-1}, ..., c_0)."""
    for tail in itertools.product(range(p), repeat=k):
        f = tuple(reversed(tail)) + (1,)
        if is_irreducible(f, p):
            yield f


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k, lowest degree first."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be positive")
    return next(irreducibles(p, k))


@dataclass(frozen=True)
class FqConfig:
    """F_{p^k} realised as F_p[x]/(modulus); ``modulus`` lists coefficients low to high."""

    p: int
    k: int
    modulus: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError("k must be positive")
        mod = tuple(int(c) % self.p for c in self.modulus) if self.modulus else find_irreducible(self.p, self.k)
        if len(mod) != self.k + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.k}")
        if not is_irreducible(mod, self.p):
            raise ValueError(f"modulus {list(mod)} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.k

    def elem(self, coeffs: Sequence[int]) -> "FqElem":
        return FqElem(self, coeffs)

    def zero(self) -> "FqElem":
        return FqElem(self, ())

    def one(self) -> "FqElem":
        return FqElem(self, (1,))

    def gen(self) -> "FqElem":
        """The class of x."""
        return FqElem(self, (0, 1)) if self.k > 1 else FqElem(self, (-self.modulus[0],))

    def from_index(self, idx: int) -> "FqElem":
        cs = []
        for _ in range(self.k):
            idx, c = divmod(idx, self.p)
            cs.append(c)
        return FqElem(self, cs)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FqConfig":
        return cls(int(obj["p"]), int(obj["k"]), tuple(int(c) for c in obj.get("modulus") or ()))

    @cached_property
    def trace_vector(self) -> Tuple[int, ...]:
        """Tr(x^i) for the basis monomials; Tr(a) = sum a_i * trace_vector[i] mod p."""
        out = []
        for i in range(self.k):
            b = FqElem(self, [0] * i + [1])
            acc = self.zero()
            cur = b
            for _ in range(self.k):
                acc = acc + cur
                cur = cur ** self.p
            assert all(c == 0 for c in acc.coeffs[1:]), "trace left the prime field"
            out.append(acc.coeffs[0])
        return tuple(out)

    @cached_property
    def primitive_element(self) -> "FqElem":
        """First generator of F_{p^k}^* in index order."""
        n = self.q - 1
        facs = prime_factors(n)
        for idx in range(1, self.q):
            g = self.from_index(idx)
            if all(g ** (n // l) != 1 for l in facs):
                return g
        raise AssertionError("no primitive element found")

    def mult_matrix(self, c: "FqElem") -> np.ndarray:
        """Matrix of ``a -> c*a`` acting on coordinate column vectors."""
        M = np.zeros((self.k, self.k), dtype=np.int64)
        for i in range(self.k):
            col = (c * FqElem(self, [0] * i + [1])).coeffs
            M[:, i] = col
        return M


class FqElem:
    __slots__ = ("config", "coeffs")

    def __init__(self, config: FqConfig, coeffs: Sequence[int]):
        p, k = config.p, config.k
        cs = [int(c) % p for c in coeffs]
        if len(cs) > k:
            cs = _pmod(cs, config.modulus, p)
        cs = cs + [0] * (k - len(cs))
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("FqElem is immutable")

    def _check(self, other) -> "FqElem":
        if isinstance(other, int):
            return FqElem(self.config, [other])
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.config != self.config:
            raise ModulusMismatch("elements of different field models")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        p = self.config.p
        return FqElem(self.config, [(a + b) % p for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        p = self.config.p
        return FqElem(self.config, [(a - b) % p for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self):
        return FqElem(self.config, [-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        cfg = self.config
        return FqElem(cfg, _pmulmod(_trim(list(self.coeffs)), _trim(list(o.coeffs)), cfg.modulus, cfg.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.config.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.config.q - 2)

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = FqElem(self.config, [other])
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.config == other.config and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.config, self.coeffs))

    def __repr__(self):
        return f"FqElem({list(self.coeffs)})"

    def index(self) -> int:
        p = self.config.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def trace(self) -> int:
        cfg = self.config
        return sum(a * t for a, t in zip(self.coeffs, cfg.trace_vector)) % cfg.p

    def frobenius(self) -> "FqElem":
        return self ** self.config.p


def arith(a: FqElem, b: Optional[FqElem], op: str, e: int = 0) -> FqElem:
    if b is not None and a.config != b.config:
        raise ModulusMismatch("elements of different field models")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a**e
    raise ValueError(f"unknown op {op!r}")


def trace(a: FqElem) -> int:
    return a.trace()


def trace_by_definition(a: FqElem) -> int:
    """a + a^p + ... + a^(p^(k-1)), without the precomputed functional."""
    acc = a.config.zero()
    cur = a
    for _ in range(a.config.k):
        acc = acc + cur
        cur = cur.frobenius()
    return acc.coeffs[0]


def enumerate_field(config: FqConfig, budget: int = DEFAULT_BUDGET) -> Iterator[FqElem]:
    """All elements, lexicographic in the coordinate tuple (c_0, ..., c_{k-1})."""
    if config.q > budget:
        raise BudgetExceeded(f"F_{config.p}^{config.k} has {config.q} elements, budget {budget}")
    for cs in itertools.product(range(config.p), repeat=config.k):
        yield FqElem(config, cs)


# -- vectorised walks -----------------------------------------------------------


def _matpow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    k = M.shape[0]
    R = np.eye(k, dtype=np.int64)
    B = M.copy()
    while e:
        if e & 1:
            R = (R @ B) % p
        e >>= 1
        if e:
            B = (B @ B) % p
    return R


def _orbit_block(M: np.ndarray, y0: np.ndarray, length: int, p: int) -> np.ndarray:
    """Columns y0, M y0, ..., M^(length-1) y0 built by doubling."""
    W = y0.reshape(-1, 1) % p
    step = M.copy()
    while W.shape[1] < length:
        W = np.concatenate([W, (step @ W) % p], axis=1)
        step = (step @ step) % p
    return W[:, :length]


def power_walk_coords(config: FqConfig, c: FqElem, start: int, count: int) -> np.ndarray:
    """Coordinates of c^j for start <= j < start+count, shape (count, k)."""
    p = config.p
    M = config.mult_matrix(c)
    y0 = np.array((c**start).coeffs, dtype=np.int64)
    block = min(_BLOCK, max(count, 1))
    W = _orbit_block(M, y0, block, p)
    jump = _matpow(M, block, p)
    out = np.empty((count, config.k), dtype=np.int64)
    cur = np.eye(config.k, dtype=np.int64)
    for off in range(0, count, block):
        n = min(block, count - off)
        out[off:off + n] = ((cur @ W[:, :n]) % p).T
        cur = (jump @ cur) % p
    return out


def power_walk_traces(config: FqConfig, c: FqElem, start: int, count: int) -> np.ndarray:
    """Tr(c^j) for start <= j < start+count, as an int64 array.

    Walks the row vector ``t * M^j`` (t the trace functional) block by block,
    so only a (k x block) matrix is ever materialised.
    """
    p = config.p
    M = config.mult_matrix(c)
    y0 = np.array((c**start).coeffs, dtype=np.int64)
    block = min(_BLOCK, max(count, 1))
    W = _orbit_block(M, y0, block, p)
    jump = _matpow(M, block, p)
    row = np.array(config.trace_vector, dtype=np.int64)
    out = np.empty(count, dtype=np.int64)
    for off in range(0, count, block):
        n = min(block, count - off)
        out[off:off + n] = (row @ W[:, :n]) % p
        row = (row @ jump) % p
    return out


class FieldTables:
    """Discrete log / power-trace tables for a whole field, built once per config.

    ``power_traces[j] = Tr(g^j)`` for the primitive element g, and
    ``log[index(a)] = j`` with ``a = g^j`` (``-1`` at the zero element).
    """

    def __init__(self, config: FqConfig, budget: int = DEFAULT_BUDGET):
        if config.q > budget:
            raise BudgetExceeded(f"field tables for q={config.q} exceed budget {budget}")
        self.config = config
        g = config.primitive_element
        n = config.q - 1
        coords = power_walk_coords(config, g, 0, n)
        weights = np.array([config.p**i for i in range(config.k)], dtype=np.int64)
        idx = coords @ weights
        self.log = np.full(config.q, -1, dtype=np.int64)
        self.log[idx] = np.arange(n, dtype=np.int64)
        tv = np.array(config.trace_vector, dtype=np.int64)
        self.power_traces = (coords @ tv) % config.p

    def log_of(self, a: FqElem) -> int:
        j = int(self.log[a.index()])
        if j < 0:
            raise ZeroDivisionError("log of zero")
        return j
