"""Exponential sums S_k(f) and Kloosterman sums as exact elements of Q(zeta_p).

Every kernel accumulates a tally ``counts[c] = #{x : Tr(f(x)) = c}`` over the
summation domain using machine integers, and converts it into a
:class:`~degperiod.cyclotomic.CycElem` once at the end.  Three kernels are
available:

``walk``
    one-variable monomials ``c*x^d``: walk ``(g^d)^j`` over the
    multiplicative group, O(q) steps.
``generic``
    any polynomial in n variables: enumerate all q^n points with discrete-log
    tables, so a monomial value needs only an exponent sum.
``convolution`` (Kloosterman only)
    regroups the (q-1)^n exponent tuples by their running sum and counts them
    with cyclic convolutions; exact, and the only way to reach k = 6 at p = 7
    for n = 2 without 10^10 loop iterations.

Kernels split work across ``workers`` threads; partial tallies are merged by
integer addition in a fixed order, so the result does not depend on the
thread count.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .cyclotomic import CycElem, SubfieldSpec, complex_embeddings, degree
from .errors import BudgetExceeded
from .finitefield import (
    DEFAULT_BUDGET,
    FieldTables,
    FqConfig,
    is_prime,
    power_walk_traces,
)

_CHUNK = 1 << 20


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial over F_p as ``(coefficient, exponent vector)`` terms."""

    n: int
    terms: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def __post_init__(self):
        merged: dict = {}
        for c, e in self.terms:
            e = tuple(int(x) for x in e)
            if len(e) != self.n:
                raise ValueError(f"exponent vector {e} does not have {self.n} entries")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            merged[e] = merged.get(e, 0) + int(c)
        terms = tuple((c, e) for e, c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def monomial(cls, d: int, c: int = 1) -> "MultiPoly":
        return cls(1, ((c, (d,)),))

    @classmethod
    def zero(cls, n: int = 1) -> "MultiPoly":
        return cls(n, ())

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        """Parse ``"c:e1,...,en"`` terms separated by ``;``, ``+`` or whitespace.

        >>> MultiPoly.parse("1:3").terms
        ((1, (3,)),)
        >>> MultiPoly.parse("1:1,1; 2:0,2").n
        2
        """
        raw = [t for t in re.split(r"[;+\s]+", text.strip()) if t]
        if not raw:
            raise ValueError("empty polynomial")
        terms = []
        n = None
        for t in raw:
            if ":" not in t:
                raise ValueError(f"term {t!r} is not of the form c:e1,...,en")
            c, es = t.split(":", 1)
            exps = tuple(int(x) for x in es.split(",") if x != "")
            if n is None:
                n = len(exps)
            elif len(exps) != n:
                raise ValueError("terms disagree on the number of variables")
            terms.append((int(c), exps))
        return cls(n, tuple(terms))

    def reduced(self, p: int) -> "MultiPoly":
        return MultiPoly(self.n, tuple((c % p, e) for c, e in self.terms))

    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [[c, list(e)] for c, e in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "MultiPoly":
        return cls(int(obj["n"]), tuple((int(c), tuple(e)) for c, e in obj["terms"]))

    def __str__(self):
        return "; ".join(f"{c}:{','.join(map(str, e))}" for c, e in self.terms) or "0"


def _split(total: int, workers: int) -> List[Tuple[int, int]]:
    chunk = min(_CHUNK, max(1, -(-total // max(workers, 1))))
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def _run_chunks(fn: Callable[[int, int], np.ndarray], total: int, p: int, workers: int) -> np.ndarray:
    ranges = _split(total, workers)
    counts = np.zeros(p, dtype=np.int64)
    if workers <= 1 or len(ranges) == 1:
        for s, e in ranges:
            counts += fn(s, e)
        return counts
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(lambda r: fn(*r), ranges):
            counts += part
    return counts


def _check_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def tally_to_elem(counts: Sequence[int], p: int) -> CycElem:
    return CycElem.from_exponent_counts(p, [int(c) for c in counts])


def exp_sum_tally(
    f: MultiPoly,
    p: int,
    k: int,
    *,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    modulus: Optional[Sequence[int]] = None,
    method: str = "auto",
) -> List[int]:
    """``counts[c] = #{x in F_{p^k}^n : Tr_k(f(x)) = c}``."""
    _check_prime(p)
    config = FqConfig(p, k, tuple(modulus) if modulus else ())
    f = f.reduced(p)
    q = config.q
    single = f.n == 1 and len(f.terms) == 1 and f.terms[0][1][0] > 0
    if method == "auto":
        method = "walk" if single else "generic"
    if not f.terms:
        return [q**f.n] + [0] * (p - 1)
    if method == "walk":
        if not single:
            raise ValueError("walk kernel needs a single one-variable monomial c*x^d")
        if q - 1 > budget:
            raise BudgetExceeded(f"walk over {q - 1} group elements exceeds budget {budget}")
        c, (d,) = f.terms[0]
        step = config.primitive_element ** d

        def walk(s, e):
            tr = (c * power_walk_traces(config, step, s, e - s)) % p
            return np.bincount(tr, minlength=p).astype(np.int64)

        counts = [int(c) for c in _run_chunks(walk, q - 1, p, workers)]
        counts[0] += 1  # x = 0
        return counts
    if method != "generic":
        raise ValueError(f"unknown method {method!r}")
    total = q**f.n
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed enumeration budget {budget}")
    tables = FieldTables(config, budget)
    log, tau = tables.log, tables.power_traces
    trace_one = k % p

    def generic(s, e):
        flat = np.arange(s, e, dtype=np.int64)
        logs = []
        for _ in range(f.n):
            flat, idx = np.divmod(flat, q)
            logs.append(log[idx])
        res = np.zeros(e - s, dtype=np.int64)
        for c, exps in f.terms:
            if not any(exps):
                res += c * trace_one
                continue
            mask = np.ones(e - s, dtype=bool)
            E = np.zeros(e - s, dtype=np.int64)
            for v, ev in enumerate(exps):
                if ev:
                    mask &= logs[v] >= 0
                    E += ev * logs[v]
            res += c * np.where(mask, tau[E % (q - 1)], 0)
        return np.bincount(res % p, minlength=p).astype(np.int64)

    return [int(c) for c in _run_chunks(generic, total, p, workers)]


def exp_sum(f: MultiPoly, p: int, k: int, **kwargs) -> CycElem:
    """S_k(f): the sum of zeta_p^Tr(f(x)) over all x in F_{p^k}^n.

    >>> str(exp_sum(MultiPoly.monomial(2), 3, 1))
    '1 + 2*zeta'
    """
    return tally_to_elem(exp_sum_tally(f, p, k, **kwargs), p)


def exp_sums(f: MultiPoly, p: int, k_max: int, **kwargs) -> List[CycElem]:
    return [exp_sum(f, p, k, **kwargs) for k in range(1, k_max + 1)]


# -- Kloosterman sums -------------------------------------------------------------


def _log_of_prime_field_elem(config: FqConfig, a: int) -> int:
    """Discrete log of a in F_p^* inside F_{p^k}^*, base the primitive element."""
    q, p = config.q, config.p
    step = (q - 1) // (p - 1)
    h = config.primitive_element ** step
    cur = config.one()
    target = config.elem([a])
    for i in range(p - 1):
        if cur == target:
            return i * step
        cur = cur * h
    raise AssertionError("a is not in F_p^*")


def kloosterman_tally(
    n: int,
    a: int,
    p: int,
    k: int,
    *,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    modulus: Optional[Sequence[int]] = None,
    method: str = "auto",
) -> List[int]:
    _check_prime(p)
    if a % p == 0:
        raise ValueError("Kloosterman parameter a must be nonzero mod p")
    if n < 1:
        raise ValueError("n must be positive")
    config = FqConfig(p, k, tuple(modulus) if modulus else ())
    q1 = config.q - 1
    direct_size = q1**n
    if method == "auto":
        method = "direct" if direct_size <= budget else "convolution"
    if q1 > budget:
        raise BudgetExceeded(f"{q1} group elements exceed budget {budget}")
    g = config.primitive_element
    tau = power_walk_traces(config, g, 0, q1)
    la = _log_of_prime_field_elem(config, a % p)

    if method == "direct":
        if direct_size > budget:
            raise BudgetExceeded(f"{direct_size} tuples exceed enumeration budget {budget}")

        def direct(s, e):
            flat = np.arange(s, e, dtype=np.int64)
            res = np.zeros(e - s, dtype=np.int64)
            jsum = np.zeros(e - s, dtype=np.int64)
            for _ in range(n):
                flat, j = np.divmod(flat, q1)
                res += tau[j]
                jsum += j
            res += tau[(la - jsum) % q1]
            return np.bincount(res % p, minlength=p).astype(np.int64)

        return [int(c) for c in _run_chunks(direct, direct_size, p, workers)]

    if method != "convolution":
        raise ValueError(f"unknown method {method!r}")
    if n * q1 * p > budget:
        raise BudgetExceeded(f"convolution work {n * q1 * p} exceeds budget {budget}")
    # (n-1) * log2(q-1) bounds the bit size of the counts that pass through float64
    if (n - 1) * math.log2(q1) + math.log2(q1) * 1.5 > 50:
        raise BudgetExceeded("tuple counts too large for an exact float convolution")
    # dist[s][u] = #{(j_1..j_i) : sum tau[j] = s mod p, sum j = u mod q-1}
    base = [(tau == s).astype(np.int64) for s in range(p)]
    dist = base
    for _ in range(n - 1):
        fb = [np.fft.rfft(b.astype(np.float64)) for b in base]
        fd = [np.fft.rfft(d.astype(np.float64)) for d in dist]
        new = []
        for s in range(p):
            acc = sum(fd[s1] * fb[(s - s1) % p] for s1 in range(p))
            out = np.fft.irfft(acc, n=q1)
            r = np.rint(out)
            if np.max(np.abs(out - r), initial=0.0) > 0.25:
                raise ArithmeticError("convolution lost exactness")
            new.append(r.astype(np.int64))
        dist = new
    last = tau[(la - np.arange(q1)) % q1]
    counts = np.zeros(p, dtype=np.int64)
    for s in range(p):
        counts += np.bincount((s + last) % p, weights=dist[s], minlength=p).astype(np.int64)
    return [int(c) for c in counts]


def kloosterman_sum(n: int, a: int, p: int, k: int, **kwargs) -> CycElem:
    """Kl_k(n, a) = sum over (F*_{p^k})^n of zeta_p^Tr(x_1+...+x_n + a/(x_1...x_n))."""
    return tally_to_elem(kloosterman_tally(n, a, p, k, **kwargs), p)


# -- degrees and formulas ----------------------------------------------------------


def degree_sequence(f: MultiPoly, p: int, k_max: int, K: Optional[SubfieldSpec] = None, **kwargs) -> List[int]:
    K = K or SubfieldSpec.rationals(p)
    return [degree(s, K) for s in exp_sums(f, p, k_max, **kwargs)]


def gauss_degree_formula(p: int, d: int, k: int) -> int:
    """d / gcd(d, k), valid for f = x^d when p = 1 mod d."""
    if p % d != 1 % d or math.gcd(d, p) != 1:
        raise ValueError(f"formula only holds for p = 1 mod d (p={p}, d={d})")
    return d // math.gcd(d, k)


def kloosterman_degree_formula(p: int, n: int) -> int:
    """(p-1) / gcd(n+1, p-1); the caller must ensure p does not divide k."""
    return (p - 1) // math.gcd(n + 1, p - 1)


def galois_conjugate_from_tally(counts: Sequence[int], t: int, p: int) -> CycElem:
    """The sum with zeta_p replaced by zeta_p^t."""
    shifted = [0] * p
    for c, v in enumerate(counts):
        shifted[(c * t) % p] += int(v)
    return tally_to_elem(shifted, p)


def weil_bound(d: int, p: int, k: int) -> float:
    return (d - 1) * p ** (k / 2)


def weil_bound_holds(s: CycElem, d: int, p: int, k: int, tol: float = 1e-6) -> bool:
    """Every complex embedding of S_k(f) for deg f = d, gcd(d, p) = 1 lies within (d-1) p^(k/2)."""
    bound = mpmath.mpf(d - 1) * mpmath.sqrt(mpmath.mpf(p) ** k)
    return all(abs(v) <= bound + tol for v in complex_embeddings(s, 30))
