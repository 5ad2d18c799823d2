"""Eventual-periodicity fitting shared by the zero-set and degree analyses."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple


def preperiod(values: Sequence, r: int) -> int:
    """Smallest N with values[n + r] == values[n] for every checked n >= N."""
    last = -1
    for n in range(len(values) - r):
        if values[n] != values[n + r]:
            last = n
    return last + 1


def fit_eventual_period(values: Sequence, min_periods: int = 2) -> Optional[Tuple[int, int]]:
    """Best ``(N, r)`` such that ``values`` is r-periodic from index N on.

    A fit needs ``min_periods`` full periods after N.  Among the valid fits
    the one with the smallest ``N + r`` wins, ties going to the smaller r:
    ranking by r alone would let any run of equal trailing values pass as
    period 1.  Returns None when nothing fits.
    """
    M = len(values)
    best = None
    for r in range(1, M // min_periods + 1):
        N = preperiod(values, r)
        if M - N < min_periods * r:
            continue
        if best is None or (N + r, r) < (best[0] + best[1], best[1]):
            best = (N, r)
    return best
