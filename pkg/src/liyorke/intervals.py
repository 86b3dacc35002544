"""Closed real intervals, the phase sets of the one-dimensional backend."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath

from .numeric import coerce, to_mpf


@dataclass(frozen=True)
class ClosedInterval:
    lo: object
    hi: object

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def real_line(cls) -> "ClosedInterval":
        return cls(-math.inf, math.inf)

    @property
    def diameter(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def _ends(self, x):
        """Endpoints and ``x`` in mutually comparable number kinds (mpmath
        numbers do not compare with Fractions)."""
        vals = (self.lo, self.hi, x)
        if any(isinstance(v, mpmath.mpf) for v in vals):
            return tuple(to_mpf(v) if isinstance(v, Fraction) else v for v in vals)
        return vals

    def contains(self, x, slack=0) -> bool:
        lo, hi, x = self._ends(x)
        if slack:  # arithmetic on mpf rounds to the ambient precision
            lo, hi = lo - slack, hi + slack
        return lo <= x <= hi

    def contains_interval(self, other: "ClosedInterval") -> bool:
        lo, hi, a = self._ends(other.lo)
        _, _, b = self._ends(other.hi)
        return lo <= a and b <= hi

    def interior_contains(self, x) -> bool:
        lo, hi, x = self._ends(x)
        return lo < x < hi

    def intersect(self, other: "ClosedInterval") -> "ClosedInterval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return ClosedInterval(lo, hi) if lo <= hi else None

    def gap(self, other: "ClosedInterval"):
        """Set distance; zero when the intervals touch or overlap."""
        g = max(self.lo - other.hi, other.lo - self.hi)
        return g if g > 0 else 0 * g

    def widen(self, amount) -> "ClosedInterval":
        return ClosedInterval(self.lo - amount, self.hi + amount)

    def clip(self, outer: "ClosedInterval") -> "ClosedInterval":
        lo, hi = max(self.lo, outer.lo), min(self.hi, outer.hi)
        if lo > hi:
            raise ValueError(f"{self} does not meet {outer}")
        return ClosedInterval(lo, hi)

    def astype(self, like) -> "ClosedInterval":
        return ClosedInterval(coerce(self.lo, like), coerce(self.hi, like))

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def hull(intervals: Sequence[ClosedInterval]) -> ClosedInterval:
    return ClosedInterval(min(J.lo for J in intervals), max(J.hi for J in intervals))


def pairwise_gaps(intervals: Sequence[ClosedInterval]) -> dict[tuple[int, int], object]:
    """Gaps between all pairs, keyed by 1-based index pairs."""
    return {
        (i + 1, j + 1): intervals[i].gap(intervals[j])
        for i, j in combinations(range(len(intervals)), 2)
    }


def locate(x, intervals: Sequence[ClosedInterval]) -> int | None:
    """1-based index of the interval containing ``x``, or None."""
    for k, J in enumerate(intervals, start=1):
        if J.contains(x):
            return k
    return None
