"""Families of interval maps ``x -> f(p, x)`` with one time-varying parameter.

A family answers, for a parameter value ``p`` and an interval ``J``: point
values, whether ``f(p, .)`` is strictly monotone on ``J``, the exact image,
exact bounds of ``|f'|`` on ``J`` and an inverse-branch solver.

The *tail oracle* (`guaranteed_image`, `min_abs_derivative_over`, ...)
answers the same questions uniformly over a whole parameter range, which is
how conditions "for all n >= n0" are decided from finitely many checks.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from scipy.optimize import brentq

from .errors import ConfigError, NotMonotone, TailNotAnalyzable
from .intervals import ClosedInterval
from .numeric import TOL_INV, coerce, is_mp, sign, sqrt, working


@dataclass(frozen=True)
class ParamRange:
    """Closed parameter range; either end may be infinite."""

    lo: object
    hi: object

    @classmethod
    def point(cls, p) -> "ParamRange":
        return cls(p, p)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def inf_abs(self):
        if self.lo <= 0 <= self.hi:
            return 0
        return min(abs(self.lo), abs(self.hi))

    def sup_abs(self):
        return max(abs(self.lo), abs(self.hi))

    def __str__(self) -> str:
        return f"{self.lo}" if self.is_point else f"[{self.lo}, {self.hi}]"


def _probe(J: ClosedInterval):
    if J.bounded:
        return J.midpoint
    if not math.isinf(J.lo):
        return J.lo + 1
    if not math.isinf(J.hi):
        return J.hi - 1
    return 0


def _sup_affine(slope, intercept, prange: ParamRange):
    """sup of ``slope * p + intercept`` over the range."""
    if slope == 0:
        return intercept
    end = prange.hi if slope > 0 else prange.lo
    if math.isinf(end):
        return math.inf
    return slope * end + intercept


def _inf_affine(slope, intercept, prange: ParamRange):
    if slope == 0:
        return intercept
    end = prange.lo if slope > 0 else prange.hi
    if math.isinf(end):
        return -math.inf
    return slope * end + intercept


class MapFamily(ABC):
    """Interface every map family implements."""

    tag: str = "user-plugin"

    @abstractmethod
    def value(self, p, x): ...

    @abstractmethod
    def derivative(self, p, x): ...

    @abstractmethod
    def monotone_direction(self, p, J: ClosedInterval) -> int:
        """+1 increasing, -1 decreasing, 0 when not strictly monotone on J."""

    @abstractmethod
    def abs_derivative_bounds(self, p, J: ClosedInterval) -> tuple:
        """Exact (min, max) of ``|f'(p, x)|`` over ``x`` in J."""

    def laps(self, p) -> list[ClosedInterval] | None:
        """Maximal intervals of monotonicity, or None when unknown."""
        return None

    def image(self, p, J: ClosedInterval) -> ClosedInterval:
        d = self.monotone_direction(p, J)
        if d == 0:
            raise NotMonotone(f"{self.tag} map with p={p} is not monotone on {J}", interval=str(J), parameter=str(p))
        a, b = self.value(p, J.lo), self.value(p, J.hi)
        return ClosedInterval(a, b) if d > 0 else ClosedInterval(b, a)

    def preimage(self, p, J: ClosedInterval, y):
        """The ``x`` in J with ``f(p, x) = y``; J must be a monotone branch
        whose image contains ``y``.  Generic bracketing solver."""
        lo, hi = working(J.lo), working(J.hi)
        y = coerce(y, lo)
        p = coerce(p, lo)

        def g(x):
            return self.value(p, x) - y

        if is_mp(lo):
            return mpmath.findroot(g, (lo, hi), solver="anderson")
        return brentq(g, lo, hi, xtol=TOL_INV, rtol=4 * 2.0 ** -52)

    # -- tail oracle --------------------------------------------------------

    def monotone_over(self, prange: ParamRange, J: ClosedInterval) -> int:
        if prange.is_point:
            return self.monotone_direction(prange.lo, J)
        raise TailNotAnalyzable(f"family {self.tag!r} has no oracle for parameter ranges")

    def guaranteed_image(self, prange: ParamRange, J: ClosedInterval) -> ClosedInterval | None:
        """An interval contained in ``f(p, J)`` for every ``p`` in the range
        (None when that intersection is empty)."""
        if prange.is_point:
            return self.image(prange.lo, J)
        raise TailNotAnalyzable(f"family {self.tag!r} has no oracle for parameter ranges")

    def min_abs_derivative_over(self, prange: ParamRange, J: ClosedInterval):
        if prange.is_point:
            return self.abs_derivative_bounds(prange.lo, J)[0]
        raise TailNotAnalyzable(f"family {self.tag!r} has no oracle for parameter ranges")

    def max_abs_derivative_over(self, prange: ParamRange, J: ClosedInterval):
        if prange.is_point:
            return self.abs_derivative_bounds(prange.lo, J)[1]
        raise TailNotAnalyzable(f"family {self.tag!r} has no oracle for parameter ranges")

    def to_dict(self) -> dict:
        return {"tag": self.tag}


class LinearParamFamily(MapFamily):
    """Maps of the form ``f(p, x) = p * g(x) + c`` with ``g`` piecewise monotone.

    Image endpoints are affine in ``p``, so the worst case over a parameter
    range sits at a range end (or at infinity), which makes the tail oracle
    exact.
    """

    turning_points: tuple = ()
    offset = 0

    @abstractmethod
    def g(self, x): ...

    @abstractmethod
    def dg(self, x): ...

    @abstractmethod
    def dg_abs_bounds(self, J: ClosedInterval) -> tuple: ...

    def value(self, p, x):
        p = coerce(p, x)
        return p * self.g(x) + coerce(self.offset, x)

    def derivative(self, p, x):
        return coerce(p, x) * self.dg(x)

    def _g_direction(self, J: ClosedInterval) -> int:
        if any(J.interior_contains(t) for t in self.turning_points):
            return 0
        return sign(self.dg(_probe(J)))

    def monotone_direction(self, p, J):
        return sign(p) * self._g_direction(J)

    def abs_derivative_bounds(self, p, J):
        lo, hi = self.dg_abs_bounds(J)
        return abs(p) * lo, abs(p) * hi

    def laps(self, p):
        cuts = [-math.inf, *sorted(self.turning_points), math.inf]
        return [ClosedInterval(a, b) for a, b in zip(cuts, cuts[1:])]

    def monotone_over(self, prange, J):
        d = self._g_direction(J)
        if prange.lo <= 0 <= prange.hi:
            return 0
        return sign(prange.lo) * d

    def guaranteed_image(self, prange, J):
        if prange.is_point:
            return self.image(prange.lo, J)
        d = self.monotone_over(prange, J)
        if d == 0:
            raise NotMonotone(f"{self.tag} maps are not monotone on {J} for p in {prange}",
                              interval=str(J), parameter=str(prange))
        x_low, x_high = (J.lo, J.hi) if d > 0 else (J.hi, J.lo)
        lo = _sup_affine(self.g(x_low), self.offset, prange)
        hi = _inf_affine(self.g(x_high), self.offset, prange)
        return ClosedInterval(lo, hi) if lo <= hi else None

    def min_abs_derivative_over(self, prange, J):
        return prange.inf_abs() * self.dg_abs_bounds(J)[0]

    def max_abs_derivative_over(self, prange, J):
        return prange.sup_abs() * self.dg_abs_bounds(J)[1]


def _half(like):
    return coerce(Fraction(1, 2), like)


class LogisticFamily(LinearParamFamily):
    """``f(r, x) = r x (1 - x)``."""

    tag = "logistic"
    turning_points = (Fraction(1, 2),)

    def g(self, x):
        return x * (1 - x)

    def dg(self, x):
        return 1 - 2 * x

    def dg_abs_bounds(self, J):
        ends = (abs(1 - 2 * J.lo), abs(1 - 2 * J.hi))
        low = 0 * ends[0] if J.contains(Fraction(1, 2)) else min(ends)
        return low, max(ends)

    def preimage(self, p, J, y):
        x0 = working(J.lo)
        p, y = coerce(p, x0), coerce(y, x0)
        q = y / p
        disc = 1 - 4 * q
        if disc < 0:
            disc = 0 * disc
        # cancellation-free form of (1 - sqrt(1 - 4q)) / 2
        left = 2 * q / (1 + sqrt(disc))
        if J.hi <= _half(J.hi):
            return left
        return 1 - left


class TentFamily(LinearParamFamily):
    """``f(s, x) = s * min(x, 1 - x)``."""

    tag = "tent"
    turning_points = (Fraction(1, 2),)

    def g(self, x):
        return x if x <= _half(x) else 1 - x

    def dg(self, x):
        return 1 if x < _half(x) else -1

    def dg_abs_bounds(self, J):
        return 1, 1

    def preimage(self, p, J, y):
        x0 = working(J.lo)
        p, y = coerce(p, x0), coerce(y, x0)
        if J.hi <= _half(J.hi):
            return y / p
        return 1 - y / p


class AffineFamily(LinearParamFamily):
    """``f(a, x) = a x + offset`` with a fixed offset."""

    tag = "affine"

    def __init__(self, offset=0):
        self.offset = offset

    def g(self, x):
        return x

    def dg(self, x):
        return 1

    def dg_abs_bounds(self, J):
        return 1, 1

    def preimage(self, p, J, y):
        x0 = working(J.lo)
        p, y = coerce(p, x0), coerce(y, x0)
        return (y - coerce(self.offset, x0)) / p

    def to_dict(self):
        from .numeric import fmt
        return {"tag": self.tag, "offset": fmt(self.offset)}


class CallableFamily(MapFamily):
    """Plugin family assembled from plain callables.

    ``abs_derivative_bounds(p, J)`` must return exact bounds; without a tail
    oracle, parameter ranges that are not single points cannot be certified.
    """

    def __init__(self, value: Callable, derivative: Callable, abs_derivative_bounds: Callable,
                 turning_points: tuple = (), preimage: Callable | None = None, tag: str = "user-plugin"):
        self._value = value
        self._derivative = derivative
        self._bounds = abs_derivative_bounds
        self.turning_points = tuple(turning_points)
        self._preimage = preimage
        self.tag = tag

    def value(self, p, x):
        return self._value(coerce(p, x), x)

    def derivative(self, p, x):
        return self._derivative(coerce(p, x), x)

    def monotone_direction(self, p, J):
        if any(J.interior_contains(t) for t in self.turning_points):
            return 0
        return sign(self.derivative(p, working(_probe(J))))

    def abs_derivative_bounds(self, p, J):
        return self._bounds(p, J)

    def laps(self, p):
        cuts = [-math.inf, *sorted(self.turning_points), math.inf]
        return [ClosedInterval(a, b) for a, b in zip(cuts, cuts[1:])]

    def preimage(self, p, J, y):
        if self._preimage is not None:
            return self._preimage(p, J, y)
        return super().preimage(p, J, y)


FAMILIES = {"logistic": LogisticFamily, "tent": TentFamily, "affine": AffineFamily}


def family_from_spec(spec) -> MapFamily:
    """Build a registered family from ``"logistic"`` or ``{"tag": ..., ...}``."""
    from .numeric import parse_number

    if isinstance(spec, MapFamily):
        return spec
    if isinstance(spec, str):
        spec = {"tag": spec}
    tag = spec.get("tag")
    if tag not in FAMILIES:
        raise ConfigError(f"unknown map family {tag!r}; known: {sorted(FAMILIES)}")
    if tag == "affine":
        return AffineFamily(parse_number(spec.get("offset", 0)))
    return FAMILIES[tag]()
