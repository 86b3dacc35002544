"""Number handling shared by all modules.

Three number kinds flow through the package:

* ``Fraction`` -- exact values from configs; all certification inequalities
  are decided in exact rational arithmetic when the family allows it.
* ``float`` -- plain simulation and quick exploration.
* ``mpmath.mpf`` -- multiprecision backward intervals and shadowing orbits.
  Expanding maps lose roughly ``log10|f'|`` digits per step, so any orbit
  that must follow an itinerary for more than ~20 steps needs more than
  double precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real

import mpmath

EPS = 1e-12       # slack on strict certified inequalities
TOL_INV = 1e-14   # float pull-back widening


def parse_number(value) -> Fraction | float:
    """Read a config number exactly.

    Strings such as ``"9/2"`` or ``"0.6"`` and JSON decimal literals become
    exact fractions (``0.6`` means 3/5, not the nearest double).  Infinite
    values stay floats.
    """
    if isinstance(value, bool):
        raise TypeError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value):
            return value
        return Fraction(repr(value))
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
        return Fraction(s)
    raise TypeError(f"not a number: {value!r}")


def exact(value) -> Fraction | float:
    """Exact rational image of a finite real (floats are converted bit-exactly)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, mpmath.mpf):
        return _mpf_to_fraction(value)
    if isinstance(value, float) and math.isinf(value):
        return value
    return Fraction(value)


def _mpf_to_fraction(v: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = v._mpf_
    if man == 0:
        return Fraction(0)
    q = Fraction(man) * (Fraction(2) ** exp)
    return -q if sign else q


def to_mpf(value) -> mpmath.mpf:
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def is_mp(x) -> bool:
    return isinstance(x, mpmath.mpf)


def coerce(value, like):
    """Convert ``value`` to the number kind of ``like``.

    ints and Fractions are treated as exact; everything else follows the
    float or mpf kind of ``like``.
    """
    if isinstance(like, mpmath.mpf):
        return to_mpf(value)
    if isinstance(like, float):
        return float(value)
    if isinstance(like, (int, Fraction)):
        if isinstance(value, float) and math.isinf(value):
            return value
        return exact(value)
    return value


def working(x):
    """Number kind used for transcendental steps (sqrt, root finding)."""
    if isinstance(x, mpmath.mpf):
        return x
    return float(x)


def sqrt(x):
    if isinstance(x, mpmath.mpf):
        return mpmath.sqrt(x)
    return math.sqrt(x)


def sign(x: Real) -> int:
    return (x > 0) - (x < 0)


def to_float(x) -> float:
    return float(x)


def fmt(x) -> str:
    """Stable text form used in files: exact fractions stay exact."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, mpmath.mp.dps)
    return repr(float(x))
