"""Scrambled witnesses as nested backward intervals along constructed itineraries.

A witness for itinerary ``s`` is found by pulling ``V_{s(D)}`` back through
the branches ``V_{s(D-1)}, ..., V_{s(0)}``.  The pull-back contracts, so it is
numerically stable, but the forward orbit of the representative expands
errors by up to ``max |f'|`` per step.  All arithmetic therefore runs in
:mod:`mpmath` at a precision chosen from the certified derivative bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

from .certify import ExpansionCertificate
from .dynsys import System
from .errors import (
    DepthTooLarge, EmptyPreimage, IncompatibleSchedules, NoMonotonePreimage, ShadowingFailure, TolTooTight,
)
from .intervals import ClosedInterval, locate
from .matrix import find_word_triple
from .numeric import TOL_INV, to_mpf
from .symbolic import (
    ChoiceSequence, ItineraryScheme, Theorem31Scheme, Theorem42Scheme, build_alpha, build_beta_hat_31,
    build_beta_hat_42, build_schedule31, default_choices,
)

MAX_DEPTH = 100_000


def _as_mp(J: ClosedInterval) -> ClosedInterval:
    return ClosedInterval(to_mpf(J.lo), to_mpf(J.hi))


def backward_interval(sys: System, scheme: ItineraryScheme, n0: int | None = None, depth: int = 0,
                      dps: int | None = None, widen=None) -> ClosedInterval:
    """``V_s^{depth, n0}``: the points of ``V_{s(0)}`` whose orbit from time
    ``n0`` follows ``s`` for ``depth`` steps.

    With ``dps=None`` the computation is in double precision and each step is
    widened outward by ``TOL_INV``; otherwise it runs in the current mpmath
    context at ``dps`` digits with a widening of ``10**(4 - dps)``.  Every
    widened interval is clipped back into its phase set.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > MAX_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds {MAX_DEPTH}", depth=depth, limit=MAX_DEPTH)
    n0 = sys.n0 if n0 is None else n0
    if dps is None:
        return _pull_back(sys, scheme, n0, depth, float, TOL_INV if widen is None else widen)
    with mpmath.workdps(dps):
        w = mpmath.mpf(10) ** (4 - dps) if widen is None else to_mpf(widen)
        return _pull_back(sys, scheme, n0, depth, _as_mp, w)


def _pull_back(sys, scheme, n0, depth, cast, widen):
    if cast is float:
        conv = lambda V: ClosedInterval(float(V.lo), float(V.hi))  # noqa: E731
    else:
        conv = cast
    sets = [conv(V) for V in sys.partition]
    J = sets[scheme.symbol_at(depth) - 1]
    for k in range(depth - 1, -1, -1):
        V = sets[scheme.symbol_at(k) - 1]
        try:
            J = sys.inverse_branch(n0 + k, V, J)
        except EmptyPreimage as exc:
            raise EmptyPreimage(f"pull-back emptied at step {k}: {exc}", step=k, time=n0 + k) from None
        if widen:
            J = J.widen(widen).clip(V)
    return J


@dataclass(frozen=True)
class ScrambledPoint:
    """A synthesized witness.  ``value`` is an mpmath number carrying
    ``dps`` significant digits; forward orbits must be run at that
    precision (see :meth:`orbit`)."""

    value: object
    enclosure: ClosedInterval
    itinerary: ItineraryScheme
    depth: int
    choice_bits: str
    dps: int
    n0: int
    route: str
    guard: int = 10

    def orbit(self, sys: System, horizon: int | None = None) -> list:
        horizon = self.depth if horizon is None else horizon
        with mpmath.workdps(self.dps):
            return sys.orbit(self.value, self.n0, horizon)


def _scheme_for(cert: ExpansionCertificate, choices: ChoiceSequence, min_blocks: int):
    A = cert.matrix
    triple = find_word_triple(A, cert.j0)
    if cert.route == "T42":
        scheme, _ = build_beta_hat_42(A, triple, choices)
        return scheme
    alpha = build_alpha(A, cert.j0, cert.k0)
    sched = build_schedule31(cert.lam, cert.mu, cert.k0, cert.diam_j0, triple.m1, triple.m2, min_blocks)
    return build_beta_hat_31(alpha, sched, triple, choices)


def _segment_end(scheme, blocks: int) -> int:
    return scheme.segment_start(blocks + 1)


def contraction_depth(cert: ExpansionCertificate, scheme: ItineraryScheme, tol, start_depth: int = 0) -> int:
    """Smallest depth whose certified contraction bound is at most ``tol``.

    Steps inside ``V_j`` contract by ``1 / lam_j`` when the certified
    per-set constant exceeds 1 and are not counted otherwise.
    """
    budget = math.log(float(cert.max_diameter)) - math.log(float(tol))
    logs = [math.log(float(v)) if v > 1 else 0.0 for v in cert.per_set_lambda]
    acc = 0.0
    d = 0
    while acc < budget or d < start_depth:
        if d > MAX_DEPTH:
            raise DepthTooLarge(f"no depth up to {MAX_DEPTH} reaches tol {tol}", tol=str(tol))
        acc += logs[scheme.symbol_at(d) - 1]
        d += 1
    return d


def _precision(sys: System, scheme, n0: int, depth: int, tol) -> int:
    digits = 0.0
    for k in range(depth):
        V = sys.partition[scheme.symbol_at(k) - 1]
        m = float(sys.max_abs_derivative(n0 + k, V))
        if m > 1:
            digits += math.log10(m)
    return int(math.ceil(digits - math.log10(float(tol)))) + 20


def synthesize(cert: ExpansionCertificate, sys: System, count: int = 8, tol=1e-10,
               choices: Sequence[ChoiceSequence | str] | None = None, *, min_blocks: int = 6,
               guard: int = 10, dps: int | None = None) -> list[ScrambledPoint]:
    """``count`` witnesses for distinct choice sequences.

    The depth is the larger of the certified contraction depth for ``tol``
    and the end of segment ``min_blocks`` plus ``guard``.  Shadowing of the
    itinerary for ``depth - guard`` steps is asserted for every point.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    if not tol > 0:
        raise TolTooTight("tol must be positive", tol=str(tol))
    if tol < 1e-300:
        raise TolTooTight(f"tol = {tol} is below representable resolution", tol=str(tol))
    if choices is None:
        choices = default_choices(count)
    choices = [ChoiceSequence.parse(c) if isinstance(c, str) else c for c in choices]
    if len(choices) != count or len(set(choices)) != count:
        raise ValueError("need `count` pairwise distinct choice sequences")
    n0 = cert.n0
    points = []
    for c in choices:
        scheme = _scheme_for(cert, c, min_blocks)
        depth = max(contraction_depth(cert, scheme, tol), _segment_end(scheme, min_blocks) + guard)
        work = dps or _precision(sys, scheme, n0, depth, tol)
        with mpmath.workdps(work):
            J = backward_interval(sys, scheme, n0, depth, dps=work)
            if J.diameter > tol:
                raise TolTooTight(f"enclosure diameter {mpmath.nstr(J.diameter, 5)} exceeds tol {tol}",
                                  diameter=float(J.diameter), tol=str(tol), depth=depth)
            value = J.midpoint
            p = ScrambledPoint(value, J, scheme, depth, str(c), work, n0, cert.route, guard)
            _assert_shadowing(sys, p)
        points.append(p)
    for a in range(count):
        for b in range(a + 1, count):
            if points[a].enclosure.intersect(points[b].enclosure) is not None:
                raise ShadowingFailure(f"enclosures of points {a} and {b} overlap", pair=(a, b))
    return points


def _assert_shadowing(sys: System, p: ScrambledPoint) -> None:
    orb = p.orbit(sys, p.depth - p.guard)
    for k, x in enumerate(orb):
        s = p.itinerary.symbol_at(k)
        if not sys.partition[s - 1].contains(x):
            raise ShadowingFailure(f"orbit of {p.choice_bits} left V_{s} at step {k} (x = {mpmath.nstr(x, 12)})",
                                   step=k, expected=s, found=locate(x, sys.partition))


# -- predicted times -----------------------------------------------------------

def _compatible(a: ScrambledPoint, b: ScrambledPoint) -> None:
    sa, sb = a.itinerary, b.itinerary
    if a.route != b.route or type(sa) is not type(sb) or sa.triple != sb.triple or a.n0 != b.n0:
        raise IncompatibleSchedules("points come from different routes or word triples")
    if isinstance(sa, Theorem31Scheme):
        x, y = sa.schedule, sb.schedule
        if (x.lam, x.mu, x.k0, x.diam_j0) != (y.lam, y.mu, y.k0, y.diam_j0):
            raise IncompatibleSchedules("points use different block schedules")


def close_windows(scheme: ItineraryScheme, upto: int) -> list[tuple[int, int]]:
    """``(start, length)`` of the shared contracting stretches that fit before
    ``upto``: runs ``j0^n`` at ``k_n`` or alpha blocks at ``h_{j-1}``."""
    out = []
    seg = 1
    while (s := scheme.segment_start(seg)) < upto:
        length = scheme._head_length(seg)
        if s + length <= upto:
            out.append((s, length))
        seg += 1
    return out


def predicted_times(a: ScrambledPoint, b: ScrambledPoint, upto: int | None = None,
                    anchor: str = "start") -> tuple[list[int], list[int]]:
    """``(close_times, far_times)`` below ``upto`` (default: the shadowed depth).

    Close times are where both orbits enter a shared contracting stretch
    (``anchor="start"``) or where that stretch ends (``anchor="end"``).  Far
    times are the indices where the two itineraries differ; the orbits then
    lie in different phase sets.
    """
    _compatible(a, b)
    if upto is None:
        upto = min(a.depth, b.depth) - max(a.guard, b.guard)
    windows = close_windows(a.itinerary, upto)
    if anchor == "start":
        close = [s for s, _ in windows]
    elif anchor == "end":
        close = [s + length - 1 for s, length in windows]
    else:
        raise ValueError("anchor must be 'start' or 'end'")
    far = [n for n in range(upto) if a.itinerary.symbol_at(n) != b.itinerary.symbol_at(n)]
    return close, far


def close_bounds(cert: ExpansionCertificate, scheme: ItineraryScheme, upto: int) -> list:
    """Certified distance bound at each start-anchored close time."""
    out = []
    for seg, _ in enumerate(close_windows(scheme, upto), start=1):
        if isinstance(scheme, Theorem42Scheme):
            out.append(cert.max_diameter / cert.lam ** (seg - 1))
        else:
            out.append(scheme.close_bound(seg))
    return out


# -- lifting to time zero ------------------------------------------------------

VALID_FROM_N0 = "valid-from-n0"


def lift_to_time_zero(sys: System, point: ScrambledPoint, n0: int | None = None):
    """An ``x_0`` whose orbit reaches ``point.enclosure`` at time ``n0``.

    Each prefix map is inverted on the first monotone lap whose image holds
    the current target.  Families without lap information give the status
    string ``VALID_FROM_N0``.
    """
    n0 = point.n0 if n0 is None else n0
    if n0 == 0:
        return point.value
    fam = sys.family
    with mpmath.workdps(point.dps):
        T = point.enclosure
        for n in range(n0 - 1, -1, -1):
            laps = fam.laps(sys.param(n)) if hasattr(sys, "params") else None
            if laps is None:
                return VALID_FROM_N0
            limit = sys.domain(n)
            if n == 0 and sys.initial_domain is not None:
                limit = sys.initial_domain
            for lap in laps:
                B = lap if limit is None else lap.intersect(limit)
                if B is None:
                    continue
                B = _as_mp(B)
                img = sys.image_interval(n, B)
                if img.contains_interval(T):
                    T = sys.inverse_branch(n, B, T)
                    break
            else:
                raise NoMonotonePreimage(f"target {T} at time {n + 1} has no preimage on a single monotone lap",
                                         time=n + 1)
        return T.midpoint
