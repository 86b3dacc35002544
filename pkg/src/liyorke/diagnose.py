"""Finite-horizon evidence for the scrambled property of synthesized witnesses.

``liminf`` and ``limsup`` cannot be observed on finitely many steps.  What can
be observed is the mechanism behind them: distances at the predicted close
times (shared contracting stretches) and at the predicted far times (orbits
in different phase sets).  A pair whose data match that mechanism gets the
verdict "consistent"; nothing here proves chaos.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import mpmath

from .certify import ExpansionCertificate
from .dynsys import System
from .errors import HorizonTooShort
from .intervals import ClosedInterval, hull, locate
from .numeric import to_mpf
from .scramble import ScrambledPoint, close_bounds, predicted_times
from .symbolic import ChoiceSequence

GAP = None  # marker for "outside every phase set"


def itinerary_of_orbit(orbit: Sequence, partition: Sequence[ClosedInterval]) -> tuple:
    """Symbol of each orbit element, or ``None`` where it is in no set."""
    return tuple(locate(x, partition) for x in orbit)


def boundedness_check(orbit: Sequence, bound) -> bool:
    """True iff every element has absolute value at most ``bound``."""
    for x in orbit:
        b = to_mpf(bound) if isinstance(x, mpmath.mpf) else bound
        try:
            if not abs(x) <= b:
                return False
        except (TypeError, ValueError):
            return False
    return True


def default_bound(partition: Sequence[ClosedInterval]):
    """Twice the largest endpoint magnitude of the phase sets."""
    H = hull(partition)
    return 2 * max(abs(H.lo), abs(H.hi))


@dataclass(frozen=True)
class PairReport:
    ids: tuple[int, int]
    choice_bits: tuple[str, str]
    horizon: int
    min_distance: object
    min_time: int
    max_distance: object
    max_time: int
    close_times: tuple[int, ...]
    close_distances: tuple
    close_bounds: tuple
    far_times: tuple[int, ...]
    far_distances: tuple
    bounded: tuple[bool, bool]
    eps_close: object
    far_threshold: object
    close_decreasing: bool | None
    verdict: str

    def row(self) -> dict:
        """Flat CSV row."""
        f = lambda x: mpmath.nstr(x, 17) if isinstance(x, mpmath.mpf) else str(x)  # noqa: E731
        return {
            "a": self.ids[0], "b": self.ids[1],
            "bits_a": self.choice_bits[0], "bits_b": self.choice_bits[1],
            "horizon": self.horizon,
            "min_distance": f(self.min_distance), "min_time": self.min_time,
            "max_distance": f(self.max_distance), "max_time": self.max_time,
            "best_close": f(min(self.close_distances)) if self.close_distances else "",
            "best_far": f(max(self.far_distances)) if self.far_distances else "",
            "bounded": int(all(self.bounded)),
            "verdict": self.verdict,
        }


def _first_b_difference(a: ScrambledPoint, b: ScrambledPoint) -> int | None:
    return ChoiceSequence.parse(a.choice_bits).first_difference(ChoiceSequence.parse(b.choice_bits))


def pairwise_report(sys: System, points: Sequence[ScrambledPoint], horizon: int | None = None, delta=None,
                    eps_close=None, *, cert: ExpansionCertificate | None = None, tol=None,
                    bound=None) -> list[PairReport]:
    """One report per unordered pair of ``points``.

    Verdict "consistent" requires a distance at most ``eps_close`` at the
    latest predicted close time, a distance of at least ``delta - 2 tol`` at some
    predicted far time (vacuous for equal itineraries), and both orbits
    bounded by ``bound`` over the horizon.
    """
    if delta is None:
        if cert is None:
            raise ValueError("pass delta or a certificate")
        delta = cert.delta
    shadowed = min(p.depth - p.guard for p in points)
    horizon = shadowed if horizon is None else horizon
    if tol is None:
        tol = max(p.enclosure.diameter for p in points)
    if bound is None:
        bound = default_bound(sys.partition)
    dps = max(p.dps for p in points)
    with mpmath.workdps(dps):
        orbits = [_safe_orbit(sys, p, horizon) for p in points]
        reports = []
        for (ia, a), (ib, b) in combinations(enumerate(points), 2):
            reports.append(_pair(sys, ia, a, ib, b, orbits[ia], orbits[ib], horizon, shadowed, delta,
                                 eps_close, cert, tol, bound))
    return reports


def _safe_orbit(sys, p: ScrambledPoint, horizon: int) -> list:
    out = [p.value]
    x = p.value
    for n in range(p.n0, p.n0 + horizon):
        try:
            x = sys.evaluate(n, x)
        except (OverflowError, ValueError):
            x = mpmath.inf
        out.append(x)
    return out


def _pair(sys, ia, a, ib, b, oa, ob, horizon, shadowed, delta, eps_close, cert, tol, bound) -> PairReport:
    upto = min(horizon, shadowed)
    close_all, far_all = predicted_times(a, b, upto=shadowed)
    close, far = predicted_times(a, b, upto=upto)
    need = []
    if len(close_all) >= 2 and len(close) < 2:
        need.append(close_all[1] + 1)
    if len(far_all) >= 2 and len(far) < 2:
        need.append(far_all[1] + 1)
    if len(close_all) < 2 or (a.choice_bits != b.choice_bits and len(far_all) < 2):
        raise HorizonTooShort(f"synthesis depth {shadowed} covers fewer than two close/far times for pair "
                              f"({ia}, {ib}); synthesize with more blocks", pair=(ia, ib), depth=shadowed)
    if need:
        raise HorizonTooShort(f"horizon {horizon} is too short for pair ({ia}, {ib}); need at least {max(need)}",
                              pair=(ia, ib), required=max(need))

    dist = [abs(x - y) for x, y in zip(oa, ob)]
    finite = [(d, t) for t, d in enumerate(dist) if mpmath.isfinite(d)]
    dmin, tmin = min(finite, key=lambda e: (e[0], e[1])) if finite else (mpmath.inf, 0)
    dmax, tmax = max(finite, key=lambda e: (e[0], -e[1])) if finite else (mpmath.inf, 0)
    cd = tuple(dist[t] for t in close)
    fd = tuple(dist[t] for t in far)

    cb: tuple = ()
    if cert is not None:
        cb = tuple(close_bounds(cert, a.itinerary, upto))
    if eps_close is None:
        if len(cb) < 2:
            raise ValueError("eps_close needs a certificate or an explicit value")
        eps_close = cb[1] / 2
    eps_close = to_mpf(eps_close)
    threshold = to_mpf(delta) - 2 * to_mpf(tol)

    s = _first_b_difference(a, b)
    decreasing = None
    if s is not None:
        tail = [d for n, d in enumerate(cd, start=1) if n >= s + 1]
        decreasing = all(x > y for x, y in zip(tail, tail[1:])) if len(tail) >= 2 else None

    bounded = (boundedness_check(oa, bound), boundedness_check(ob, bound))
    # the latest close time carries the information about liminf
    near = bool(cd) and cd[-1] <= eps_close
    apart = (not far) or any(d >= threshold for d in fd)
    verdict = "consistent" if near and apart and all(bounded) else "violated"
    return PairReport((ia, ib), (a.choice_bits, b.choice_bits), horizon, dmin, tmin, dmax, tmax,
                      tuple(close), cd, cb, tuple(far), fd, bounded, eps_close, threshold, decreasing, verdict)


def summary(reports: Sequence[PairReport]) -> dict:
    counts = {"consistent": 0, "violated": 0}
    for r in reports:
        counts[r.verdict] += 1
    counts["pairs"] = len(reports)
    counts["label"] = ("consistent with delta-scrambled" if counts["violated"] == 0
                       else "not consistent with delta-scrambled")
    return counts
