"""Certification of strict A-coupled-expansion criteria for time-varying systems.

Routes:

``T31`` / ``T41``
    expansion ``lam > 1`` on ``V_{j0}``, a positive constant ``mu`` on the
    other sets, and ``lam * mu**(k0-1) > 1`` with ``k0`` the minimal return
    time of ``j0``.  In one dimension the phase sets are compact intervals,
    so both labels run the same checks.
``C1``
    ``lam > 1`` uniformly on every set.
``C2``
    the ``T31`` hypotheses with a self-loop ``a_{j0 j0} = 1`` (so ``k0 = 1``).
``T42``
    a self-loop at ``j0`` and ``lam > 1`` on ``V_{j0}`` only.

Every quantity is computed exactly when the system's data are rational.
Strict inequalities need a margin above ``EPS``; set inclusions need a
margin of at least zero (the logistic example covers its sets with margin
exactly 0).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .dynsys import InducedSystem, System, TimeVaryingSystem
from .errors import (
    CoveringFailed, CriterionFailed, InvalidCertificate, MarginalVerdict, NotExpanding, NotMonotone,
    Overlapping, Reducible, RowSumCondition, SelfLoopMissing, TailNotAnalyzable,
)
from .families import ParamRange
from .intervals import ClosedInterval, hull, pairwise_gaps
from .matrix import TransitionMatrix, is_irreducible, minimal_return_time, validate
from .numeric import EPS, fmt, parse_number

log = logging.getLogger(__name__)

ROUTES = ("T31", "T41", "C1", "C2", "T42")


@dataclass(frozen=True)
class Margin:
    name: str
    value: object
    margin: object
    strict: bool

    def to_dict(self):
        return {"name": self.name, "value": fmt(self.value), "margin": fmt(self.margin), "strict": self.strict}


def _judge(name, value, margin, strict, allow_marginal, exc_type, **witness) -> Margin:
    """Accept or reject one inequality; see module docstring for the rule."""
    if strict:
        if margin <= 0:
            raise exc_type(f"{name} = {fmt(value)} fails (margin {fmt(margin)})", value=fmt(value),
                           margin=fmt(margin), **witness)
        if margin <= EPS and not allow_marginal:
            raise MarginalVerdict(f"{name} = {fmt(value)} holds only within slack {EPS}",
                                  check=name, value=fmt(value), margin=fmt(margin))
    else:
        if margin < -EPS:
            raise exc_type(f"{name} fails (margin {fmt(margin)})", margin=fmt(margin), **witness)
        if margin < 0 and not allow_marginal:
            raise MarginalVerdict(f"{name} holds only within slack {EPS}", check=name, margin=fmt(margin))
    return Margin(name, value, margin, strict)


# -- individual checks -----------------------------------------------------------

def check_strictness(partition: Iterable[ClosedInterval]):
    """Smallest pairwise gap ``delta``; raises Overlapping unless it is positive."""
    partition = tuple(partition)
    if len(partition) < 2:
        raise ValueError("strictness needs at least two sets")
    gaps = pairwise_gaps(partition)
    for (i, j), g in gaps.items():
        if g <= 0:
            raise Overlapping(f"V_{i} and V_{j} are not separated (gap {fmt(g)})", pair=(i, j), gap=fmt(g))
    return min(gaps.values())


@dataclass(frozen=True)
class CoveringEntry:
    """One required inclusion ``f(V_i) >= V_j`` for a class of time steps."""

    step: str
    i: int
    j: int
    image: ClosedInterval | None
    margin: object

    @property
    def holds(self) -> bool:
        return self.margin >= 0

    def missing(self, V: ClosedInterval) -> list[ClosedInterval]:
        """Parts of ``V`` not covered by the image."""
        if self.image is None:
            return [V]
        out = []
        if self.image.lo > V.lo:
            out.append(ClosedInterval(V.lo, min(self.image.lo, V.hi)))
        if self.image.hi < V.hi:
            out.append(ClosedInterval(max(self.image.hi, V.lo), V.hi))
        return out


@dataclass(frozen=True)
class CoveringReport:
    entries: tuple[CoveringEntry, ...]

    @property
    def holds(self) -> bool:
        return all(e.holds for e in self.entries)

    @property
    def failures(self) -> list[CoveringEntry]:
        return [e for e in self.entries if not e.holds]

    @property
    def min_margin(self):
        return min(e.margin for e in self.entries)


def _with_tail_fallback(fn, step, J, assume_tail: bool, status: list):
    try:
        return fn(step, J)
    except TailNotAnalyzable:
        if not assume_tail:
            raise
        status[0] = "assumed"
        pointwise = tuple(ParamRange.point(r.lo) for r in step)
        return fn(pointwise, J)


def check_covering(sys: System, A, partition=None, n0: int | None = None, *, assume_tail: bool = False,
                   _status: list | None = None) -> CoveringReport:
    """``f_n(V_i) >= V_j`` for every edge ``a_ij = 1`` and every ``n >= n0``.

    Each step class of ``sys`` is checked once through the guaranteed image
    (the intersection of all images the class can produce).
    """
    A = validate(A)
    partition = tuple(sys.partition if partition is None else partition)
    n0 = sys.n0 if n0 is None else n0
    status = _status if _status is not None else ["analytic"]
    entries = []
    for label, step in sys.step_classes(n0):
        for i, Vi in enumerate(partition, start=1):
            if not _with_tail_fallback(sys.monotone_over, step, Vi, assume_tail, status):
                raise NotMonotone(f"f is not monotone on V_{i} = {Vi} for {label}", step=label, i=i)
            img = _with_tail_fallback(sys.guaranteed_image, step, Vi, assume_tail, status)
            for j in A.successors(i):
                Vj = partition[j - 1]
                if img is None:
                    margin = -math.inf
                else:
                    margin = min(Vj.lo - img.lo, img.hi - Vj.hi)
                entries.append(CoveringEntry(label, i, j, img, margin))
    return CoveringReport(tuple(entries))


def _per_set_lambda(sys: System, partition, n0, assume_tail, status) -> list:
    out = []
    for V in partition:
        vals = [_with_tail_fallback(sys.guaranteed_min_abs_derivative, step, V, assume_tail, status)
                for _, step in sys.step_classes(n0)]
        out.append(min(vals))
    return out


def check_expansion(sys: System, partition=None, j0: int = 1, route: str = "T31", n0: int | None = None, *,
                    assume_tail: bool = False, _status: list | None = None):
    """``(lam, mu)``: infima over ``n >= n0`` of ``min |f_n'|`` on ``V_{j0}``
    and on the remaining sets (``mu`` is None for T42; for C1 ``lam`` is the
    infimum over all sets).  Raises NotExpanding unless ``lam > 1``."""
    partition = tuple(sys.partition if partition is None else partition)
    n0 = sys.n0 if n0 is None else n0
    status = _status if _status is not None else ["analytic"]
    per_set = _per_set_lambda(sys, partition, n0, assume_tail, status)
    others = [v for j, v in enumerate(per_set, start=1) if j != j0]
    worst = min(range(1, len(per_set) + 1), key=lambda j: per_set[j - 1]) if route == "C1" else j0
    lam = per_set[worst - 1]
    mu = None if route == "T42" else min(others)
    if lam - 1 <= 0:
        raise NotExpanding(f"lambda = {fmt(lam)} on V_{worst} does not exceed 1", j0=j0, set=worst, lam=fmt(lam))
    return lam, mu


def check_initial_covering(sys: System, n0: int | None = None, D0: ClosedInterval | None = None) -> str:
    """'verified', 'failed' or 'assumed' for ``f_{n0-1} o .. o f_0 (D0) >= union V_j``."""
    n0 = sys.n0 if n0 is None else n0
    if D0 is None:
        D0 = sys.initial_domain or ClosedInterval.real_line()
    union = hull(sys.partition)
    if n0 == 0:
        ok = all(D0.contains_interval(V) for V in sys.partition)
        return "verified" if ok else "failed"
    J = D0
    for n in range(n0):
        try:
            J = sys.image_interval(n, J)
        except NotMonotone:
            log.warning("initial covering could not be propagated at n=%d; assuming it holds", n)
            return "assumed"
    ok = all(J.contains_interval(V) for V in sys.partition)
    return "verified" if ok else "failed"


# -- certificate -----------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionCertificate:
    route: str
    matrix: TransitionMatrix
    j0: int
    k0: int
    lam: object
    mu: object
    delta: object
    diameters: tuple
    n0: int
    initial_covering_status: str
    tail_status: str
    margins: tuple[Margin, ...]
    per_set_lambda: tuple = ()
    _token: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._token is not _TOKEN:
            raise InvalidCertificate("certificates are only issued by certify()")

    @property
    def mu0(self):
        return self.lam if self.mu is None else min(self.lam, self.mu)

    @property
    def diam_j0(self):
        return self.diameters[self.j0 - 1]

    @property
    def max_diameter(self):
        return max(self.diameters)

    @property
    def rate(self):
        """Per-``k0`` contraction base ``lam * mu**(k0-1)``."""
        if self.mu is None or self.k0 == 1:
            return self.lam
        return self.lam * self.mu ** (self.k0 - 1)

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "matrix": self.matrix.to_lists(),
            "j0": self.j0,
            "k0": self.k0,
            "lambda": fmt(self.lam),
            "mu": None if self.mu is None else fmt(self.mu),
            "mu0": fmt(self.mu0),
            "delta": fmt(self.delta),
            "diam_j0": fmt(self.diam_j0),
            "diameters": [fmt(d) for d in self.diameters],
            "per_set_lambda": [fmt(v) for v in self.per_set_lambda],
            "n0": self.n0,
            "initial_covering_status": self.initial_covering_status,
            "tail_status": self.tail_status,
            "margins": [m.to_dict() for m in self.margins],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


_TOKEN = object()


def _choose_j0(route, A, per_set) -> int:
    candidates = [j for j in A.symbols if route not in ("C2", "T42") or A.edge(j, j)]
    if not candidates:
        raise SelfLoopMissing(f"route {route} needs a symbol with a self-loop; A has none")
    return max(candidates, key=lambda j: (per_set[j - 1], -j))


def certify(sys: System, A, route: str = "T42", j0: int | None = None, D0: ClosedInterval | None = None, *,
            allow_marginal: bool = False, assume_tail: bool = False) -> ExpansionCertificate:
    """Check every hypothesis of ``route`` and return a certificate, or raise
    the first failing hypothesis with a structured witness."""
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; choose from {ROUTES}")
    A = validate(A)
    if A.n != sys.N:
        raise ValueError(f"matrix is {A.n}x{A.n} but the partition has {sys.N} sets")
    sums = [A.row_sum(i) for i in A.symbols]
    if max(sums) < 2:
        raise RowSumCondition("no row of A has sum >= 2", row_sums=sums)
    if not is_irreducible(A):
        raise Reducible("transition matrix is not irreducible")

    partition = sys.partition
    n0 = sys.n0
    margins: list[Margin] = []
    delta = check_strictness(partition)
    margins.append(Margin("delta", delta, delta, True))

    status = ["analytic"]
    cov = check_covering(sys, A, partition, n0, assume_tail=assume_tail, _status=status)
    def _witness(e):
        return {"step": e.step, "i": e.i, "j": e.j, "image": None if e.image is None else str(e.image),
                "missing": [str(m) for m in e.missing(partition[e.j - 1])]}

    failed = [e for e in cov.entries if e.margin < -EPS]
    if failed:
        e = failed[0]
        raise CoveringFailed(f"f({e.step})(V_{e.i}) does not contain V_{e.j} (margin {fmt(e.margin)}); "
                             f"{len(failed)} inclusion(s) fail", **_witness(e),
                             failures=[_witness(x) for x in failed])
    for e in cov.entries:
        _judge(f"f({e.step})(V_{e.i}) contains V_{e.j}", e.margin, e.margin, False, allow_marginal,
               CoveringFailed, **_witness(e))
    margins.append(Margin("covering", cov.min_margin, cov.min_margin, False))

    per_set = _per_set_lambda(sys, partition, n0, assume_tail, status)
    if j0 is None:
        j0 = _choose_j0(route, A, per_set)
    if not 1 <= j0 <= A.n:
        raise ValueError(f"j0 = {j0} is not a symbol")
    if route in ("C2", "T42") and not A.edge(j0, j0):
        raise SelfLoopMissing(f"a[{j0},{j0}] = 0", j0=j0)

    lam, mu = check_expansion(sys, partition, j0, route, n0, assume_tail=assume_tail, _status=status)
    margins.append(_judge("lambda - 1", lam, lam - 1, True, allow_marginal, NotExpanding, j0=j0))
    k0 = minimal_return_time(A, j0)
    if route in ("T31", "T41", "C2"):
        margins.append(_judge("mu", mu, mu, True, allow_marginal, NotExpanding, j0=j0))
        rate = lam * mu ** (k0 - 1)
        margins.append(_judge("lambda * mu**(k0-1) - 1", rate, rate - 1, True, allow_marginal,
                              CriterionFailed, k0=k0))
    elif route == "C1":
        margins.append(_judge("mu - 1", mu, mu - 1, True, allow_marginal, NotExpanding, j0=j0))

    initial = check_initial_covering(sys, n0, D0)
    if initial == "failed":
        log.warning("initial covering check failed; the certificate holds from time n0 = %d", n0)

    return ExpansionCertificate(
        route=route, matrix=A, j0=j0, k0=k0, lam=lam, mu=mu, delta=delta,
        diameters=tuple(V.diameter for V in partition), n0=n0,
        initial_covering_status=initial, tail_status=status[0], margins=tuple(margins),
        per_set_lambda=tuple(per_set), _token=_TOKEN,
    )


def certificate_from_dict(data: dict, sys: System, *, allow_marginal: bool = False,
                          assume_tail: bool = False) -> ExpansionCertificate:
    """Re-run :func:`certify` with the recorded route and ``j0`` and check
    that the stored constants agree, so a file on disk can never smuggle in
    unverified claims."""
    try:
        A = validate(data["matrix"])
        cert = certify(sys, A, data["route"], int(data["j0"]), allow_marginal=allow_marginal,
                       assume_tail=assume_tail)
        claimed = {"lambda": data["lambda"], "delta": data["delta"], "k0": data["k0"], "mu": data.get("mu")}
    except KeyError as exc:
        raise InvalidCertificate(f"certificate is missing field {exc}") from None
    got = cert.to_dict()
    for key, value in claimed.items():
        if value is None and got[key] is None:
            continue
        if key == "k0":
            same = int(value) == got[key]
        else:
            same = value is not None and got[key] is not None and parse_number(value) == parse_number(got[key])
        if not same:
            raise InvalidCertificate(f"certificate field {key} = {value} does not match recomputed {got[key]}",
                                     field=key, claimed=value, recomputed=got[key])
    return cert


# -- diagnostic comparison with the two-sided bound ------------------------------

def two_sided_comparison(sys: System, A) -> dict:
    """Compare the classical two-sided hypothesis ``lam <= |f'| <= mu`` on all
    sets with the relaxed routes.  Diagnostic only; never gates certification."""
    A = validate(A)
    lows, highs = [], []
    for V in sys.partition:
        for _, step in sys.step_classes():
            lows.append(sys.guaranteed_min_abs_derivative(step, V))
            highs.append(sys.guaranteed_max_abs_derivative(step, V))
    lam, mu = min(lows), max(highs)
    two_sided = lam > 1 and not math.isinf(mu)
    routes = {}
    for route in ROUTES:
        try:
            certify(sys, A, route)
            routes[route] = "accept"
        except Exception as exc:  # noqa: BLE001 - report any refusal by name
            routes[route] = type(exc).__name__
    return {"lower": fmt(lam), "upper": fmt(mu), "two_sided_holds": two_sided, "routes": routes}
