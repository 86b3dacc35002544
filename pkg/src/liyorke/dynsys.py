"""Time-varying systems ``x[n+1] = f_n(x[n])`` on the real line.

A :class:`TimeVaryingSystem` couples a map family with a parameter sequence
and the phase partition ``V_1..V_N``.  An :class:`InducedSystem` composes the
base maps over blocks ``[k_n, k_{n+1})`` and exposes the same interface, so
certification and synthesis run on either.

Both classes answer "for all n >= n0" questions through `step_classes`,
a finite list of parameter classes covering every time index from ``n0`` on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainViolation, EmptyPreimage, NonIncreasingTimes, NotMonotone, TailNotAnalyzable
from .families import MapFamily, ParamRange, family_from_spec
from .intervals import ClosedInterval
from .numeric import coerce, parse_number

StepClass = tuple[str, tuple[ParamRange, ...]]


@dataclass(frozen=True)
class ParamSequence:
    """``prefix`` followed by a periodic tail or an affine tail ``c0 + c1*n``.

    For the affine tail ``n`` is the absolute time index.
    """

    prefix: tuple = ()
    periodic: tuple | None = None
    affine: tuple | None = None

    def __post_init__(self):
        if (self.periodic is None) == (self.affine is None):
            raise ValueError("exactly one of periodic or affine tail is required")
        if self.periodic is not None and len(self.periodic) == 0:
            raise ValueError("periodic tail must be nonempty")
        if self.affine is not None and len(self.affine) != 2:
            raise ValueError("affine tail is (c0, c1)")
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.periodic is not None:
            object.__setattr__(self, "periodic", tuple(self.periodic))
        else:
            object.__setattr__(self, "affine", tuple(self.affine))

    @classmethod
    def constant(cls, value) -> "ParamSequence":
        return cls(periodic=(value,))

    @classmethod
    def from_spec(cls, spec) -> "ParamSequence":
        if isinstance(spec, (int, float, str, Fraction)):
            return cls.constant(parse_number(spec))
        prefix = tuple(parse_number(v) for v in spec.get("prefix", ()))
        if "constant" in spec:
            return cls(prefix, periodic=(parse_number(spec["constant"]),))
        if "periodic" in spec:
            return cls(prefix, periodic=tuple(parse_number(v) for v in spec["periodic"]))
        if "affine" in spec:
            return cls(prefix, affine=tuple(parse_number(v) for v in spec["affine"]))
        raise ValueError("parameter spec needs 'constant', 'periodic' or 'affine'")

    def to_dict(self) -> dict:
        from .numeric import fmt

        out: dict = {}
        if self.prefix:
            out["prefix"] = [fmt(v) for v in self.prefix]
        if self.periodic is not None:
            out["periodic"] = [fmt(v) for v in self.periodic]
        else:
            out["affine"] = [fmt(v) for v in self.affine]
        return out

    def value_at(self, n: int):
        if n < 0:
            raise ValueError("time index must be nonnegative")
        L = len(self.prefix)
        if n < L:
            return self.prefix[n]
        if self.periodic is not None:
            return self.periodic[(n - L) % len(self.periodic)]
        c0, c1 = self.affine
        return c0 + c1 * n

    def step_ranges(self, n0: int) -> list[tuple[str, ParamRange]]:
        """Parameter classes covering every ``n >= n0``."""
        L = len(self.prefix)
        out = [(f"n={n}", ParamRange.point(self.prefix[n])) for n in range(n0, L)]
        start = max(n0, L)
        if self.periodic is not None:
            p = len(self.periodic)
            for t in range(p):
                n = start + t
                label = f"n>={start}" if p == 1 else f"n={n}+{p}k"
                out.append((label, ParamRange.point(self.value_at(n))))
        else:
            c0, c1 = self.affine
            first = c0 + c1 * start
            if c1 > 0:
                rng = ParamRange(first, math.inf)
            elif c1 < 0:
                rng = ParamRange(-math.inf, first)
            else:
                rng = ParamRange.point(first)
            out.append((f"n>={start}", rng))
        return out

    def is_bounded(self) -> bool:
        return self.periodic is not None or self.affine[1] == 0


def _check_membership(J: ClosedInterval | None, n: int, x) -> None:
    if J is not None and not J.contains(x):
        raise DomainViolation(f"x={x} is outside D_{n} = {J}", n=n, x=str(x))


@dataclass(frozen=True)
class TimeVaryingSystem:
    """Maps ``f_n = family(params[n], .)`` with phase sets ``partition``.

    ``domains`` is an optional list of intervals; ``D_n`` is its entry
    ``min(n, len-1)`` (so the last one repeats).  Without domains every
    ``D_n`` is the real line.  ``initial_domain`` is ``D_0`` for the
    initial-covering check.
    """

    family: MapFamily
    params: ParamSequence
    partition: tuple[ClosedInterval, ...]
    n0: int = 0
    domains: tuple[ClosedInterval, ...] | None = None
    initial_domain: ClosedInterval | None = None

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(self.partition))
        if len(self.partition) < 2:
            raise ValueError("the partition needs at least two sets")
        if self.n0 < 0:
            raise ValueError("n0 must be nonnegative")
        if self.domains is not None:
            object.__setattr__(self, "domains", tuple(self.domains))
            for D in self.domains[min(self.n0, len(self.domains) - 1):]:
                for j, V in enumerate(self.partition, start=1):
                    if not D.contains_interval(V):
                        raise ValueError(f"V_{j} = {V} is not inside the domain {D}")

    @property
    def N(self) -> int:
        return len(self.partition)

    def domain(self, n: int) -> ClosedInterval | None:
        if self.domains is None:
            return None
        return self.domains[min(n, len(self.domains) - 1)]

    def param(self, n: int):
        return self.params.value_at(n)

    def times_of(self, n: int) -> tuple[int, ...]:
        """Base time indices composed by step ``n`` (a single one here)."""
        return (n,)

    # -- point dynamics -----------------------------------------------------

    def evaluate(self, n: int, x):
        if n < 0:
            raise ValueError("time index must be nonnegative")
        _check_membership(self.domain(n), n, x)
        return self.family.value(coerce(self.param(n), x), x)

    def compose(self, i: int, k: int, x):
        if i < 0 or k < 0:
            raise ValueError("i and k must be nonnegative")
        for n in range(i, i + k):
            x = self.evaluate(n, x)
        return x

    def orbit(self, x0, start: int = 0, horizon: int = 0) -> list:
        if horizon < 0:
            raise ValueError("horizon must be nonnegative")
        out = [x0]
        x = x0
        for n in range(start, start + horizon):
            try:
                x = self.evaluate(n, x)
            except DomainViolation as exc:
                raise DomainViolation(str(exc), index=n - start, n=n) from None
            out.append(x)
        return out

    # -- interval dynamics --------------------------------------------------

    def image_interval(self, n: int, J: ClosedInterval) -> ClosedInterval:
        p = self.param(n)
        if self.family.monotone_direction(p, J) == 0:
            raise NotMonotone(f"f_{n} is not monotone on {J}", n=n, interval=str(J))
        return self.family.image(coerce(p, J.lo), J)

    def inverse_branch(self, n: int, branch: ClosedInterval, target: ClosedInterval) -> ClosedInterval:
        """``{x in branch : f_n(x) in target}``."""
        p = self.param(n)
        fam = self.family
        d = fam.monotone_direction(p, branch)
        if d == 0:
            raise NotMonotone(f"f_{n} is not monotone on {branch}", n=n, interval=str(branch))
        pw = coerce(p, branch.lo)
        img = fam.image(pw, branch)
        t = target.astype(branch.lo) if not isinstance(branch.lo, (int, Fraction)) else target
        lo, hi = max(t.lo, img.lo), min(t.hi, img.hi)
        if lo > hi:
            raise EmptyPreimage(f"{target} does not meet f_{n}({branch}) = {img}", n=n)
        # image endpoints pull back to branch endpoints exactly
        at_low_end, at_high_end = (branch.lo, branch.hi) if d > 0 else (branch.hi, branch.lo)
        xa = at_low_end if lo == img.lo else fam.preimage(pw, branch, lo)
        xb = at_high_end if hi == img.hi else fam.preimage(pw, branch, hi)
        a, b = (xa, xb) if xa <= xb else (xb, xa)
        a, b = max(a, coerce(branch.lo, a)), min(b, coerce(branch.hi, b))
        if a > b:
            a = b = (a + b) / 2
        return ClosedInterval(a, b)

    def min_abs_derivative(self, n: int, J: ClosedInterval):
        return self.family.abs_derivative_bounds(self.param(n), J)[0]

    def max_abs_derivative(self, n: int, J: ClosedInterval):
        return self.family.abs_derivative_bounds(self.param(n), J)[1]

    # -- uniform-in-time analysis ------------------------------------------

    def step_classes(self, n0: int | None = None) -> list[StepClass]:
        n0 = self.n0 if n0 is None else n0
        return [(label, (rng,)) for label, rng in self.params.step_ranges(n0)]

    def guaranteed_image(self, step: tuple[ParamRange, ...], J: ClosedInterval) -> ClosedInterval | None:
        return _composite_image(self.family, step, J)

    def guaranteed_min_abs_derivative(self, step: tuple[ParamRange, ...], J: ClosedInterval):
        return _composite_min_derivative(self.family, step, J)

    def guaranteed_max_abs_derivative(self, step: tuple[ParamRange, ...], J: ClosedInterval):
        if len(step) != 1:
            raise TailNotAnalyzable("upper derivative bounds for composite steps are not supported")
        return self.family.max_abs_derivative_over(step[0], J)

    def monotone_over(self, step: tuple[ParamRange, ...], J: ClosedInterval) -> bool:
        try:
            _composite_image(self.family, step, J)
        except NotMonotone:
            return False
        return True


def _composite_image(fam: MapFamily, step: tuple[ParamRange, ...], J: ClosedInterval):
    if len(step) == 1:
        return fam.guaranteed_image(step[0], J)
    if not all(r.is_point for r in step):
        raise TailNotAnalyzable("composite steps over parameter ranges are not supported")
    for r in step:
        if fam.monotone_direction(r.lo, J) == 0:
            raise NotMonotone(f"composite step is not monotone on {J}", interval=str(J))
        J = fam.image(r.lo, J)
    return J


def _composite_min_derivative(fam: MapFamily, step: tuple[ParamRange, ...], J: ClosedInterval):
    if len(step) == 1:
        return fam.min_abs_derivative_over(step[0], J)
    if not all(r.is_point for r in step):
        raise TailNotAnalyzable("composite steps over parameter ranges are not supported")
    # chain rule: product of the per-map minima along the running images
    total = 1
    for r in step:
        total = total * fam.abs_derivative_bounds(r.lo, J)[0]
        if fam.monotone_direction(r.lo, J) == 0:
            raise NotMonotone(f"composite step is not monotone on {J}", interval=str(J))
        J = fam.image(r.lo, J)
    return total


@dataclass(frozen=True)
class TimeSequence:
    """Strictly increasing times ``k_1 < k_2 < ...`` given by a finite prefix
    followed by an arithmetic tail of step ``step``; ``k_0 = 0``."""

    prefix: tuple[int, ...] = ()
    step: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(k) for k in self.prefix))
        if self.step < 1:
            raise NonIncreasingTimes("tail step must be a positive integer", step=self.step)
        prev = 0
        for idx, k in enumerate(self.prefix, start=1):
            if k <= prev:
                raise NonIncreasingTimes(f"k_{idx} = {k} does not exceed k_{idx - 1} = {prev}", index=idx)
            prev = k

    @classmethod
    def identity(cls) -> "TimeSequence":
        return cls((), 1)

    @classmethod
    def from_spec(cls, spec) -> "TimeSequence":
        return cls(tuple(spec.get("prefix", ())), int(spec.get("step", 1)))

    def to_dict(self) -> dict:
        return {"prefix": list(self.prefix), "step": self.step}

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError("index must be nonnegative")
        if n == 0:
            return 0
        m = len(self.prefix)
        if n <= m:
            return self.prefix[n - 1]
        last = self.prefix[-1] if m else 0
        return last + (n - m) * self.step

    def is_identity(self) -> bool:
        return all(self(n) == n for n in range(len(self.prefix) + 2)) and self.step == 1


@dataclass(frozen=True)
class InducedSystem:
    """``g_m = f_{k_{m+1}-1} o ... o f_{k_m}`` over the base system's maps.

    The induced system observes the base orbit at times ``k_m``.
    """

    base: TimeVaryingSystem
    times: TimeSequence = field(default_factory=TimeSequence.identity)
    n0: int | None = None

    def __post_init__(self):
        if self.n0 is None:
            object.__setattr__(self, "n0", self.base.n0 if self.times.is_identity() else 0)

    @property
    def partition(self) -> tuple[ClosedInterval, ...]:
        return self.base.partition

    @property
    def family(self) -> MapFamily:
        return self.base.family

    @property
    def N(self) -> int:
        return self.base.N

    @property
    def initial_domain(self):
        return self.base.initial_domain

    def domain(self, m: int):
        return self.base.domain(self.times(m))

    def times_of(self, m: int) -> tuple[int, ...]:
        return tuple(range(self.times(m), self.times(m + 1)))

    def param(self, m: int):
        return tuple(self.base.param(t) for t in self.times_of(m))

    def evaluate(self, m: int, x):
        k = self.times(m)
        return self.base.compose(k, self.times(m + 1) - k, x)

    def compose(self, i: int, k: int, x):
        for m in range(i, i + k):
            x = self.evaluate(m, x)
        return x

    def orbit(self, x0, start: int = 0, horizon: int = 0) -> list:
        out = [x0]
        x = x0
        for m in range(start, start + horizon):
            x = self.evaluate(m, x)
            out.append(x)
        return out

    def _branches(self, m: int, J: ClosedInterval) -> list[ClosedInterval]:
        out = [J]
        for t in self.times_of(m)[:-1]:
            out.append(self.base.image_interval(t, out[-1]))
        return out

    def image_interval(self, m: int, J: ClosedInterval) -> ClosedInterval:
        for t in self.times_of(m):
            J = self.base.image_interval(t, J)
        return J

    def inverse_branch(self, m: int, branch: ClosedInterval, target: ClosedInterval) -> ClosedInterval:
        ts = self.times_of(m)
        chain = self._branches(m, branch)
        T = target
        for t, B in zip(reversed(ts), reversed(chain)):
            T = self.base.inverse_branch(t, B, T)
        return T

    def min_abs_derivative(self, m: int, J: ClosedInterval):
        total = 1
        for t in self.times_of(m):
            total = total * self.base.min_abs_derivative(t, J)
            J = self.base.image_interval(t, J)
        return total

    def max_abs_derivative(self, m: int, J: ClosedInterval):
        total = 1
        for t in self.times_of(m):
            total = total * self.base.max_abs_derivative(t, J)
            J = self.base.image_interval(t, J)
        return total

    def step_classes(self, n0: int | None = None) -> list[StepClass]:
        n0 = self.n0 if n0 is None else n0
        base = self.base
        L = len(base.params.prefix)
        M = max(n0, len(self.times.prefix))
        while self.times(M) < L:
            M += 1
        out: list[StepClass] = [
            (f"n={m}", tuple(ParamRange.point(base.param(t)) for t in self.times_of(m)))
            for m in range(n0, M)
        ]
        s = self.times.step
        if s == 1:
            out.extend((label, (rng,)) for label, rng in base.params.step_ranges(self.times(M)))
            return out
        if base.params.periodic is None:
            raise TailNotAnalyzable("induced blocks of length > 1 over an affine parameter tail")
        p = len(base.params.periodic)
        seen = set()
        m = M
        while (phase := (self.times(m) - L) % p) not in seen:
            seen.add(phase)
            out.append((f"m={m}+{p // math.gcd(p, s)}k",
                        tuple(ParamRange.point(base.param(t)) for t in self.times_of(m))))
            m += 1
        return out

    def guaranteed_image(self, step, J):
        return _composite_image(self.family, step, J)

    def guaranteed_min_abs_derivative(self, step, J):
        return _composite_min_derivative(self.family, step, J)

    def guaranteed_max_abs_derivative(self, step, J):
        if len(step) != 1:
            raise TailNotAnalyzable("upper derivative bounds for composite steps are not supported")
        return self.family.max_abs_derivative_over(step[0], J)

    def monotone_over(self, step, J) -> bool:
        try:
            _composite_image(self.family, step, J)
        except NotMonotone:
            return False
        return True


System = TimeVaryingSystem | InducedSystem


# -- functional front end -----------------------------------------------------

def evaluate(sys: System, n: int, x):
    return sys.evaluate(n, x)


def compose(sys: System, i: int, k: int, x):
    return sys.compose(i, k, x)


def orbit(sys: System, x0, start: int = 0, horizon: int = 0) -> list:
    return sys.orbit(x0, start, horizon)


def image_interval(sys: System, n: int, J: ClosedInterval) -> ClosedInterval:
    return sys.image_interval(n, J)


def inverse_branch(sys: System, n: int, branch: ClosedInterval, target: ClosedInterval) -> ClosedInterval:
    return sys.inverse_branch(n, branch, target)


def min_abs_derivative(sys: System, n: int, J: ClosedInterval):
    return sys.min_abs_derivative(n, J)


def max_abs_derivative(sys: System, n: int, J: ClosedInterval):
    return sys.max_abs_derivative(n, J)


def build_induced(sys: TimeVaryingSystem, times: TimeSequence | Sequence[int], n0: int | None = None) -> InducedSystem:
    if not isinstance(times, TimeSequence):
        times = TimeSequence(tuple(times), 1)
    return InducedSystem(sys, times, n0)


def logistic_example(variant: str = "constant", r=Fraction(9, 2)) -> TimeVaryingSystem:
    """The time-varying logistic system on ``V_1 = [3/5, 1]``, ``V_2 = [0, 1/3]``.

    ``variant="affine"`` uses ``r_n = r + n/10``.
    """
    from .families import LogisticFamily

    r = parse_number(r)
    if variant == "constant":
        params = ParamSequence.constant(r)
    elif variant == "affine":
        params = ParamSequence(affine=(r, Fraction(1, 10)))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    partition = (ClosedInterval(Fraction(3, 5), Fraction(1)), ClosedInterval(Fraction(0), Fraction(1, 3)))
    return TimeVaryingSystem(LogisticFamily(), params, partition)


def system_from_config(cfg: dict):
    """Build a (possibly induced) system from a parsed JSON config."""
    family = family_from_spec(cfg["family"])
    params = ParamSequence.from_spec(cfg["params"])
    partition = tuple(ClosedInterval(parse_number(a), parse_number(b)) for a, b in cfg["partition"])
    domains = None
    if cfg.get("domains"):
        domains = tuple(ClosedInterval(parse_number(a), parse_number(b)) for a, b in cfg["domains"])
    D0 = None
    if cfg.get("initial_domain"):
        a, b = cfg["initial_domain"]
        D0 = ClosedInterval(parse_number(a), parse_number(b))
    sys = TimeVaryingSystem(family, params, partition, int(cfg.get("n0", 0)), domains, D0)
    if cfg.get("induced_times"):
        spec = cfg["induced_times"]
        return InducedSystem(sys, TimeSequence.from_spec(spec), spec.get("n0"))
    return sys


def system_to_config(sys: System) -> dict:
    from .numeric import fmt

    base = sys.base if isinstance(sys, InducedSystem) else sys
    cfg = {
        "family": base.family.to_dict(),
        "params": base.params.to_dict(),
        "partition": [[fmt(V.lo), fmt(V.hi)] for V in base.partition],
        "n0": base.n0,
    }
    if base.domains is not None:
        cfg["domains"] = [[fmt(D.lo), fmt(D.hi)] for D in base.domains]
    if base.initial_domain is not None:
        cfg["initial_domain"] = [fmt(base.initial_domain.lo), fmt(base.initial_domain.hi)]
    if isinstance(sys, InducedSystem):
        cfg["induced_times"] = {**sys.times.to_dict(), "n0": sys.n0}
    return cfg
