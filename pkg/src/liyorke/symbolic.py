"""One-sided symbol sequences and the itineraries behind scrambled sets.

Three constructions are provided:

* :func:`build_alpha` -- the periodic itinerary through ``j0`` with period
  ``k0`` whose cylinder sets contract uniformly;
* :func:`build_beta_hat_31` -- blocks ``(a_0..a_{l_{i_j}}, w0, B_1..B_{j-1})``
  placed at times ``h_{j-1}`` of a :class:`Schedule31`;
* :func:`build_beta_hat_42` -- segments ``(j0^n, w0, B_1..B_{n-1})`` starting
  at times ``k_n``.

``B_i`` is ``w1`` or ``w2`` according to bit ``i`` of a :class:`ChoiceSequence`.
Schemes are evaluated lazily through ``symbol_at``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .errors import CriterionFailed, CycleMismatch, DepthExplosion, SelfLoopMissing
from .matrix import TransitionMatrix, Word, WordTriple, _smallest_word
from .numeric import exact


@dataclass(frozen=True)
class ChoiceSequence:
    """Infinite bit string ``prefix`` followed by ``tail`` repeated forever.

    Bit ``i`` (1-based) selects ``B_i``: 0 -> ``w1``, 1 -> ``w2``.
    """

    prefix: str = ""
    tail: str = "0"

    def __post_init__(self):
        if not self.tail:
            raise ValueError("periodic tail must be nonempty")
        if set(self.prefix + self.tail) - {"0", "1"}:
            raise ValueError(f"choice bits must be 0/1, got {self.prefix}:{self.tail}")

    @classmethod
    def parse(cls, text: str) -> "ChoiceSequence":
        """``"0110:01"`` is prefix ``0110`` then ``01`` repeated; no colon
        means a zero tail."""
        text = text.strip()
        if ":" in text:
            prefix, tail = text.split(":", 1)
            return cls(prefix, tail)
        return cls(text, "0")

    def bit(self, i: int) -> int:
        if i < 1:
            raise ValueError("choice bits are indexed from 1")
        if i <= len(self.prefix):
            return int(self.prefix[i - 1])
        return int(self.tail[(i - 1 - len(self.prefix)) % len(self.tail)])

    def bits(self, count: int) -> str:
        return "".join(str(self.bit(i)) for i in range(1, count + 1))

    @property
    def horizon(self) -> int:
        """Bits beyond this index repeat with period ``len(tail)``."""
        return len(self.prefix) + len(self.tail)

    def first_difference(self, other: "ChoiceSequence") -> int | None:
        """Smallest ``i`` with different bits, None for equal sequences."""
        span = max(len(self.prefix), len(other.prefix)) + math.lcm(len(self.tail), len(other.tail))
        for i in range(1, span + 1):
            if self.bit(i) != other.bit(i):
                return i
        return None

    def __str__(self) -> str:
        return f"{self.prefix}:{self.tail}"


def default_choices(count: int) -> list[ChoiceSequence]:
    """The first ``count`` binary strings of the shortest sufficient length."""
    if count < 1:
        raise ValueError("count must be positive")
    width = max(1, math.ceil(math.log2(count)))
    return [ChoiceSequence(format(i, f"0{width}b"), "0") for i in range(count)]


@dataclass(frozen=True)
class Block:
    kind: str      # "alpha", "run", "w0" or "B"
    start: int
    length: int
    index: int = 0  # block number j (or n), and for "B" also the B index
    b_index: int = 0


class ItineraryScheme:
    """A point of the one-sided shift, evaluated on demand."""

    tag = "explicit-prefix"

    def __init__(self, matrix: TransitionMatrix | None):
        self.matrix = matrix

    def symbol_at(self, n: int) -> int:
        raise NotImplementedError

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self.symbol_at(n) for n in range(length))

    def blocks(self, upto: int) -> list[Block]:
        """Decomposition of ``[0, upto)`` into structural blocks."""
        return [Block("explicit", 0, upto)]

    def is_admissible_prefix(self, length: int) -> bool:
        if self.matrix is None:
            return True
        w = self.prefix(length)
        return self.matrix.is_admissible(w)

    def describe(self) -> dict:
        raise NotImplementedError


class ExplicitScheme(ItineraryScheme):
    """Finite ``head`` followed by a periodic ``cycle``."""

    tag = "explicit-prefix"

    def __init__(self, head: Sequence[int], cycle: Sequence[int], matrix: TransitionMatrix | None = None):
        super().__init__(matrix)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        self.head = tuple(head)
        self.cycle = tuple(cycle)

    def symbol_at(self, n):
        if n < len(self.head):
            return self.head[n]
        return self.cycle[(n - len(self.head)) % len(self.cycle)]

    def describe(self):
        return {"tag": self.tag, "head": list(self.head), "cycle": list(self.cycle)}


class PeriodicScheme(ExplicitScheme):
    """``alpha``: the cycle ``(j0, b_1, .., b_{k0-1})`` repeated."""

    tag = "periodic"

    def __init__(self, cycle_word: Word, matrix: TransitionMatrix):
        super().__init__((), cycle_word[:-1], matrix)
        self.cycle_word = tuple(cycle_word)

    @property
    def j0(self) -> int:
        return self.cycle_word[0]

    @property
    def k0(self) -> int:
        return len(self.cycle_word) - 1

    def describe(self):
        return {"tag": self.tag, "cycle": list(self.cycle_word)}


def build_alpha(A: TransitionMatrix, j0: int, k0: int, cycle: Sequence[int] | None = None) -> PeriodicScheme:
    """Periodic itinerary with ``symbol_at(i * k0) == j0``.

    Without an explicit ``cycle`` the lexicographically smallest allowable
    word ``(j0, .., j0)`` of length ``k0 + 1`` is used.
    """
    if k0 < 1:
        raise CycleMismatch("k0 must be positive", k0=k0)
    if cycle is None:
        cycle = _smallest_word(A, k0 + 1, j0, j0)
        if cycle is None:
            raise CycleMismatch(f"no allowable cycle of length {k0} through {j0}", j0=j0, k0=k0)
    cycle = tuple(cycle)
    if len(cycle) != k0 + 1 or cycle[0] != j0 or cycle[-1] != j0:
        raise CycleMismatch(f"cycle {cycle} is not a word ({j0}, ..., {j0}) of length {k0 + 1}", cycle=cycle)
    if not A.is_admissible(cycle):
        raise CycleMismatch(f"cycle {cycle} is not allowable", cycle=cycle)
    return PeriodicScheme(cycle, A)


def sequence_distance(a: ItineraryScheme, b: ItineraryScheme, prefix: int) -> tuple[Fraction, Fraction]:
    """Bracket of ``sum_i [a_i != b_i] / 2**i`` from the first ``prefix`` terms.

    The tail contributes at most ``2**(1 - prefix)``; both ends are exact.
    """
    if prefix < 1:
        raise ValueError("prefix must be >= 1")
    lower = sum((Fraction(1, 2 ** i) for i in range(prefix) if a.symbol_at(i) != b.symbol_at(i)), Fraction(0))
    return lower, lower + Fraction(2, 2 ** prefix)


# -- schedules ------------------------------------------------------------------

@dataclass(frozen=True)
class Schedule31:
    """Block lengths ``l_{i_j} = i_j * k0`` chosen so that the certified
    cylinder bound ``(lam * mu**(k0-1))**(-i_j) * diam_j0`` is at most
    ``mu0**h_{j-1} * 2**(-j)``.

    ``i[j-1]`` holds ``i_j`` and ``h[j]`` holds ``h_j`` (with ``h[0] = 0``).
    """

    lam: Fraction
    mu: Fraction
    k0: int
    diam_j0: Fraction
    m1: int
    m2: int
    i: tuple[int, ...]
    h: tuple[int, ...]
    cap: int = 10_000

    @property
    def mu0(self) -> Fraction:
        return min(self.lam, self.mu)

    @property
    def rate(self) -> Fraction:
        return self.lam * self.mu ** (self.k0 - 1)

    @property
    def depth(self) -> int:
        return len(self.i)

    def l(self, i: int) -> int:
        return i * self.k0

    def h_closed(self, j: int) -> int:
        """``h_j`` from its closed formula."""
        return sum(self.l(t) for t in self.i[:j]) + j * self.m1 + j * (j - 1) * self.m2 // 2 + j

    def block_length(self, j: int) -> int:
        return self.l(self.i[j - 1]) + 1 + self.m1 + (j - 1) * self.m2

    def bound(self, j: int) -> Fraction:
        """Certified diameter bound of the alpha-cylinder used by block ``j``."""
        return self.diam_j0 / self.rate ** self.i[j - 1]

    def extended(self, depth: int) -> "Schedule31":
        if depth <= self.depth:
            return self
        i, h = list(self.i), list(self.h)
        for j in range(self.depth + 1, depth + 1):
            ij = _select_i(self, j, h[-1], i[-1] if i else 0)
            i.append(ij)
            h.append(h[-1] + ij * self.k0 + 1 + self.m1 + (j - 1) * self.m2)
        return replace(self, i=tuple(i), h=tuple(h))


def _selection_holds(s: Schedule31, i: int, j: int, h_prev: int) -> bool:
    # rate**(-i) * diam <= mu0**h * 2**(-j)   <=>   diam * 2**j <= mu0**h * rate**i
    return s.diam_j0 * 2 ** j <= s.mu0 ** h_prev * s.rate ** i


def _select_i(s: Schedule31, j: int, h_prev: int, i_prev: int) -> int:
    log_rate = math.log(s.rate)
    est = (math.log(s.diam_j0) + j * math.log(2) - h_prev * math.log(s.mu0)) / log_rate
    start = max(i_prev + 1, math.floor(est) - 1)
    if start > s.cap:
        raise DepthExplosion(f"block {j} needs i_j >= {start} (cap {s.cap}); mu0 = {float(s.mu0)} shrinks the budget",
                             j=j, estimate=start, cap=s.cap)
    i = start
    while not _selection_holds(s, i, j, h_prev):
        i += 1
        if i > s.cap:
            raise DepthExplosion(f"block {j} needs i_j > {s.cap}", j=j, cap=s.cap)
    return i


def build_schedule31(lam, mu, k0: int, diam_j0, m1: int, m2: int, depth: int, cap: int = 10_000) -> Schedule31:
    lam, mu, diam_j0 = exact(lam), exact(mu), exact(diam_j0)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if diam_j0 <= 0:
        raise ValueError("diam_j0 must be positive")
    if mu <= 0:
        raise CriterionFailed("mu must be positive", mu=str(mu))
    rate = lam * mu ** (k0 - 1)
    if rate <= 1:
        raise CriterionFailed(f"lam * mu**(k0-1) = {float(rate)} does not exceed 1", rate=str(rate))
    base = Schedule31(lam, mu, k0, diam_j0, m1, m2, (), (0,), cap)
    return base.extended(depth)


@dataclass(frozen=True)
class Schedule42:
    j0: int
    l1: int
    l2: int

    def k(self, n: int) -> int:
        """Start of the ``n``-th run of ``j0`` symbols (``n >= 1``)."""
        return n * (n - 1) // 2 + (n - 1) * self.l1 + (n - 2) * (n - 1) * self.l2 // 2

    def segment_length(self, n: int) -> int:
        return n + self.l1 + (n - 1) * self.l2


# -- structured schemes ------------------------------------------------------------

class _BlockScheme(ItineraryScheme):
    """Shared lookup: segments with known starts, each a head part followed
    by ``w0`` and ``B_1..B_{c}``."""

    def __init__(self, matrix, triple: WordTriple, choices: ChoiceSequence):
        super().__init__(matrix)
        self.triple = triple
        self.choices = choices
        self._starts: list[int] = [0]

    # subclasses: _head_length(seg), _head_symbol(seg, offset), _segment_length(seg)

    def _ensure(self, n: int) -> None:
        while self._starts[-1] <= n:
            seg = len(self._starts)
            self._starts.append(self._starts[-1] + self._segment_length(seg))

    def segment_of(self, n: int) -> tuple[int, int]:
        """(segment number from 1, offset inside it)."""
        if n < 0:
            raise ValueError("index must be nonnegative")
        self._ensure(n)
        seg = bisect.bisect_right(self._starts, n)
        return seg, n - self._starts[seg - 1]

    def segment_start(self, seg: int) -> int:
        self._ensure_segments(seg)
        return self._starts[seg - 1]

    def _ensure_segments(self, seg: int) -> None:
        while len(self._starts) <= seg:
            s = len(self._starts)
            self._starts.append(self._starts[-1] + self._segment_length(s))

    def symbol_at(self, n: int) -> int:
        seg, off = self.segment_of(n)
        hl = self._head_length(seg)
        if off < hl:
            return self._head_symbol(seg, off)
        off -= hl
        m1 = self.triple.m1
        if off < m1:
            return self.triple.w0[off]
        off -= m1
        b, pos = divmod(off, self.triple.m2)
        return self.triple.block(self.choices.bit(b + 1))[pos]

    def blocks(self, upto: int) -> list[Block]:
        out = []
        seg = 1
        while self.segment_start(seg) < upto:
            s = self.segment_start(seg)
            hl = self._head_length(seg)
            out.append(Block(self._head_kind, s, hl, seg))
            out.append(Block("w0", s + hl, self.triple.m1, seg))
            t = s + hl + self.triple.m1
            for b in range(1, seg):
                out.append(Block("B", t, self.triple.m2, seg, b))
                t += self.triple.m2
            seg += 1
        return out

    def b_positions(self, b: int, upto: int) -> list[int]:
        """Start indices (< upto) of every occurrence of ``B_b``."""
        return [blk.start for blk in self.blocks(upto) if blk.kind == "B" and blk.b_index == b]


class Theorem31Scheme(_BlockScheme):
    tag = "theorem31"
    _head_kind = "alpha"

    def __init__(self, alpha: PeriodicScheme, schedule: Schedule31, triple: WordTriple, choices: ChoiceSequence):
        super().__init__(alpha.matrix, triple, choices)
        self.alpha = alpha
        self.schedule = schedule

    def _need(self, seg: int) -> None:
        if seg > self.schedule.depth:
            self.schedule = self.schedule.extended(max(seg, 2 * self.schedule.depth))

    def _head_length(self, seg):
        self._need(seg)
        return self.schedule.l(self.schedule.i[seg - 1]) + 1

    def _head_symbol(self, seg, off):
        return self.alpha.symbol_at(off)

    def _segment_length(self, seg):
        self._need(seg)
        return self.schedule.block_length(seg)

    def close_times(self, upto: int) -> list[int]:
        """Block starts ``h_{j-1}``, where all such itineraries share an
        alpha-cylinder of certified small diameter."""
        out = []
        seg = 1
        while (s := self.segment_start(seg)) < upto:
            out.append(s)
            seg += 1
        return out

    def close_bound(self, seg: int):
        self._need(seg)
        return self.schedule.bound(seg)

    def describe(self):
        s = self.schedule
        return {"tag": self.tag, "j0": self.triple.j0, "k0": s.k0, "lam": str(s.lam), "mu": str(s.mu),
                "diam_j0": str(s.diam_j0), "cycle": list(self.alpha.cycle_word), "choices": str(self.choices)}


class Theorem42Scheme(_BlockScheme):
    tag = "theorem42"
    _head_kind = "run"

    def __init__(self, matrix, triple: WordTriple, choices: ChoiceSequence):
        super().__init__(matrix, triple, choices)
        self.schedule = Schedule42(triple.j0, triple.m1, triple.m2)

    def _head_length(self, seg):
        return seg

    def _head_symbol(self, seg, off):
        return self.triple.j0

    def _segment_length(self, seg):
        return self.schedule.segment_length(seg)

    def close_times(self, upto: int) -> list[int]:
        """Run starts ``k_n``."""
        out = []
        n = 1
        while (k := self.schedule.k(n)) < upto:
            out.append(k)
            n += 1
        return out

    def describe(self):
        return {"tag": self.tag, "j0": self.triple.j0, "choices": str(self.choices)}


def build_beta_hat_31(alpha: PeriodicScheme, sched: Schedule31, triple: WordTriple,
                      choices: ChoiceSequence | str) -> Theorem31Scheme:
    if isinstance(choices, str):
        choices = ChoiceSequence.parse(choices)
    if triple.j0 != alpha.j0:
        raise CycleMismatch("alpha and the word triple use different j0", alpha=alpha.j0, triple=triple.j0)
    if sched.k0 != alpha.k0 or sched.m1 != triple.m1 or sched.m2 != triple.m2:
        raise CycleMismatch("schedule does not match alpha / word lengths")
    return Theorem31Scheme(alpha, sched, triple, choices)


def build_beta_hat_42(A: TransitionMatrix, triple: WordTriple,
                      choices: ChoiceSequence | str) -> tuple[Theorem42Scheme, Schedule42]:
    if isinstance(choices, str):
        choices = ChoiceSequence.parse(choices)
    if not A.edge(triple.j0, triple.j0):
        raise SelfLoopMissing(f"a[{triple.j0},{triple.j0}] = 0", j0=triple.j0)
    scheme = Theorem42Scheme(A, triple, choices)
    return scheme, scheme.schedule
