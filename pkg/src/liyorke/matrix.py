"""Transition matrices and allowable words.

Symbols are 1-based throughout (``1..n``), matching the usual notation for
subshifts of finite type.  A word is a plain tuple of symbols.

Every search here is deterministic: among candidate words the shortest wins,
ties are broken lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    CountOverflow,
    HypothesisViolated,
    MatrixFileError,
    NonBinaryEntry,
    NotAdmissible,
    NotIrreducible,
    NotSquare,
    TooShort,
    ZeroRowOrColumn,
)

Word = tuple[int, ...]


@dataclass(frozen=True)
class TransitionMatrix:
    """Validated 0/1 matrix with all row and column sums at least 1.

    Build instances with :func:`validate`.
    """

    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def edge(self, i: int, j: int) -> bool:
        return self.entries[i - 1][j - 1] == 1

    def successors(self, i: int) -> tuple[int, ...]:
        return tuple(j + 1 for j, a in enumerate(self.entries[i - 1]) if a)

    def row_sum(self, i: int) -> int:
        return sum(self.entries[i - 1])

    @property
    def symbols(self) -> range:
        return range(1, self.n + 1)

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def to_text(self) -> str:
        rows = "\n".join(" ".join(str(a) for a in r) for r in self.entries)
        return f"{self.n}\n{rows}\n"

    def is_admissible(self, word: Sequence[int]) -> bool:
        if len(word) == 0:
            return False
        if any(not 1 <= s <= self.n for s in word):
            return False
        return all(self.edge(a, b) for a, b in zip(word, word[1:]))

    @cached_property
    def _reach(self) -> tuple[frozenset[int], ...]:
        # _reach[i-1] = symbols reachable from i by a path with >= 1 edge
        out = []
        for i in self.symbols:
            seen: set[int] = set()
            stack = list(self.successors(i))
            while stack:
                s = stack.pop()
                if s in seen:
                    continue
                seen.add(s)
                stack.extend(self.successors(s))
            out.append(frozenset(seen))
        return tuple(out)


def validate(raw) -> TransitionMatrix:
    """Check a square integer matrix and wrap it as a :class:`TransitionMatrix`."""
    if isinstance(raw, TransitionMatrix):
        return raw
    if isinstance(raw, np.ndarray):
        raw = raw.tolist()
    rows = [list(r) if isinstance(r, (list, tuple, np.ndarray)) else r for r in raw]
    n = len(rows)
    if n < 2:
        raise NotSquare(f"matrix must be at least 2x2, got {n} rows", size=n)
    for i, r in enumerate(rows, start=1):
        if not isinstance(r, list) or len(r) != n:
            raise NotSquare(f"row {i} has {len(r) if isinstance(r, list) else 1} entries, expected {n}", row=i)
    entries = []
    for i, r in enumerate(rows, start=1):
        out = []
        for j, a in enumerate(r, start=1):
            if isinstance(a, bool) or a not in (0, 1):
                raise NonBinaryEntry(f"entry ({i},{j}) = {a!r} is not 0 or 1", row=i, col=j, value=a)
            out.append(int(a))
        entries.append(tuple(out))
    for i in range(n):
        if sum(entries[i]) == 0:
            raise ZeroRowOrColumn(f"row {i + 1} is all zeros", kind="row", index=i + 1)
    for j in range(n):
        if sum(entries[i][j] for i in range(n)) == 0:
            raise ZeroRowOrColumn(f"column {j + 1} is all zeros", kind="column", index=j + 1)
    return TransitionMatrix(tuple(entries))


def parse_matrix_text(text: str) -> TransitionMatrix:
    """Parse ``n`` on the first line followed by ``n`` rows of 0/1 entries."""
    lines = [(k, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines(), start=1)]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise MatrixFileError("empty matrix file", line=1)
    k, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise MatrixFileError(f"line {k}: expected the matrix size, got {head!r}", line=k) from None
    body = lines[1:]
    if len(body) != n:
        line = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else k + 1)
        raise MatrixFileError(f"line {line}: expected {n} matrix rows, found {len(body)}", line=line)
    rows = []
    for k, ln in body:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise MatrixFileError(f"line {k}: non-integer entry in {ln!r}", line=k) from None
        if len(row) != n:
            raise MatrixFileError(f"line {k}: expected {n} entries, found {len(row)}", line=k)
        rows.append(row)
    return validate(rows)


def is_irreducible(A: TransitionMatrix) -> bool:
    """Strong connectivity of the transition graph."""
    full = frozenset(A.symbols)
    return all(r == full for r in A._reach)


def _matmul(X, Y):
    n = len(X)
    return [[sum(X[i][t] * Y[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def matrix_power(A: TransitionMatrix, k: int) -> list[list[int]]:
    """Exact ``A**k`` with Python integers (repeated squaring)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = A.n
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(r) for r in A.entries]
    while k:
        if k & 1:
            result = _matmul(result, base)
        k >>= 1
        if k:
            base = _matmul(base, base)
    return result


def power_entry(A: TransitionMatrix, k: int, i: int, j: int, cap: int | None = None) -> int:
    """The ``(i, j)`` entry of ``A**k``: the number of allowable words of
    length ``k + 1`` from ``i`` to ``j``.

    Counts are exact big integers.  ``cap`` sets an explicit capacity; a
    count above it raises :class:`CountOverflow` instead of being truncated.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _check_symbols(A, i, j)
    value = matrix_power(A, k)[i - 1][j - 1]
    if cap is not None and value > cap:
        raise CountOverflow(f"word count {value} exceeds capacity {cap}", count=value, cap=cap)
    return value


def _check_symbols(A: TransitionMatrix, *syms: int) -> None:
    for s in syms:
        if not 1 <= s <= A.n:
            raise ValueError(f"symbol {s} outside 1..{A.n}")


def _reach_layers(A: TransitionMatrix, j: int, steps: int) -> list[frozenset[int]]:
    """``layers[t]`` = symbols from which ``j`` is reachable in exactly ``t`` steps."""
    layers = [frozenset({j})]
    for _ in range(steps):
        prev = layers[-1]
        layers.append(frozenset(s for s in A.symbols if any(A.edge(s, u) for u in prev)))
    return layers


def _iter_words(A: TransitionMatrix, length: int, i: int, j: int) -> Iterator[Word]:
    layers = _reach_layers(A, j, length - 1)
    if i not in layers[length - 1]:
        return
    word = [i]

    def rec(remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield tuple(word)
            return
        for s in A.successors(word[-1]):
            if s in layers[remaining - 1]:
                word.append(s)
                yield from rec(remaining - 1)
                word.pop()

    yield from rec(length - 1)


def enumerate_words(A: TransitionMatrix, length: int, i: int, j: int, cap: int | None = None) -> list[Word]:
    """All allowable words of the given length from ``i`` to ``j``, sorted."""
    if length < 1:
        raise ValueError("length must be >= 1")
    _check_symbols(A, i, j)
    if length == 1:
        return [(i,)] if i == j else []
    if cap is not None:
        count = power_entry(A, length - 1, i, j)
        if count > cap:
            raise BudgetExceeded(f"{count} words exceed the budget of {cap}", count=count, cap=cap)
    return list(_iter_words(A, length, i, j))


def minimal_return_time(A: TransitionMatrix, j0: int) -> int:
    """Smallest ``k`` with a positive ``(j0, j0)`` entry of ``A**k``."""
    _check_symbols(A, j0)
    if not is_irreducible(A):
        raise NotIrreducible("minimal return time requires an irreducible matrix", j0=j0)
    layer = {j0}
    for k in range(1, A.n + 1):
        layer = {u for s in layer for u in A.successors(s)}
        if j0 in layer:
            return k
    raise AssertionError("irreducible matrix without a return to j0")  # pragma: no cover


def has_word_alternatives(A: TransitionMatrix) -> bool:
    """Irreducible with at least one row sum >= 2."""
    return is_irreducible(A) and any(A.row_sum(i) >= 2 for i in A.symbols)


def _require_hypothesis(A: TransitionMatrix) -> None:
    if not is_irreducible(A):
        raise HypothesisViolated("matrix is not irreducible")
    if not any(A.row_sum(i) >= 2 for i in A.symbols):
        raise HypothesisViolated("no row of the matrix has sum >= 2")


def alternative_length_bound(n: int) -> int:
    """Length above which every allowable word has a same-endpoint alternative."""
    return 2 * n * (n * n - 2 * n + 2)


def _smallest_word(A: TransitionMatrix, length: int, i: int, j: int, layers=None) -> Word | None:
    if layers is None:
        layers = _reach_layers(A, j, length - 1)
    if i not in layers[length - 1]:
        return None
    word = [i]
    for remaining in range(length - 1, 0, -1):
        word.append(next(s for s in A.successors(word[-1]) if s in layers[remaining - 1]))
    return tuple(word)


def _next_word(A: TransitionMatrix, w: Word, layers=None) -> Word | None:
    """Lexicographic successor of ``w`` among allowable words with the same
    length and end symbols."""
    L = len(w)
    if L <= 2:
        return None
    j = w[-1]
    if layers is None:
        layers = _reach_layers(A, j, L - 1)
    for p in range(L - 2, 0, -1):
        remaining = L - 1 - p
        for s in A.successors(w[p - 1]):
            if s > w[p] and s in layers[remaining]:
                head = list(w[:p]) + [s]
                for r in range(remaining, 0, -1):
                    head.append(next(u for u in A.successors(head[-1]) if u in layers[r - 1]))
                return tuple(head)
    return None


def find_long_word(A: TransitionMatrix, i: int, j: int, l: int) -> Word:
    """Shortest allowable word from ``i`` to ``j`` with more than ``l`` symbols."""
    _require_hypothesis(A)
    _check_symbols(A, i, j)
    start = max(l + 1, 1)
    # irreducible: some length in every window of n consecutive lengths works
    for length in range(start, start + A.n * A.n + A.n + 1):
        w = _smallest_word(A, length, i, j)
        if w is not None:
            return w
    raise AssertionError("no long word found for an irreducible matrix")  # pragma: no cover


def find_alternative_word(A: TransitionMatrix, w: Sequence[int]) -> Word:
    """Lexicographically smallest allowable ``w' != w`` of the same length
    with the same first and last symbols."""
    w = tuple(w)
    if not A.is_admissible(w):
        raise NotAdmissible(f"word {w} is not allowable", word=w)
    layers = _reach_layers(A, w[-1], len(w) - 1)
    first = _smallest_word(A, len(w), w[0], w[-1], layers)
    if first != w:
        return first
    alt = _next_word(A, w, layers)
    if alt is not None:
        return alt
    _require_hypothesis(A)
    bound = alternative_length_bound(A.n)
    if len(w) <= bound:
        raise TooShort(
            f"no alternative for a word of length {len(w)} (guaranteed only above {bound})",
            length=len(w), bound=bound)
    raise AssertionError("alternative word missing above the guaranteed length")  # pragma: no cover


@dataclass(frozen=True)
class WordTriple:
    """Words ``w0: m0 -> t0`` and distinct ``w1, w2: j0 -> t0`` of equal length."""

    j0: int
    t0: int
    m0: int
    w0: Word
    w1: Word
    w2: Word

    @property
    def m1(self) -> int:
        return len(self.w0)

    @property
    def m2(self) -> int:
        return len(self.w1)

    def block(self, bit: int) -> Word:
        return self.w2 if bit else self.w1


def find_word_triple(A: TransitionMatrix, j0: int) -> WordTriple:
    """Junction words for the scrambled-set itineraries.

    ``t0`` and ``m0`` are the smallest symbols with ``a[t0, j0] = a[j0, m0] = 1``;
    ``w0`` is the shortest (then lexicographically smallest) word ``m0 -> t0``;
    ``(w1, w2)`` are the two smallest words ``j0 -> t0`` at the least length
    admitting two of them.
    """
    _require_hypothesis(A)
    _check_symbols(A, j0)
    t0 = next(t for t in A.symbols if A.edge(t, j0))
    m0 = next(m for m in A.symbols if A.edge(j0, m))
    w0 = find_long_word(A, m0, t0, 0)
    limit = alternative_length_bound(A.n) + 1
    for length in range(2, limit + 1):
        if power_entry(A, length - 1, j0, t0) >= 2:
            layers = _reach_layers(A, t0, length - 1)
            w1 = _smallest_word(A, length, j0, t0, layers)
            w2 = _next_word(A, w1, layers)
            return WordTriple(j0=j0, t0=t0, m0=m0, w0=w0, w1=w1, w2=w2)
    raise AssertionError("no word pair below the guaranteed length")  # pragma: no cover
