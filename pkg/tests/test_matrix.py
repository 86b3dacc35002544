import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liyorke.errors import (
    BudgetExceeded, CountOverflow, HypothesisViolated, MatrixFileError, NonBinaryEntry, NotAdmissible,
    NotIrreducible, NotSquare, TooShort, ZeroRowOrColumn,
)
from liyorke.matrix import (
    alternative_length_bound, enumerate_words, find_alternative_word, find_long_word, find_word_triple,
    is_irreducible, matrix_power, minimal_return_time, parse_matrix_text, power_entry, validate,
)


def _matrices(max_n=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n))
        for i in range(n):  # repair zero rows/columns deterministically
            if not any(rows[i]):
                rows[i][i] = 1
        for j in range(n):
            if not any(rows[i][j] for i in range(n)):
                rows[j][j] = 1
        return validate(rows)
    return build()


class TestValidate:
    def test_examples(self):
        assert validate([[1, 1], [1, 1]]).n == 2
        assert validate([[1, 0], [0, 1]]).n == 2
        with pytest.raises(ZeroRowOrColumn) as e:
            validate([[1, 1], [0, 0]])
        assert e.value.witness == {"kind": "row", "index": 2}

    def test_other_errors(self):
        with pytest.raises(NotSquare):
            validate([[1]])
        with pytest.raises(NotSquare):
            validate([[1, 1], [1]])
        with pytest.raises(NonBinaryEntry) as e:
            validate([[1, 2], [1, 1]])
        assert (e.value.witness["row"], e.value.witness["col"]) == (1, 2)
        with pytest.raises(ZeroRowOrColumn) as e:
            validate([[1, 0], [1, 0]])
        assert e.value.witness["kind"] == "column"

    def test_numpy_and_text(self):
        A = validate(np.array([[0, 1], [1, 1]]))
        assert A.to_lists() == [[0, 1], [1, 1]]
        assert parse_matrix_text(A.to_text()) == A
        assert parse_matrix_text("# c\n2\n0 1  # row one\n1 1\n") == A

    @pytest.mark.parametrize("text,line", [("2\n1 1\n1 x\n", 3), ("2\n1 1\n", 3), ("two\n", 1), ("2\n1 1 1\n1 1\n", 2)])
    def test_malformed_file_reports_line(self, text, line):
        with pytest.raises(MatrixFileError) as e:
            parse_matrix_text(text)
        assert e.value.witness["line"] == line


class TestIrreducibility:
    def test_examples(self, ones, golden):
        assert is_irreducible(ones)
        assert not is_irreducible(validate([[1, 0], [0, 1]]))
        assert is_irreducible(golden)

    @settings(max_examples=60, deadline=None)
    @given(_matrices())
    def test_matches_power_criterion(self, A):
        expected = all(any(power_entry(A, k, i, j) > 0 for k in range(1, A.n + 1))
                       for i in A.symbols for j in A.symbols)
        assert is_irreducible(A) == expected


class TestCounting:
    def test_power_examples(self, ones, golden):
        assert power_entry(ones, 2, 1, 1) == 2
        assert power_entry(golden, 2, 1, 1) == 1
        for i, j in itertools.product((1, 2), repeat=2):
            assert power_entry(golden, 1, i, j) == golden[i, j]

    def test_power_is_exact(self, ones):
        assert power_entry(ones, 200, 1, 1) == 2 ** 199
        assert matrix_power(ones, 3) == [[4, 4], [4, 4]]
        with pytest.raises(CountOverflow):
            power_entry(ones, 70, 1, 1, cap=2 ** 63 - 1)

    def test_enumerate_examples(self, ones, golden):
        assert enumerate_words(ones, 3, 1, 1) == [(1, 1, 1), (1, 2, 1)]
        assert enumerate_words(ones, 2, 1, 2) == [(1, 2)]
        assert enumerate_words(golden, 3, 1, 2) == [(1, 2, 2)]
        assert enumerate_words(ones, 1, 1, 1) == [(1,)]
        assert enumerate_words(ones, 1, 1, 2) == []
        with pytest.raises(BudgetExceeded):
            enumerate_words(ones, 12, 1, 1, cap=100)

    @settings(max_examples=40, deadline=None)
    @given(_matrices(), st.integers(2, 7))
    def test_count_oracle(self, A, length):
        for i, j in itertools.product(A.symbols, repeat=2):
            words = enumerate_words(A, length, i, j)
            assert len(words) == power_entry(A, length - 1, i, j)
            assert words == sorted(words)
            assert all(A.is_admissible(w) and w[0] == i and w[-1] == j for w in words)


class TestReturnTime:
    def test_examples(self, ones, golden):
        assert minimal_return_time(ones, 2) == 1
        assert minimal_return_time(golden, 1) == 2
        assert minimal_return_time(validate([[0, 1], [1, 0]]), 1) == 2
        with pytest.raises(NotIrreducible):
            minimal_return_time(validate([[1, 0], [0, 1]]), 1)


class TestWordSearch:
    def test_long_word_examples(self, ones, golden):
        assert find_long_word(ones, 1, 2, 3) == (1, 1, 1, 2)
        assert find_long_word(ones, 1, 1, 0) == (1,)
        assert find_long_word(golden, 1, 1, 2) == (1, 2, 1)
        with pytest.raises(HypothesisViolated):
            find_long_word(validate([[0, 1], [1, 0]]), 1, 2, 3)

    @settings(max_examples=40, deadline=None)
    @given(_matrices(), st.data())
    def test_long_word_properties(self, A, data):
        if not is_irreducible(A) or max(A.row_sum(i) for i in A.symbols) < 2:
            return
        i, j = data.draw(st.sampled_from(A.symbols)), data.draw(st.sampled_from(A.symbols))
        length = data.draw(st.integers(0, 10))
        w = find_long_word(A, i, j, length)
        assert A.is_admissible(w) and w[0] == i and w[-1] == j and len(w) > length

    def test_alternative_examples(self, ones):
        assert alternative_length_bound(2) == 8
        assert find_alternative_word(ones, (1,) * 9) == (1, 1, 1, 1, 1, 1, 1, 2, 1)
        assert find_alternative_word(ones, (2,) * 9) == (2, 1, 1, 1, 1, 1, 1, 1, 2)
        with pytest.raises(NotAdmissible):
            find_alternative_word(validate([[0, 1], [1, 1]]), (1, 1, 1))

    def test_alternative_too_short(self):
        A = validate([[0, 1], [1, 1]])
        # (1, 2, 1) is the only word of length 3 from 1 to 1
        with pytest.raises(TooShort):
            find_alternative_word(A, (1, 2, 1))

    def test_word_triple_examples(self, ones):
        t = find_word_triple(ones, 2)
        assert (t.t0, t.m0, t.w0, t.w1, t.w2) == (1, 1, (1,), (2, 1, 1), (2, 2, 1))
        t = find_word_triple(ones, 1)
        assert (t.t0, t.m0, t.w0, t.w1, t.w2) == (1, 1, (1,), (1, 1, 1), (1, 2, 1))

    @settings(max_examples=40, deadline=None)
    @given(_matrices())
    def test_word_triple_junctions(self, A):
        if not is_irreducible(A) or max(A.row_sum(i) for i in A.symbols) < 2:
            return
        for j0 in A.symbols:
            t = find_word_triple(A, j0)
            assert t.w1 != t.w2 and len(t.w1) == len(t.w2)
            assert t.w0[0] == t.m0 and t.w1[0] == t.w2[0] == j0
            assert t.w0[-1] == t.w1[-1] == t.w2[-1] == t.t0
            assert A.edge(t.t0, j0) and A.edge(j0, t.m0)
            assert all(A.is_admissible(w) for w in (t.w0, t.w1, t.w2))
