import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sidonkit.sequences import (SIDON, SUM_FREE, IntegerSequence, PatternKind,
                                SequenceFormatError, can_extend, find_violation,
                                make_checker, read_sequence,
                                representation_counts, sumset_cover, verify,
                                write_sequence)

from conftest import random_subset

MIAN_CHOWLA_10 = (1, 2, 4, 8, 13, 21, 31, 45, 66, 81)


def seq(*xs):
    return IntegerSequence.of(xs)


class TestIntegerSequence:
    def test_invariants(self):
        with pytest.raises(ValueError):
            IntegerSequence((2, 1))
        with pytest.raises(ValueError):
            IntegerSequence((0, 1))
        with pytest.raises(ValueError):
            IntegerSequence((1, 1))

    def test_queries(self):
        s = seq(3, 1, 7)
        assert s.elements == (1, 3, 7)
        assert len(s) == 3 and s.max_element == 7
        assert 3 in s and 4 not in s
        assert s.prefix(2).elements == (1, 3)

    def test_empty(self):
        s = IntegerSequence(())
        assert len(s) == 0 and s.max_element == 0
        assert 1 not in s


class TestVerify:
    def test_mian_chowla_is_sidon(self):
        assert verify(seq(*MIAN_CHOWLA_10), SIDON)

    def test_smallest_counterexample(self):
        assert verify(IntegerSequence(()), SIDON)
        assert not verify(seq(1, 2, 3), SIDON)  # 1+3 = 2+2

    def test_violation_witness_names_pairs(self):
        w = find_violation(seq(1, 2, 3), SIDON)
        assert w["kind"] == "pair_sum_collision" and w["sum"] == 4
        assert sorted(w["pairs"]) == [(1, 3), (2, 2)]

    def test_sum_free(self):
        assert verify(seq(1, 3, 5, 7, 9), SUM_FREE)
        assert not verify(seq(1, 3, 4), SUM_FREE)
        # x = y permitted: 1+1 = 2
        assert not verify(seq(1, 2), SUM_FREE)
        w = find_violation(seq(1, 3, 4), SUM_FREE)
        assert (w["x"], w["y"], w["z"]) == (1, 3, 4)

    def test_b2g(self):
        assert verify(seq(1, 2, 3), PatternKind.bhg(2, 2))
        assert not verify(seq(1, 2, 3), PatternKind.bhg(2, 1))

    def test_b3g(self):
        # {1,2,3}: 1+2+3 = 2+2+2 = 6, two representations
        assert verify(seq(1, 2, 3), PatternKind.bhg(3, 2))
        assert not verify(seq(1, 2, 3), PatternKind.bhg(3, 1))


class TestCanExtend:
    def test_examples(self):
        assert can_extend(seq(1, 2, 4, 8, 13), 21, SIDON)
        assert not can_extend(seq(1, 2, 4), 6, SIDON)  # 2+6 = 4+4
        for k in (1, 5, 17):
            assert can_extend(IntegerSequence(()), k, SIDON)
            assert can_extend(IntegerSequence(()), k, SUM_FREE)
            assert can_extend(IntegerSequence(()), k, PatternKind.bhg(3, 1))

    def test_rejects_member(self):
        with pytest.raises(ValueError):
            can_extend(seq(1, 2), 2, SIDON)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_matches_verify(self, data):
        values = data.draw(st.sets(st.integers(1, 60), max_size=10))
        m = data.draw(st.integers(1, 60).filter(lambda x: x not in values))
        pattern = data.draw(st.sampled_from(
            [SIDON, SUM_FREE, PatternKind.bhg(2, 2), PatternKind.bhg(3, 2)]))
        s = IntegerSequence.of(values)
        if not verify(s, pattern):
            return
        assert can_extend(s, m, pattern) == verify(s.with_element(m), pattern)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_blocking_is_monotone(self, data):
        # once blocked, blocked for every superset along a growth chain
        base = data.draw(st.sets(st.integers(1, 50), min_size=1, max_size=6))
        extra = data.draw(st.lists(st.integers(1, 50), max_size=6))
        m = data.draw(st.integers(1, 50))
        s = IntegerSequence.of(base)
        if not verify(s, SIDON) or m in s:
            return
        blocked = not can_extend(s, m, SIDON)
        checker = make_checker(SIDON, s)
        for e in extra:
            if e != m and checker.can_add(e):
                checker.add(e)
                if blocked:
                    assert not checker.can_add(m)
                blocked = blocked or not checker.can_add(m)


class TestSidonCharacterizations:
    @given(st.sets(st.integers(1, 1000), max_size=14))
    @settings(max_examples=80, deadline=None)
    def test_sidon_iff_b21(self, values):
        s = IntegerSequence.of(values)
        assert verify(s, SIDON) == verify(s, PatternKind.bhg(2, 1))

    @given(st.sets(st.integers(1, 400), max_size=12))
    @settings(max_examples=80, deadline=None)
    def test_sidon_iff_distinct_differences(self, values):
        s = IntegerSequence.of(values)
        a = s.as_array
        diffs = [int(a[j] - a[i]) for i in range(len(a))
                 for j in range(i + 1, len(a))]
        assert verify(s, SIDON) == (len(diffs) == len(set(diffs)))

    @given(st.sets(st.integers(1, 300), max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_sidon_iff_pair_counts_below_two(self, values):
        s = IntegerSequence.of(values)
        prof = representation_counts(s, 2 * s.max_element, 2)
        assert verify(s, SIDON) == (prof.max_count() <= 1)


class TestRepresentationCounts:
    def test_direct_expansion(self):
        prof = representation_counts(seq(1, 2), 4, 2)
        assert prof.counts == (0, 0, 1, 1, 1)

    def test_powers_of_two(self):
        prof = representation_counts(seq(1, 2, 4, 8), 16, 2)
        assert set(prof.counts) <= {0, 1}

    def test_h3(self):
        prof = representation_counts(seq(1, 2, 3), 6, 3)
        assert prof[6] == 2  # {1,2,3} and {2,2,2}
        assert prof[3] == 1  # {1,1,1}

    def test_degenerate(self):
        prof = representation_counts(seq(5), 0, 2)
        assert prof.counts == (0,)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            s = random_subset(rng, 25, 0.4)
            n_max = 40
            h = int(rng.integers(2, 5))
            prof = representation_counts(s, n_max, h)
            # enumerate multisets directly
            from itertools import combinations_with_replacement
            expected = [0] * (n_max + 1)
            for combo in combinations_with_replacement(s.elements, h):
                t = sum(combo)
                if t <= n_max:
                    expected[t] += 1
            assert list(prof.counts) == expected


class TestSumsetCover:
    def test_examples(self):
        assert sumset_cover(seq(*MIAN_CHOWLA_10), 21) == ()
        assert sumset_cover(seq(1), 5) == (2, 3, 4, 5)
        assert sumset_cover(seq(1, 2, 4), 6) == ()

    @given(st.sets(st.integers(1, 40), max_size=8), st.integers(1, 50))
    @settings(max_examples=60, deadline=None)
    def test_matches_can_extend(self, values, m_max):
        s = IntegerSequence.of(values)
        if not verify(s, SIDON):
            return
        expected = tuple(m for m in range(1, m_max + 1)
                         if m not in s and can_extend(s, m, SIDON))
        assert sumset_cover(s, m_max) == expected


class TestCheckers:
    def test_clone_branches(self):
        c = make_checker(SIDON, seq(1, 2, 4))
        c2 = c.clone()
        c.add(8)
        assert c2.can_add(8)
        assert not c.can_add(8)

    def test_rejects_bad_add(self):
        c = make_checker(SIDON, seq(1, 2, 4))
        with pytest.raises(ValueError):
            c.add(6)

    def test_general_bhg_matches_verify(self):
        rng = np.random.default_rng(3)
        pattern = PatternKind.bhg(3, 2)
        for _ in range(20):
            s = random_subset(rng, 20, 0.3)
            if not verify(s, pattern):
                continue
            checker = make_checker(pattern, s)
            m = int(rng.integers(1, 25))
            if m in s:
                continue
            assert checker.can_add(m) == verify(s.with_element(m), pattern)


class TestTextFormat:
    def test_round_trip(self):
        s = seq(*MIAN_CHOWLA_10)
        buf = io.StringIO()
        write_sequence(s, buf)
        assert buf.getvalue() == "".join(f"{x}\n" for x in MIAN_CHOWLA_10)
        assert read_sequence(io.StringIO(buf.getvalue())) == s

    def test_errors_carry_line_numbers(self):
        with pytest.raises(SequenceFormatError) as ei:
            read_sequence(io.StringIO("1\nx\n"))
        assert ei.value.line == 2
        with pytest.raises(SequenceFormatError) as ei:
            read_sequence(io.StringIO("2\n1\n"))
        assert ei.value.line == 2
        with pytest.raises(SequenceFormatError) as ei:
            read_sequence(io.StringIO("1\n\n3\n"))
        assert ei.value.line == 2
        with pytest.raises(SequenceFormatError) as ei:
            read_sequence(io.StringIO("0\n"))
        assert ei.value.line == 1
