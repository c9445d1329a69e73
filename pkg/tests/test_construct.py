import math

import numpy as np
import pytest

from sidonkit import construct
from sidonkit.construct import (GreedySpec, ResourceLimitError, greedy,
                                mian_chowla, preset, saturate,
                                saturate_default, saturation_cap, zhang)
from sidonkit.sequences import (SIDON, SUM_FREE, IntegerSequence, PatternKind,
                                extendable_values, sumset_cover, verify)

MIAN_CHOWLA_10 = (1, 2, 4, 8, 13, 21, 31, 45, 66, 81)


class TestGreedy:
    def test_mian_chowla_first_10(self):
        assert mian_chowla(10).elements == MIAN_CHOWLA_10

    def test_single_term(self):
        assert mian_chowla(1).elements == (1,)

    def test_sum_free_greedy(self):
        got = greedy(GreedySpec(pattern=SUM_FREE, count=5))
        assert got.elements == (1, 3, 5, 7, 9)

    def test_seed_contained_and_pattern_kept(self):
        seed = IntegerSequence.of((3, 17))
        out = greedy(GreedySpec(pattern=SIDON, seed=seed, count=12))
        assert set(seed.elements) <= set(out.elements)
        assert verify(out, SIDON) and len(out) == 12

    def test_invalid_seed_rejected(self):
        with pytest.raises(ValueError):
            GreedySpec(pattern=SIDON, seed=IntegerSequence.of((1, 2, 3)),
                       count=5)

    def test_stop_conditions_exclusive(self):
        with pytest.raises(ValueError):
            GreedySpec(pattern=SIDON, count=5, value_cap=10)
        with pytest.raises(ValueError):
            GreedySpec(pattern=SIDON)

    def test_forbidden_values_skipped(self):
        out = greedy(GreedySpec(pattern=SIDON, count=5,
                                forbidden=IntegerSequence.of((1, 4))))
        assert 1 not in out and 4 not in out
        assert verify(out, SIDON)

    def test_resource_guard(self):
        with pytest.raises(ResourceLimitError):
            greedy(GreedySpec(pattern=SIDON, count=5000, max_value=1 << 16))

    def test_value_cap_stop(self):
        out = greedy(GreedySpec(pattern=SIDON, value_cap=21))
        assert out.elements == (1, 2, 4, 8, 13, 21)

    def test_cubic_growth_bound(self):
        # with an empty seed the (k+1)-th chosen value is at most k^3 + 1
        s = mian_chowla(120)
        for k, val in enumerate(s.elements):
            assert val <= k ** 3 + 1 or k == 0 and val == 1

    def test_blocking_persistence(self):
        # every skipped value was inadmissible when passed, hence stays so
        s = mian_chowla(40)
        members = set(s.elements)
        from sidonkit.sequences import make_checker
        checker = make_checker(SIDON)
        it = iter(s.elements)
        nxt = next(it)
        for m in range(1, s.max_element + 1):
            if m == nxt:
                checker.add(m)
                nxt = next(it, None)
            else:
                assert not checker.can_add(m)
        assert set(sumset_cover(s, s.max_element)) == set()

    def test_b32_greedy_growth_soft_check(self):
        pattern = PatternKind.bhg(3, 2)
        out = greedy(GreedySpec(pattern=pattern, count=40))
        assert verify(out, pattern)
        # soft growth check: fitted exponent should not exceed h+(h-1)/g
        xs = np.log(np.arange(5, 41))
        ys = np.log(np.asarray(out.elements[4:], dtype=float))
        slope = np.polyfit(xs, ys, 1)[0]
        assert slope < 3 + 2 / 2 + 0.5, f"greedy growth exponent {slope:.2f}"


class TestZhang:
    def test_forced_position(self):
        z = zhang(16)
        assert z.elements[:14] == mian_chowla(14).elements
        assert z.elements[14] == 229
        assert verify(z, SIDON)

    def test_count_guard(self):
        with pytest.raises(ValueError):
            zhang(10)

    def test_presets(self):
        assert preset("mian-chowla", 10).elements == MIAN_CHOWLA_10
        assert preset("zhang", 15).elements[14] == 229
        with pytest.raises(ValueError):
            preset("nope", 5)


class TestSaturate:
    def test_continuation_example(self):
        added = saturate(IntegerSequence.of((1, 2, 4, 8, 13)), 21, SIDON)
        assert added.elements == (21,)

    def test_empty_prefix(self):
        added = saturate(IntegerSequence(()), 3, SIDON)
        assert added.elements == (1, 2)

    def test_nothing_to_add(self):
        assert saturate(IntegerSequence.of((1,)), 1, SIDON).elements == ()

    @pytest.mark.parametrize("prefix_len", [5, 10, 20])
    def test_postcondition_saturated(self, prefix_len):
        prefix = mian_chowla(prefix_len)
        cap = max(prefix.max_element + 40, 60)
        added = saturate(prefix, cap, SIDON)
        full = IntegerSequence.of(prefix.elements + added.elements)
        assert verify(full, SIDON)
        assert sumset_cover(full, cap) == ()

    def test_sum_free_saturation(self):
        prefix = IntegerSequence.of((2,))
        added = saturate(prefix, 9, SUM_FREE)
        full = IntegerSequence.of(prefix.elements + added.elements)
        assert verify(full, SUM_FREE)
        assert extendable_values(full, 9, SUM_FREE) == ()

    def test_default_cap_value(self):
        # c = 2^(3/4)/(3 pi)^(3/2) ~ 0.0581; spot-check the ceiling
        c = 2 ** 0.75 / (3 * math.pi) ** 1.5
        for n in (13, 81, 475, 10 ** 6):
            assert saturation_cap(n) == math.ceil(c * n ** 0.75)

    def test_saturate_default(self):
        res = saturate_default(mian_chowla(10))
        full = IntegerSequence.of(mian_chowla(10).elements
                                  + res.added.elements)
        assert sumset_cover(full, res.cap) == ()
