import math
from fractions import Fraction

import pytest

from sidonkit.ddc import (IMPROVED_UPPER_TARGET, SALVIA_LOWER_BOUND,
                          TAYLOR_UPPER_BOUND, BlockPlan, ConstantBlock,
                          RangeBlock, SearchBlock, admissible_c_range,
                          certified_prefix_block, ddc_upper_bound,
                          differential_plan, differential_report,
                          middle_block_bound, self_contained_report,
                          taylor_old_tail)
from sidonkit.enclosure import Enclosure
from sidonkit.rigor import TailRule, levine_constant
from sidonkit.sequences import IntegerSequence


class TestMiddleBlock:
    def test_single_term(self):
        n = 1099
        enc = middle_block_bound(n - 1, n + 1)
        ref = 1 / (n - math.sqrt(n)) ** 2
        assert abs(float(enc.hi) - ref) < 1e-15
        assert enc.lo <= enc.hi

    def test_empty_range_is_zero(self):
        enc = middle_block_bound(50, 51)
        assert enc.is_exact and enc.lo == 0

    def test_monotone_in_start(self):
        a = middle_block_bound(12, 1100)
        b = middle_block_bound(20, 1100)
        assert b.hi < a.hi

    def test_requires_index_two(self):
        with pytest.raises(ValueError):
            middle_block_bound(0, 10)

    def test_width_certified(self):
        enc = middle_block_bound(12, 1100, bits=128)
        assert enc.width < Fraction(1, 2 ** 100)


class TestDifferential:
    def test_reproduces_published_bound(self):
        rep = differential_report(Fraction("1.88"))
        assert rep.upper <= IMPROVED_UPPER_TARGET
        assert rep.mode == "differential"

    def test_admissible_range(self):
        lo, hi = admissible_c_range()
        assert lo == 0 and hi < Fraction("1.9")
        # boundary c reproduces the bound; slightly above it does not
        assert differential_report(hi).upper <= IMPROVED_UPPER_TARGET
        above = hi + Fraction(1, 100)
        if above < Fraction("1.9"):
            assert differential_report(above).upper > IMPROVED_UPPER_TARGET

    def test_smaller_c_still_admissible(self):
        for c in ("0.5", "1.0", "1.5", "1.8"):
            assert differential_report(Fraction(c)).upper \
                <= IMPROVED_UPPER_TARGET

    def test_blocks_marked_external(self):
        rep = differential_report(Fraction("1.88"))
        externals = [b for b in rep.blocks if b.external]
        assert len(externals) == 1
        assert "Taylor" in externals[0].provenance
        assert len(rep.blocks) == 2  # merged head + tail

    def test_c_validation(self):
        with pytest.raises(ValueError):
            taylor_old_tail(Fraction("1.95"))
        with pytest.raises(ValueError):
            taylor_old_tail(Fraction(0))


class TestPlanValidation:
    def test_contiguity_enforced(self):
        with pytest.raises(ValueError):
            BlockPlan(SearchBlock(12, 300), RangeBlock(14, 1099),
                      TailRule.lindstrom_sharp(1100))
        with pytest.raises(ValueError):
            BlockPlan(SearchBlock(12, 300), RangeBlock(13, 1099),
                      TailRule.lindstrom_sharp(1200))
        BlockPlan(SearchBlock(12, 300), RangeBlock(13, 1099),
                  TailRule.lindstrom_sharp(1100))

    def test_levine_cannot_be_a_block_tail(self):
        with pytest.raises(ValueError):
            BlockPlan(SearchBlock(12, 300), RangeBlock(13, 1099),
                      TailRule.levine())

    def test_constant_blocks(self):
        plan = BlockPlan(
            ConstantBlock(Enclosure(Fraction(0), Fraction(2)), "external", (1, 9)),
            None, TailRule.lindstrom_sharp(10))
        rep = ddc_upper_bound(plan)
        assert rep.bound.hi > 2


class TestPrefixBlock:
    def test_small_sweep(self):
        res = certified_prefix_block(4, 40)
        # best 4-element set is {1,2,4,8}; the sweep cannot dip below it
        assert res.best_set.elements == (1, 2, 4, 8)
        assert res.bound.lo == Fraction(15, 8)
        assert res.bound.hi >= res.bound.lo
        assert res.cap_sufficient and res.exact

    def test_cap_too_small_flagged(self):
        # cap 8 forces the sweep maximum to a smaller j
        res = certified_prefix_block(4, 8)
        assert res.bound.hi >= Fraction(15, 8)


class TestAssembly:
    def test_small_self_contained(self):
        rep = self_contained_report(k=8, tail_start=200, value_cap=60)
        assert rep.upper < levine_constant().hi
        assert rep.bound.lo == SALVIA_LOWER_BOUND
        names = [b.name for b in rep.blocks]
        assert names == ["block1[1..8]", "block2[9..199]", "tail[200..)"]
        assert not any(b.external for b in rep.blocks)

    def test_witness_lower_bound(self, mc100):
        rep = self_contained_report(k=4, tail_start=100, value_cap=40,
                                    witness=mc100)
        expected = sum(Fraction(1, s) for s in mc100.elements)
        assert rep.bound.lo == expected
        assert rep.bound.lo <= rep.bound.hi

    def test_soundness_chain(self, mc1099):
        # every computed Sidon witness stays below every assembled bound
        witness_sum = sum(Fraction(1, s) for s in mc1099.elements)
        for rep in (differential_report(Fraction("1.88")),
                    self_contained_report(k=4, tail_start=100, value_cap=40)):
            assert witness_sum <= rep.upper

    def test_improvement_ordering(self):
        # sharp < weak < offset-quadratic tails at a matching start index
        # (an index-n tail start is a sound value-n start since s_n >= n)
        sharp = self_contained_report(k=4, tail_start=200,
                                      value_cap=40).upper
        plan_weak = BlockPlan(SearchBlock(4, 40), RangeBlock(5, 199),
                              TailRule.lindstrom_weak(200))
        weak = ddc_upper_bound(plan_weak).upper
        plan_off = BlockPlan(SearchBlock(4, 40), RangeBlock(5, 199),
                             TailRule.offset_quadratic(200))
        off = ddc_upper_bound(plan_off).upper
        assert sharp < weak < off

    def test_degenerate_levine_plan(self):
        # no blocks at all: the whole series under the levine constant
        from sidonkit.rigor import series_enclosure
        res = series_enclosure(IntegerSequence(()), 1, TailRule.levine())
        assert res.enclosure.hi == levine_constant().hi
