from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sidonkit.enclosure import (Enclosure, decimal_str, exp_enclosure, iroot,
                                ln2_enclosure, ln_enclosure, pi_enclosure,
                                rational_power_enclosure,
                                reciprocal_power_enclosure, root_enclosure,
                                sqrt_enclosure, tanh_enclosure)

mpmath.mp.dps = 120  # ~4x the default 128-bit working precision

fractions = st.fractions(min_value=Fraction(-50), max_value=Fraction(50),
                         max_denominator=10 ** 6)
pos_fractions = st.fractions(min_value=Fraction(1, 10 ** 6),
                             max_value=Fraction(10 ** 6),
                             max_denominator=10 ** 6)


def to_frac(x: mpmath.mpf) -> Fraction:
    return Fraction(*mpmath.libmp.to_rational(x._mpf_))


class TestCore:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Enclosure(1, 0)

    def test_exact_arithmetic_is_containment_free(self):
        a = Enclosure(Fraction(1, 3), Fraction(1, 2))
        b = Enclosure(Fraction(-2), Fraction(5))
        c = (a + b) * a - b / Enclosure.exact(7)
        assert c.lo <= (Fraction(1, 3) + Fraction(-2)) * Fraction(1, 3) \
            - Fraction(5, 7) <= c.hi

    @given(fractions, fractions, fractions, fractions)
    @settings(max_examples=60, deadline=None)
    def test_mul_contains_products(self, a, b, c, d):
        x = Enclosure(min(a, b), max(a, b))
        y = Enclosure(min(c, d), max(c, d))
        z = x * y
        for u in (x.lo, x.hi, x.mid):
            for v in (y.lo, y.hi, y.mid):
                assert z.lo <= u * v <= z.hi

    def test_reciprocal_rejects_zero_straddle(self):
        with pytest.raises(ZeroDivisionError):
            Enclosure(-1, 1).reciprocal()

    def test_dyadic_outward(self):
        e = Enclosure(Fraction(1, 3), Fraction(2, 3)).dyadic(8)
        assert e.lo <= Fraction(1, 3) and e.hi >= Fraction(2, 3)
        assert e.lo.denominator <= 256 and e.hi.denominator <= 256


class TestRendering:
    def test_direction_marked_digits(self):
        e = Enclosure(Fraction("0.0009469"), Fraction("0.0009470"))
        assert e.render(7) == "0.000946_9 <= x <= 0.000947_0"

    def test_floor_and_ceil(self):
        q = Fraction(1, 3)
        assert decimal_str(q, 4, "floor") == "0.333_3"
        assert decimal_str(q, 4, "ceil") == "0.333_4"
        assert decimal_str(-q, 4, "floor") == "-0.333_4"
        assert decimal_str(-q, 4, "ceil") == "-0.333_3"

    def test_json_fields(self):
        j = Enclosure(Fraction(0), Fraction(1, 7)).to_json(5)
        assert set(j) == {"lo", "hi", "digits", "exact"}
        assert j["exact"] is False


class TestRoots:
    @given(st.integers(0, 10 ** 24), st.integers(1, 7))
    @settings(max_examples=100, deadline=None)
    def test_iroot_exact(self, m, q):
        r = iroot(m, q)
        assert r ** q <= m < (r + 1) ** q

    @given(pos_fractions)
    @settings(max_examples=60, deadline=None)
    def test_sqrt_contains(self, x):
        enc = sqrt_enclosure(x, 128)
        ref = to_frac(mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator))
        assert enc.lo <= ref * (1 + Fraction(1, 2 ** 300))
        assert enc.hi >= ref * (1 - Fraction(1, 2 ** 300))
        assert enc.width <= Fraction(1, 2 ** 128)

    def test_exact_squares(self):
        assert sqrt_enclosure(Fraction(9, 4), 64).is_exact
        assert root_enclosure(Fraction(27), 3, 64).is_exact


class TestElementary:
    @given(pos_fractions)
    @settings(max_examples=40, deadline=None)
    def test_ln_contains(self, x):
        enc = ln_enclosure(x, 128)
        ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        assert float(enc.lo) <= ref <= float(enc.hi) or \
            enc.lo <= to_frac(ref) <= enc.hi

    @given(st.fractions(min_value=Fraction(-30), max_value=Fraction(30),
                        max_denominator=10 ** 4))
    @settings(max_examples=40, deadline=None)
    def test_exp_contains(self, x):
        enc = exp_enclosure(x, 128)
        ref = to_frac(mpmath.exp(mpmath.mpf(x.numerator) / x.denominator))
        assert enc.lo <= ref <= enc.hi

    @given(st.fractions(min_value=Fraction(-20), max_value=Fraction(20),
                        max_denominator=10 ** 4))
    @settings(max_examples=40, deadline=None)
    def test_tanh_contains(self, x):
        enc = tanh_enclosure(x, 128)
        ref = to_frac(mpmath.tanh(mpmath.mpf(x.numerator) / x.denominator))
        assert enc.lo <= ref <= enc.hi

    def test_pi(self):
        enc = pi_enclosure(128)
        assert enc.lo <= to_frac(+mpmath.pi) <= enc.hi
        assert enc.width <= Fraction(1, 2 ** 128)

    def test_ln2(self):
        enc = ln2_enclosure(128)
        assert enc.lo <= to_frac(mpmath.log(2)) <= enc.hi

    def test_exp_ln_round_trip(self):
        x = Fraction(37, 11)
        enc = exp_enclosure(ln_enclosure(x, 160), 160)
        assert enc.lo <= x <= enc.hi


class TestPowers:
    def test_integer_alpha_exact(self):
        enc = reciprocal_power_enclosure(7, Fraction(3), 64)
        assert enc.is_exact and enc.lo == Fraction(1, 343)

    def test_perfect_square(self):
        enc = reciprocal_power_enclosure(4, Fraction(1, 2), 64)
        assert enc.is_exact and enc.lo == Fraction(1, 2)

    @given(st.integers(1, 10 ** 6),
           st.fractions(min_value=Fraction(1, 4), max_value=Fraction(4),
                        max_denominator=8))
    @settings(max_examples=60, deadline=None)
    def test_contains_reference(self, s, alpha):
        enc = reciprocal_power_enclosure(s, alpha, 96)
        ref = to_frac(mpmath.power(s, -mpmath.mpf(alpha.numerator)
                                   / alpha.denominator))
        # the mpmath reference itself is rounded; allow its own half-ulp
        pad = Fraction(1, 2 ** 110)
        assert enc.lo - pad <= ref <= enc.hi + pad

    def test_negative_base_rejected(self):
        with pytest.raises(ValueError):
            rational_power_enclosure(Fraction(-2), Fraction(1, 2))
