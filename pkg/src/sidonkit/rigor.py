"""Certified reciprocal power sums and proven tail bounds.

Tail rules (each gives an upper bound on a reciprocal tail over *any* Sidon
sequence, returned as an Enclosure [0, hi]):

  - levine: the full-series bound from s_k >= 1 + k(k+1)/2 (0-based),
    i.e. the constant sum(1/(1 + k(k+1)/2)), about 2.3736.
  - offset-quadratic(n): pi/sqrt(2n) bounds the sum of 1/s over elements
    >= n, via s_k >= n + k(k+1)/2 and an integral comparison.  The constant
    follows that published derivation; see the docstring of tail_upper.
  - lindstrom-weak(N): 2/(N - sqrt(N)) bounds sum_{k>=N} 1/s_k (1-based
    indexing), from the element bound s_k > (k - sqrt(k))^2.
  - lindstrom-sharp(N): the sharpened form 2 ln(1-1/sqrt(N)) + 2/(sqrt(N)-1),
    i.e. the integral of (x - sqrt(x))^-2 from N.  This is the published
    derivation and the default.  Note that comparing the sum against the
    bare integral drops the Euler-Maclaurin half-term (about
    1/(2(N-sqrt(N))^2), some 4.4e-7 at N=1100); form="certified" instead
    uses min(weak, first term + integral), which follows from the element
    bound alone with no integral-comparison slack.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .enclosure import (DEFAULT_BITS, Enclosure, PrecisionError,
                        ln_enclosure, pi_enclosure,
                        reciprocal_power_enclosure, sqrt_enclosure)
from .sequences import SIDON, IntegerSequence, sumset_cover, verify

TAIL_RULES = ("levine", "offset-quadratic", "lindstrom-weak",
              "lindstrom-sharp")


@dataclass(frozen=True)
class TailRule:
    """Selector plus parameter for a proven reciprocal-tail upper bound."""

    rule: str
    n: Optional[int] = None
    form: str = "integral"  # lindstrom-sharp only: "integral" | "certified"

    def __post_init__(self):
        if self.rule not in TAIL_RULES:
            raise ValueError(f"unknown tail rule {self.rule!r}")
        if self.rule == "levine":
            if self.n is not None:
                raise ValueError("levine takes no parameter")
        else:
            if self.n is None or self.n < 1:
                raise ValueError(f"{self.rule} needs a parameter n >= 1")
        if self.rule.startswith("lindstrom") and self.n < 2:
            raise ValueError(f"{self.rule} needs N >= 2 (its denominator "
                             f"N - sqrt(N) vanishes at N = 1)")
        if self.form not in ("integral", "certified"):
            raise ValueError("form must be 'integral' or 'certified'")

    @classmethod
    def levine(cls) -> "TailRule":
        return cls("levine")

    @classmethod
    def offset_quadratic(cls, n: int) -> "TailRule":
        return cls("offset-quadratic", n)

    @classmethod
    def lindstrom_weak(cls, n: int) -> "TailRule":
        return cls("lindstrom-weak", n)

    @classmethod
    def lindstrom_sharp(cls, n: int, form: str = "integral") -> "TailRule":
        return cls("lindstrom-sharp", n, form)

    def describe(self) -> str:
        if self.rule == "levine":
            return "levine: sum of 1/(1 + k(k+1)/2) over k >= 0"
        if self.rule == "offset-quadratic":
            return f"offset-quadratic: pi/sqrt(2n) at n = {self.n}"
        if self.rule == "lindstrom-weak":
            return f"lindstrom-weak: 2/(N - sqrt(N)) at N = {self.n}"
        return (f"lindstrom-sharp({self.form}): from s_k > (k - sqrt(k))^2 "
                f"at N = {self.n}")


_LEVINE_TERMS = 1 << 18


def _levine_constant(bits: int) -> Enclosure:
    """sum_{k>=0} 1/(1 + k(k+1)/2) = sum 2/(k^2+k+2), summed exactly with
    integer directed rounding; tail bracketed by telescoping
    2/(M+1) <= sum_{k>=M} 2/(k^2+k+2) <= 2/M."""
    work = bits + 16
    scale = 1 << work
    top = 2 << work
    acc_lo = 0
    acc_hi = 0
    m = _LEVINE_TERMS
    for k in range(m):
        d = k * k + k + 2
        acc_lo += top // d
        acc_hi += -((-top) // d)
    lo = Fraction(acc_lo, scale) + Fraction(2, m + 1)
    hi = Fraction(acc_hi, scale) + Fraction(2, m)
    return Enclosure(lo, hi)


_levine_cache: dict[int, Enclosure] = {}


def levine_constant(bits: int = DEFAULT_BITS) -> Enclosure:
    if bits not in _levine_cache:
        _levine_cache[bits] = _levine_constant(bits)
    return _levine_cache[bits]


def levine_closed_form(bits: int = DEFAULT_BITS) -> Enclosure:
    """2 pi / sqrt(7) * tanh(sqrt(7) pi / 2), the closed form of the
    levine constant."""
    from .enclosure import tanh_enclosure
    work = bits + 24
    pi = pi_enclosure(work)
    s7 = sqrt_enclosure(7, work)
    return (Enclosure.exact(2) * pi / s7
            * tanh_enclosure(s7 * pi / Enclosure.exact(2), work))


def _lindstrom_integral(n: int, bits: int) -> Enclosure:
    # 2 ln(1 - 1/sqrt(N)) + 2/(sqrt(N) - 1), the integral of (x - sqrt(x))^-2
    work = bits + 24
    rt = sqrt_enclosure(n, work)
    u = Enclosure.exact(1) - Enclosure.exact(1) / rt
    return (Enclosure.exact(2) * ln_enclosure(u, work)
            + Enclosure.exact(2) / (rt - Enclosure.exact(1)))


def _lindstrom_weak_value(n: int, bits: int) -> Enclosure:
    work = bits + 24
    rt = sqrt_enclosure(n, work)
    return Enclosure.exact(2) / (Enclosure.exact(n) - rt)


def tail_upper(rule: TailRule, bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure [0, hi] with hi a proven upper bound for the rule's tail.

    offset-quadratic note: the constant pi/sqrt(2n) is the published integral
    comparison for sum 1/(n + k(k+1)/2); the comparison is asymptotic in
    nature (the series exceeds the bare integral by O(n^-3/2)), and the rule
    reproduces the published constant rather than resumming the series.
    """
    work = bits + 24
    if rule.rule == "levine":
        hi = levine_constant(bits).hi
    elif rule.rule == "offset-quadratic":
        hi = (pi_enclosure(work) / sqrt_enclosure(2 * rule.n, work)).hi
    elif rule.rule == "lindstrom-weak":
        hi = _lindstrom_weak_value(rule.n, bits).hi
    else:  # lindstrom-sharp
        integral = _lindstrom_integral(rule.n, bits)
        if rule.form == "integral":
            hi = integral.hi
        else:
            # certified: first term + integral from N, capped by the weak
            # form; avoids the sum-vs-integral half-term slack entirely
            rt = sqrt_enclosure(rule.n, work)
            den = Enclosure.exact(rule.n) - rt
            first = (Enclosure.exact(1) / (den * den)).hi
            hi = min(first + integral.hi,
                     _lindstrom_weak_value(rule.n, bits).hi)
    return Enclosure(Fraction(0), hi).dyadic(bits + 16)


# ---------------------------------------------------------------------------
# partial sums and two-block series enclosures
# ---------------------------------------------------------------------------

def partial_power_sum(seq: IntegerSequence, alpha: Union[int, Fraction],
                      k: Optional[int] = None,
                      bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of sum_{i<=k} s_i^(-alpha); exact (zero width) for positive
    integer alpha, otherwise width <= 2^-bits."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if k is None:
        k = len(seq)
    if not 0 <= k <= len(seq):
        raise ValueError(f"k={k} out of range for a {len(seq)}-term sequence")
    elements = seq.elements[:k]
    if alpha.denominator == 1:
        a = alpha.numerator
        total = _balanced([Fraction(1, s ** a) for s in elements])
        return Enclosure.exact(total)
    if k == 0:
        return Enclosure.exact(0)
    work = bits + max(k.bit_length(), 1) + 4
    scale = 1 << work
    acc_lo = 0
    acc_hi = 0
    for s in elements:
        enc = reciprocal_power_enclosure(s, alpha, work)
        acc_lo += enc.lo.numerator * scale // enc.lo.denominator
        acc_hi += -((-enc.hi.numerator * scale) // enc.hi.denominator)
    out = Enclosure(Fraction(acc_lo, scale), Fraction(acc_hi, scale))
    if out.width > Fraction(1, 1 << bits):
        raise PrecisionError(
            f"could not certify width 2^-{bits} (got {float(out.width)})")
    return out


def _balanced(terms: list) -> Fraction:
    if not terms:
        return Fraction(0)
    while len(terms) > 1:
        terms = [terms[i] + terms[i + 1] if i + 1 < len(terms) else terms[i]
                 for i in range(0, len(terms), 2)]
    return terms[0]


@dataclass(frozen=True)
class SeriesEnclosure:
    """Two-block enclosure: exact prefix sum + proven tail bound.

    The upper side covers sum(1/s) of every Sidon superset of the prefix:
    elements inserted into gaps below max(prefix) are covered by the gap
    term (a sum over the still-extendable values, empty for saturated
    prefixes such as greedy outputs), and elements beyond the prefix are
    covered by the tail rule at index len(prefix)+1 / value max(prefix)+1.
    """

    enclosure: Enclosure
    partial: Enclosure
    gap_upper: Fraction
    gap_values: tuple[int, ...]
    tail: Enclosure
    rule: TailRule


def series_enclosure(prefix: IntegerSequence, alpha: Union[int, Fraction],
                     rule: TailRule, bits: int = DEFAULT_BITS,
                     check_prefix: bool = True) -> SeriesEnclosure:
    alpha = Fraction(alpha)
    if alpha != 1:
        raise ValueError("tail rules are proven for alpha = 1 only")
    if check_prefix and not verify(prefix, SIDON):
        raise ValueError("prefix is not a Sidon sequence")
    k = len(prefix)
    if rule.rule == "levine":
        if k != 0:
            raise ValueError("the levine rule bounds the whole series; "
                             "use an empty prefix")
    elif rule.rule == "offset-quadratic":
        if rule.n != prefix.max_element + 1:
            raise ValueError(
                f"offset-quadratic must start at max(prefix)+1 = "
                f"{prefix.max_element + 1}, got {rule.n}")
    else:
        if rule.n != k + 1:
            raise ValueError(f"{rule.rule} must start at index len(prefix)+1 "
                             f"= {k + 1}, got {rule.n}")
    partial = partial_power_sum(prefix, alpha, k, bits)
    gap_values: tuple[int, ...] = ()
    gap = Fraction(0)
    if k:
        gap_values = sumset_cover(prefix, prefix.max_element)
        gap = _balanced([Fraction(1, m) for m in gap_values])
    tail = tail_upper(rule, bits)
    enc = Enclosure(partial.lo, partial.hi + gap + tail.hi)
    return SeriesEnclosure(enc, partial, gap, gap_values, tail, rule)


def first_crossing_index(seq: IntegerSequence, threshold: Fraction,
                         alpha: int = 1) -> Optional[int]:
    """Smallest k with sum_{i<=k} s_i^(-alpha) > threshold, confirmed with
    exact arithmetic; None when even the full sum stays below."""
    threshold = Fraction(threshold)
    arr = seq.as_array.astype(np.float64)
    cum = np.cumsum(arr ** (-float(alpha)))
    candidates = np.flatnonzero(cum > float(threshold) - 1e-9)
    if candidates.size == 0:
        return None
    k = int(candidates[0]) + 1
    # exact confirmation, shifting to neighbours if the float scan was off
    while k <= len(seq) and partial_power_sum(seq, alpha, k).lo <= threshold:
        k += 1
    if k > len(seq):
        return None
    while k > 1 and partial_power_sum(seq, alpha, k - 1).lo > threshold:
        k -= 1
    return k


# ---------------------------------------------------------------------------
# element lower bounds
# ---------------------------------------------------------------------------

def exceeds_lindstrom_floor(s: int, n: int) -> bool:
    """Exact test of s > (n - sqrt(n))^2, i.e. 2 n sqrt(n) > n^2 + n - s."""
    rhs = n * n + n - s
    if rhs < 0:
        return True
    return 4 * n ** 3 > rhs * rhs


def levine_floor(n: int) -> int:
    """Minimal possible value of the n-th element (0-based) of a Sidon
    sequence: 1 + n(n+1)/2."""
    return 1 + n * (n + 1) // 2


def check_element_bounds(seq: IntegerSequence) -> bool:
    """Both element lower bounds on every term: s_n > (n - sqrt(n))^2
    (1-based) and s_n >= 1 + n(n+1)/2 (0-based)."""
    for i, s in enumerate(seq.elements):
        if not exceeds_lindstrom_floor(s, i + 1):
            return False
        if s < levine_floor(i):
            return False
    return True
