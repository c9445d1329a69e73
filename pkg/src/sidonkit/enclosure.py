"""Certified interval arithmetic over exact rationals.

An Enclosure is a closed interval [lo, hi] of Fractions guaranteed to contain
the exact real value it stands for.  Field operations are exact (no rounding
is ever needed, so containment is trivially preserved); irrational values
enter only through the elementary routines below, each of which brackets its
result with explicit series/remainder bounds:

  - pi: Machin's formula with alternating arctangent series,
  - sqrt and q-th roots: integer isqrt/iroot on scaled numerators,
  - ln: argument reduction to [2/3, 4/3] plus the atanh series with a
    geometric tail bound (ln 2 = 2 atanh(1/3)),
  - exp: reduction by multiples of ln 2 plus the Taylor series with a
    factorial tail bound; tanh is derived from exp.

dyadic() rounds outward onto the 2^-bits grid to keep denominators bounded
in long summations.  All decimal rendering is outward: lo floors, hi ceils.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Union

Rational = Union[int, Fraction]

DEFAULT_BITS = 128


class PrecisionError(ArithmeticError):
    """A requested certified width could not be achieved."""


class Enclosure:
    __slots__ = ("lo", "hi")

    def __init__(self, lo: Rational, hi: Rational):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError(f"invalid enclosure: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Enclosure is immutable")

    @classmethod
    def exact(cls, q: Rational) -> "Enclosure":
        q = Fraction(q)
        return cls(q, q)

    # -- queries ------------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q: Rational) -> bool:
        return self.lo <= q <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __repr__(self) -> str:
        return f"Enclosure({self.lo}, {self.hi})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Enclosure) and self.lo == other.lo
                and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- exact interval arithmetic -------------------------------------------

    @staticmethod
    def _coerce(x) -> "Enclosure":
        if isinstance(x, Enclosure):
            return x
        return Enclosure.exact(x)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other) -> "Enclosure":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        corners = (self.lo * o.lo, self.lo * o.hi,
                   self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(corners), max(corners))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure straddles zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Enclosure":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other) * self.reciprocal()

    # -- rounding -------------------------------------------------------------

    def dyadic(self, bits: int) -> "Enclosure":
        """Round outward onto the grid of multiples of 2^-bits."""
        scale = 1 << bits
        lo = Fraction(self.lo.numerator * scale // self.lo.denominator, scale)
        hi_num = -((-self.hi.numerator * scale) // self.hi.denominator)
        return Enclosure(lo, Fraction(hi_num, scale))

    def sqrt(self, bits: int = DEFAULT_BITS) -> "Enclosure":
        if self.lo < 0:
            raise ValueError("sqrt of an interval reaching below zero")
        return Enclosure(sqrt_enclosure(self.lo, bits).lo,
                         sqrt_enclosure(self.hi, bits).hi)

    # -- rendering --------------------------------------------------------------

    def render(self, digits: int = 12) -> str:
        """Outward decimal string, e.g. '0.000946_9 <= x <= 0.000947_0'
        (the digit after the underscore is the rounded position)."""
        return (f"{decimal_str(self.lo, digits, 'floor')}"
                f" <= x <= {decimal_str(self.hi, digits, 'ceil')}")

    def to_json(self, digits: int = 12) -> dict:
        return {
            "lo": decimal_str(self.lo, digits, "floor"),
            "hi": decimal_str(self.hi, digits, "ceil"),
            "digits": digits,
            "exact": self.is_exact,
        }


def decimal_str(q: Fraction, digits: int, direction: str) -> str:
    """Directed decimal rendering with the last digit marked by '_'."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10 ** digits
    if direction == "floor":
        scaled = q.numerator * scale // q.denominator
    elif direction == "ceil":
        scaled = -((-q.numerator * scale) // q.denominator)
    else:
        raise ValueError("direction must be floor or ceil")
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    head, tail = s[:-digits], s[-digits:]
    return f"{sign}{head}.{tail[:-1]}_{tail[-1]}"


# ---------------------------------------------------------------------------
# integer roots
# ---------------------------------------------------------------------------

def iroot(m: int, q: int) -> int:
    """floor(m ** (1/q)) for m >= 0, q >= 1, exact."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if q == 1 or m in (0, 1):
        return m
    if q == 2:
        return isqrt(m)
    r = 1 << -(-m.bit_length() // q)  # >= true root
    while True:
        nr = ((q - 1) * r + m // r ** (q - 1)) // q
        if nr >= r:
            break
        r = nr
    while r ** q > m:
        r -= 1
    while (r + 1) ** q <= m:
        r += 1
    return r


def sqrt_enclosure(x: Rational, bits: int = DEFAULT_BITS) -> Enclosure:
    return root_enclosure(x, 2, bits)


def root_enclosure(x: Rational, q: int, bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of x ** (1/q) for x >= 0, width <= 2^-bits; exact when the
    root is representable on the dyadic grid."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("root of a negative value")
    scale = 1 << bits
    m = (x.numerator << (q * bits)) // x.denominator
    r = iroot(m, q)
    lo = Fraction(r, scale)
    if lo ** q == x:
        return Enclosure(lo, lo)
    return Enclosure(lo, Fraction(r + 1, scale))


# ---------------------------------------------------------------------------
# elementary constants and functions
# ---------------------------------------------------------------------------

def _atan_recip(q: int, bits: int) -> Enclosure:
    # arctan(1/q) by the alternating series; consecutive partial sums bracket
    x = Fraction(1, q)
    term = x
    total = Fraction(0)
    k = 0
    limit = Fraction(1, 1 << (bits + 8))
    prev = None
    while True:
        total += term if k % 2 == 0 else -term
        if term < limit and prev is not None:
            lo, hi = (total, prev) if k % 2 == 1 else (prev, total)
            return Enclosure(min(lo, hi), max(lo, hi))
        prev = total
        k += 1
        term = x ** (2 * k + 1) / (2 * k + 1)


@lru_cache(maxsize=None)
def pi_enclosure(bits: int = DEFAULT_BITS) -> Enclosure:
    """pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    work = bits + 16
    a = _atan_recip(5, work)
    b = _atan_recip(239, work)
    return (Enclosure.exact(16) * a - Enclosure.exact(4) * b).dyadic(bits + 8)


def _atanh_enclosure(y: Fraction, bits: int) -> Enclosure:
    """atanh(y) for |y| < 1/2 via the positive series with geometric tail."""
    if y == 0:
        return Enclosure.exact(0)
    neg = y < 0
    y = abs(y)
    if y >= Fraction(1, 2):
        raise ValueError("atanh argument reduction failed")
    total = Fraction(0)
    k = 0
    limit = Fraction(1, 1 << (bits + 8))
    y2 = y * y
    power = y
    while True:
        term = power / (2 * k + 1)
        total += term
        k += 1
        power *= y2
        nxt = power / (2 * k + 1)
        if nxt < limit:
            tail = nxt / (1 - y2)
            enc = Enclosure(total, total + tail)
            return -enc if neg else enc


@lru_cache(maxsize=None)
def ln2_enclosure(bits: int = DEFAULT_BITS) -> Enclosure:
    return (Enclosure.exact(2)
            * _atanh_enclosure(Fraction(1, 3), bits + 8)).dyadic(bits + 8)


def _ln_point(x: Fraction, bits: int) -> Enclosure:
    if x <= 0:
        raise ValueError("ln of a non-positive value")
    # reduce x = 2^e * m with m in [2/3, 4/3]
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    while m > Fraction(4, 3):
        m /= 2
        e += 1
    while m < Fraction(2, 3):
        m *= 2
        e -= 1
    y = (m - 1) / (m + 1)  # |y| <= 1/5
    enc = Enclosure.exact(2) * _atanh_enclosure(y, bits + 8)
    if e:
        enc = enc + Enclosure.exact(e) * ln2_enclosure(bits + 8)
    return enc


def ln_enclosure(x: Union[Rational, Enclosure],
                 bits: int = DEFAULT_BITS) -> Enclosure:
    if isinstance(x, Enclosure):
        return Enclosure(_ln_point(x.lo, bits).lo, _ln_point(x.hi, bits).hi)
    return _ln_point(Fraction(x), bits)


def _exp_point(t: Fraction, bits: int) -> Enclosure:
    """exp(t) for |t| <= 3/5 via Taylor with factorial tail bound."""
    if abs(t) > Fraction(3, 5):
        raise ValueError("exp argument reduction failed")
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    limit = Fraction(1, 1 << (bits + 8))
    while True:
        k += 1
        term *= t / k
        total += term
        nxt = abs(term) * abs(t) / (k + 1)
        if nxt < limit:
            tail = 2 * nxt  # geometric with ratio |t|/(k+2) <= 1/2
            return Enclosure(total - tail, total + tail)


def exp_enclosure(x: Union[Rational, Enclosure],
                  bits: int = DEFAULT_BITS) -> Enclosure:
    if isinstance(x, Enclosure):
        return Enclosure(exp_enclosure(x.lo, bits).lo,
                         exp_enclosure(x.hi, bits).hi)
    x = Fraction(x)
    # x = n ln2 + r with |r| small; the float estimate only picks n
    n = round(float(x) / 0.6931471805599453)
    ln2 = ln2_enclosure(bits + 8)
    r = Enclosure.exact(x) - Enclosure.exact(n) * ln2
    if not (-Fraction(3, 5) <= r.lo and r.hi <= Fraction(3, 5)):
        raise PrecisionError("exp reduction out of range")
    core = Enclosure(_exp_point(r.lo, bits).lo, _exp_point(r.hi, bits).hi)
    two_n = Fraction(1 << n) if n >= 0 else Fraction(1, 1 << -n)
    return core * Enclosure.exact(two_n)


def tanh_enclosure(x: Union[Rational, Enclosure],
                   bits: int = DEFAULT_BITS) -> Enclosure:
    """tanh(x) = 1 - 2 / (exp(2x) + 1)."""
    x = Enclosure._coerce(x)
    e = exp_enclosure(x * Enclosure.exact(2), bits)
    return Enclosure.exact(1) - Enclosure.exact(2) / (e + Enclosure.exact(1))


def rational_power_enclosure(base: Rational, alpha: Fraction,
                             bits: int = DEFAULT_BITS) -> Enclosure:
    """base ** alpha for base > 0 and rational alpha; exact for integer
    alpha, otherwise via integer q-th roots (width <= ~2^-bits)."""
    base = Fraction(base)
    alpha = Fraction(alpha)
    if base <= 0:
        raise ValueError("base must be positive")
    p, q = alpha.numerator, alpha.denominator
    if p < 0:
        return rational_power_enclosure(1 / base, -alpha, bits)
    if q == 1:
        return Enclosure.exact(base ** p)
    return root_enclosure(base ** p, q, bits)


def reciprocal_power_enclosure(s: int, alpha: Fraction,
                               bits: int = DEFAULT_BITS) -> Enclosure:
    """s ** (-alpha) for a positive integer s; exact when alpha is a
    positive integer."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    return rational_power_enclosure(Fraction(s), -Fraction(alpha), bits)
