"""Numerical probes of the indicator generating function f(t) = sum t^s.

Two lanes with different rigor:

  - Enclosure lane: eval_genfun and envelope_check work in certified
    interval arithmetic.  A finite sequence's f(t) lower-bounds the series
    of any 0/1-coefficient extension, so an envelope violation found on a
    grid is a genuine counterexample; a grid pass is evidence, not proof,
    and reports label it that way.
  - Float lane: the quadrature cross-checks (Mellin/Gamma identity, L^alpha
    probe, Wallis ratio) use scipy adaptive quadrature against stated
    tolerances of 1e-6..1e-8; these are consistency checks, not certified
    bounds.

The Mellin identity integrates sum_s u^(s-1) (-ln u)^(alpha-1) / Gamma(alpha)
over (0,1); substituting u = e^-x turns it into sum_s e^(-s x) x^(alpha-1)
on (0, inf), which moves the u=1 singularity into a smooth exponential and
is how the quadrature below is set up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma

from .enclosure import DEFAULT_BITS, Enclosure, sqrt_enclosure
from .sequences import IntegerSequence

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid: rational points strictly inside (0, 1)."""

    points: tuple[Fraction, ...]

    def __post_init__(self):
        for t in self.points:
            if not 0 < t < 1:
                raise ValueError(f"grid point {t} outside (0,1)")

    def __len__(self):
        return len(self.points)


def make_grid(count: int = 200, denominator_bits: int = 20) -> GridSpec:
    """Dyadic grid biased toward t -> 1 (where the envelope is tight):
    t_j = sin(pi/2 * j/(count+1)) snapped to the 2^-bits grid, i.e. the
    Chebyshev-node density accumulated at the right endpoint."""
    scale = 1 << denominator_bits
    pts = []
    for j in range(1, count + 1):
        t = math.sin(math.pi / 2 * j / (count + 1))
        q = Fraction(max(1, min(scale - 1, round(t * scale))), scale)
        pts.append(q)
    return GridSpec(tuple(sorted(set(pts))))


def _pow_enclosure(t: Fraction, s: int, bits: int) -> Enclosure:
    """t^s by repeated squaring with outward dyadic rounding each step."""
    work = bits + 2 * max(s.bit_length(), 1) + 8
    acc = Enclosure.exact(1)
    base = Enclosure.exact(t)
    e = s
    while e:
        if e & 1:
            acc = (acc * base).dyadic(work)
        e >>= 1
        if e:
            base = (base * base).dyadic(work)
    return acc


def eval_genfun(seq: IntegerSequence, t: Rational,
                extend_as: Optional[str] = None,
                bits: int = DEFAULT_BITS) -> Enclosure:
    """Enclosure of f(t) = sum over elements of t^s.

    extend_as=None: the exact finite sum (zero width whenever every t^s is
    representable at the working precision, e.g. dyadic t).
    extend_as="all_ones_tail": adds [0, t^(M+1)/(1-t)] with M = max(seq),
    bounding every extension of the sequence by exponents beyond M (the
    only sound over-approximation when the continuation is unknown).
    """
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError("t must lie strictly inside (0, 1)")
    if extend_as not in (None, "all_ones_tail"):
        raise ValueError("extend_as must be None or 'all_ones_tail'")
    total = Enclosure.exact(0)
    for s in seq.elements:
        total += _pow_enclosure(t, s, bits)
    if extend_as == "all_ones_tail":
        m = seq.max_element
        tail_hi = (_pow_enclosure(t, m + 1, bits)
                   / Enclosure.exact(1 - t)).hi
        total += Enclosure(Fraction(0), tail_hi)
    return total


@dataclass(frozen=True)
class EnvelopeRow:
    t: Fraction
    f: Enclosure
    envelope: Enclosure
    slack: Fraction  # certified: envelope.lo - f.hi


@dataclass(frozen=True)
class EnvelopeReport:
    rows: tuple[EnvelopeRow, ...]
    min_slack: Fraction
    violation: Optional[EnvelopeRow]

    @property
    def passed(self) -> bool:
        return self.violation is None


def envelope_check(seq: IntegerSequence, grid: GridSpec, g: int = 1,
                   bits: int = DEFAULT_BITS) -> EnvelopeReport:
    """Check f(t) <= sqrt(2 g t / (1 - t)) on every grid point (g = 1 for
    Sidon, the representation cap for B_2[g]).

    The finite sum lower-bounds the full series of any extension, so a
    violation (f.lo > envelope.hi) is a genuine counterexample; a pass on
    the grid is supporting evidence only.
    """
    rows = []
    violation = None
    min_slack: Optional[Fraction] = None
    for t in grid.points:
        f = eval_genfun(seq, t, None, bits)
        env = sqrt_enclosure(Fraction(2 * g) * t / (1 - t), bits)
        slack = env.lo - f.hi
        row = EnvelopeRow(t, f, env, slack)
        rows.append(row)
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if f.lo > env.hi and violation is None:
            violation = row
    return EnvelopeReport(tuple(rows), min_slack, violation)


# ---------------------------------------------------------------------------
# quadrature cross-checks (float lane)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MellinReport:
    integral: float
    direct: float
    discrepancy: float
    error_estimate: float
    nodes: int
    alpha: Fraction
    converged: bool


def _mellin_quadrature(elements: np.ndarray, alpha: float,
                       tol: float) -> tuple[float, float, int]:
    """(1/Gamma(a)) * integral of sum_s e^(-s x) x^(a-1) over (0, inf),
    split at x=1 so the endpoint singularity (a < 1) sits in a finite
    QAGS panel."""

    def integrand(x: float) -> float:
        return float(np.exp(-elements * x).sum()) * x ** (alpha - 1.0)

    v1, e1, info1 = integrate.quad(integrand, 0.0, 1.0, epsabs=tol,
                                   epsrel=tol, limit=200, full_output=True)[:3]
    v2, e2, info2 = integrate.quad(integrand, 1.0, np.inf, epsabs=tol,
                                   epsrel=tol, limit=200, full_output=True)[:3]
    nodes = int(info1["neval"]) + int(info2["neval"])
    return (v1 + v2) / _gamma(alpha), e1 + e2, nodes


def mellin_crosscheck(seq: IntegerSequence, alpha: Rational,
                      tol: float = 1e-10) -> MellinReport:
    """Compare the Gamma-integral representation of sum s^(-alpha) with the
    direct sum; the discrepancy must sit within the quadrature tolerance."""
    alpha = Fraction(alpha)
    if alpha <= Fraction(1, 2):
        raise ValueError("alpha must exceed 1/2")
    if len(seq) == 0:
        return MellinReport(0.0, 0.0, 0.0, 0.0, 0, alpha, True)
    a = float(alpha)
    arr = seq.as_array.astype(np.float64)
    integral, err, nodes = _mellin_quadrature(arr, a, tol)
    direct = float((arr ** (-a)).sum())
    disc = abs(integral - direct)
    return MellinReport(integral, direct, disc, err, nodes, alpha,
                        err < max(tol * 100, 1e-8))


def mellin_identity_term(s: int, alpha: Rational,
                         tol: float = 1e-12) -> tuple[float, float]:
    """Per-term identity: quadrature of e^(-s x) x^(alpha-1) / Gamma(alpha)
    over (0, inf) against s^(-alpha); returns (quadrature, reference)."""
    alpha = Fraction(alpha)
    a = float(alpha)
    arr = np.asarray([s], dtype=np.float64)
    integral, _, _ = _mellin_quadrature(arr, a, tol)
    return integral, float(s) ** (-a)


@dataclass(frozen=True)
class LalphaReport:
    value: float
    error_estimate: float
    ceiling: Optional[float]  # 2/(1 - alpha/2) for alpha < 2
    alpha: Fraction

    @property
    def within_ceiling(self) -> bool:
        return self.ceiling is None or self.value <= self.ceiling


def lalpha_probe(seq: IntegerSequence, alpha: Rational) -> LalphaReport:
    """Finite-truncation estimate of the integral of f(t)^alpha over (0,1).

    For alpha < 2 the closed-form ceiling 2/(1-alpha/2) comes from the
    pointwise envelope f(t)^alpha <= 2 (1-t)^(-alpha/2); the truncated
    probe must stay below it for Sidon input.  alpha >= 2 has no ceiling
    (the full series may fail to be square-integrable).
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = float(alpha)
    arr = seq.as_array.astype(np.float64)

    def integrand(t: float) -> float:
        return float(np.power(t, arr).sum()) ** a

    value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-11,
                                epsrel=1e-11, limit=200)
    ceiling = float(2 / (1 - alpha / 2)) if alpha < 2 else None
    return LalphaReport(value, err, ceiling, alpha)


def wallis_ratio(s: int) -> float:
    """Quadrature of the beta-type integral of t^s / sqrt(1-t) over (0,1)
    against its large-s Wallis form sqrt(pi)/sqrt(s); the ratio tends to 1.

    (The integral equals B(s+1, 1/2) = Gamma(s+1) Gamma(1/2) / Gamma(s+3/2),
    which is asymptotically sqrt(pi/s).)  Substituting t = 1 - u^2 gives the
    smooth integrand 2 (1-u^2)^s.
    """
    val, _ = integrate.quad(lambda u: 2.0 * (1.0 - u * u) ** s, 0.0, 1.0,
                            epsabs=1e-13, epsrel=1e-13, limit=200)
    return val * math.sqrt(s) / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# coefficient identities
# ---------------------------------------------------------------------------

def indicator(seq: IntegerSequence, n_max: int) -> np.ndarray:
    ind = np.zeros(n_max + 1, dtype=np.int64)
    a = seq.as_array
    ind[a[a <= n_max]] = 1
    return ind


def pair_counts_by_convolution(seq: IntegerSequence, n_max: int) -> np.ndarray:
    """Coefficients of (f^2 + f(z^2))/2 through degree n_max by direct
    polynomial convolution; equals the multiset pair representation counts."""
    ind = indicator(seq, n_max)
    conv = np.convolve(ind, ind)[:n_max + 1]
    diag = np.zeros(n_max + 1, dtype=np.int64)
    a = seq.as_array
    dd = 2 * a[2 * a <= n_max]
    diag[dd] = 1
    total = conv + diag
    assert not (total & 1).any()  # f^2 counts ordered pairs; parity is exact
    return total // 2


def sumfree_coefficients(seq: IntegerSequence, n_max: int) -> np.ndarray:
    """c_n = sum_k 1_F(k) 1_F(n-k) + (n+1) 1_F(n); a set is sum-free exactly
    when every c_n <= n+1."""
    ind = indicator(seq, n_max)
    conv = np.convolve(ind, ind)[:n_max + 1]
    weights = np.arange(n_max + 1, dtype=np.int64) + 1
    return conv + weights * ind


def sumfree_coefficient_check(seq: IntegerSequence, n_max: int) -> bool:
    c = sumfree_coefficients(seq, n_max)
    bound = np.arange(n_max + 1, dtype=np.int64) + 1
    return bool((c <= bound).all())
