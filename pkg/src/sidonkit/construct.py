"""Deterministic sequence builders.

greedy() repeatedly appends the smallest positive integer (outside the
forbidden set) whose addition preserves the pattern, until a count or
value-cap stop condition.  Because blocking is monotone (a value rejected
against a set stays rejected against every superset), a single ascending scan
with a persistent frontier implements the "smallest admissible value"
recursion exactly, including for seeded sets whose gaps have not been
scanned yet.

Presets:
  - "mian-chowla": greedy Sidon from the empty seed (1, 2, 4, 8, 13, ...).
  - "zhang": greedy for 14 terms, the 15th term forced to 229, greedy
    afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .sequences import (SIDON, IntegerSequence, PatternKind, make_checker,
                        verify)

DEFAULT_MAX_VALUE = 1 << 27  # guard for count-driven runs; ~134M candidates


class ResourceLimitError(RuntimeError):
    """Raised when a count-driven build would exceed the value guard instead
    of silently truncating."""


@dataclass(frozen=True)
class GreedySpec:
    """Specification for a greedy run.

    Exactly one of `count` (target number of elements, seed included) or
    `value_cap` (largest candidate value considered) must be set.
    """

    pattern: PatternKind
    seed: IntegerSequence = field(default_factory=lambda: IntegerSequence(()))
    count: Optional[int] = None
    value_cap: Optional[int] = None
    forbidden: IntegerSequence = field(
        default_factory=lambda: IntegerSequence(()))
    max_value: int = DEFAULT_MAX_VALUE

    def __post_init__(self):
        if (self.count is None) == (self.value_cap is None):
            raise ValueError("exactly one of count / value_cap must be given")
        if self.count is not None and self.count < len(self.seed):
            raise ValueError("count is below the seed size")
        if self.value_cap is not None and self.value_cap < 1:
            raise ValueError("value_cap must be >= 1")
        if not verify(self.seed, self.pattern):
            raise ValueError("seed violates the pattern")


class _KernelState:
    """Growable table state driving the extension kernels."""

    def __init__(self, pattern: PatternKind, seed: IntegerSequence,
                 max_value: int):
        self.pattern = pattern
        self.max_value = max_value
        self.k = 0
        self.maxe = 0
        self.frontier = 1
        cap = 1 << 16
        while cap <= seed.max_element:
            cap <<= 1
        self.cap_val = cap
        self.elems = np.zeros(1024, dtype=np.int64)
        self._alloc_tables()
        for x in seed.elements:
            self._insert_seed(x)

    def _alloc_tables(self):
        if self.pattern.is_pair:
            self.memb = np.zeros(self.cap_val, dtype=np.bool_)
            self.counts = np.zeros(2 * self.cap_val, dtype=np.uint8)
        else:
            self.memb = np.zeros(2 * self.cap_val, dtype=np.bool_)
            self.pairs = np.zeros(2 * self.cap_val, dtype=np.bool_)
            self.diffs = np.zeros(2 * self.cap_val, dtype=np.bool_)

    def _insert_seed(self, x: int):
        if self.k >= self.elems.shape[0]:
            self._grow_elems()
        el = self.elems[:self.k]
        if self.pattern.is_pair:
            self.counts[x + el] += 1
            self.counts[2 * x] += 1
        else:
            self.pairs[x + el] = True
            self.diffs[np.abs(x - el)] = True
            self.pairs[2 * x] = True
        self.memb[x] = True
        self.elems[self.k] = x
        self.k += 1
        self.maxe = max(self.maxe, x)

    def _grow_elems(self):
        bigger = np.zeros(2 * self.elems.shape[0], dtype=np.int64)
        bigger[:self.k] = self.elems[:self.k]
        self.elems = bigger

    def _grow_tables(self):
        new_cap = self.cap_val * 4
        if new_cap > self.max_value:
            if self.cap_val >= self.max_value:
                raise ResourceLimitError(
                    f"candidate values would exceed the max_value guard "
                    f"({self.max_value}); raise GreedySpec.max_value to "
                    f"continue")
            new_cap = self.max_value
        old_cap = self.cap_val
        self.cap_val = new_cap
        if self.pattern.is_pair:
            memb = np.zeros(new_cap, dtype=np.bool_)
            memb[:old_cap] = self.memb
            counts = np.zeros(2 * new_cap, dtype=np.uint8)
            counts[:2 * old_cap] = self.counts
            self.memb, self.counts = memb, counts
        else:
            for name in ("memb", "pairs", "diffs"):
                arr = np.zeros(2 * new_cap, dtype=np.bool_)
                arr[:2 * old_cap] = getattr(self, name)
                setattr(self, name, arr)

    def run(self, want_k: int, value_cap: int, forbidden: np.ndarray) -> int:
        """Scan until a stop condition; returns the kernel status."""
        while True:
            if self.pattern.is_pair:
                out = kernels.pair_extend(
                    self.elems, self.k, self.maxe, self.memb, self.counts,
                    self.pattern.pair_g, self.frontier, want_k, value_cap,
                    forbidden)
            else:
                out = kernels.sumfree_extend(
                    self.elems, self.k, self.maxe, self.memb, self.pairs,
                    self.diffs, self.frontier, want_k, value_cap, forbidden)
            self.k, self.maxe, self.frontier, status = out
            if status != kernels.NEED_GROW:
                return status
            if self.k >= self.elems.shape[0]:
                self._grow_elems()
            if self.frontier >= self.cap_val:
                self._grow_tables()

    def sequence(self) -> IntegerSequence:
        return IntegerSequence.of(int(x) for x in self.elems[:self.k])


def _greedy_checker_loop(spec: GreedySpec) -> IntegerSequence:
    # fallback for patterns without a kernel (B_h[g] with h >= 3)
    checker = make_checker(spec.pattern, spec.seed)
    forbidden = set(spec.forbidden.elements)
    members = set(spec.seed.elements)
    c = 1
    while True:
        if spec.count is not None and len(members) >= spec.count:
            break
        if spec.value_cap is not None and c > spec.value_cap:
            break
        if c > spec.max_value:
            raise ResourceLimitError(
                f"candidate values would exceed the max_value guard "
                f"({spec.max_value})")
        if c not in members and c not in forbidden and checker.can_add(c):
            checker.add(c)
            members.add(c)
        c += 1
    return IntegerSequence.of(members)


def greedy(spec: GreedySpec) -> IntegerSequence:
    """Run the greedy extension to completion; output contains the seed."""
    if not (spec.pattern.is_pair or spec.pattern.kind == "sumfree"):
        return _greedy_checker_loop(spec)
    state = _KernelState(spec.pattern, spec.seed, spec.max_value)
    forbidden = spec.forbidden.as_array
    want_k = spec.count if spec.count is not None else -1
    value_cap = spec.value_cap if spec.value_cap is not None else -1
    state.run(want_k, value_cap, forbidden)
    return state.sequence()


def saturate(prefix: IntegerSequence, cap: int,
             pattern: PatternKind = SIDON) -> IntegerSequence:
    """Greedily add minimal admissible elements <= cap until none remains;
    returns only the added elements.

    The result S' satisfies: prefix + S' matches the pattern and no value
    <= cap can still be appended (extendable_values is empty through cap).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    spec = GreedySpec(pattern=pattern, seed=prefix, value_cap=cap)
    full = greedy(spec)
    added = tuple(x for x in full.elements if x not in prefix)
    return IntegerSequence(added)


def saturation_cap(n: int, bits: int = 96) -> int:
    """ceil(c * n^(3/4)) with c = 2^(3/4) / (3 pi)^(3/2), the constant that
    balances the two error terms of the density counting argument behind the
    default saturation procedure."""
    from .enclosure import Enclosure, pi_enclosure, root_enclosure
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        # c * n^(3/4) = (8 n^3)^(1/4) / sqrt((3 pi)^3)
        num = root_enclosure(8 * n ** 3, 4, bits)
        pi3 = pi_enclosure(bits) * Enclosure.exact(3)
        val = num / (pi3 * pi3 * pi3).sqrt(bits)
        lo_c = -(-val.lo.numerator // val.lo.denominator)  # ceil of each end
        hi_c = -(-val.hi.numerator // val.hi.denominator)
        if lo_c == hi_c:
            return int(hi_c)
        bits *= 2
        if bits > 4096:
            raise ArithmeticError("saturation cap did not resolve; the "
                                  "target sits essentially on an integer")


@dataclass(frozen=True)
class SaturationResult:
    added: IntegerSequence
    cap: int


def saturate_default(prefix: IntegerSequence,
                     n: Optional[int] = None) -> SaturationResult:
    """Saturation with the default cap ceil(c * n^(3/4)); n defaults to the
    largest prefix element."""
    if n is None:
        n = prefix.max_element
    cap = saturation_cap(n)
    return SaturationResult(saturate(prefix, cap, SIDON), cap)


# ---------------------------------------------------------------------------
# named presets
# ---------------------------------------------------------------------------

ZHANG_FORCED_TERM = 229
ZHANG_FORCED_POSITION = 15


def mian_chowla(count: int, max_value: int = DEFAULT_MAX_VALUE) -> IntegerSequence:
    """First `count` terms of the greedy Sidon sequence 1, 2, 4, 8, 13, ..."""
    return greedy(GreedySpec(pattern=SIDON, count=count, max_value=max_value))


def zhang(count: int, max_value: int = DEFAULT_MAX_VALUE) -> IntegerSequence:
    """Zhang's sequence: greedy for 14 terms, 229 forced as the 15th term,
    greedy afterwards."""
    if count < ZHANG_FORCED_POSITION:
        raise ValueError(f"zhang preset needs count >= {ZHANG_FORCED_POSITION}")
    head = mian_chowla(ZHANG_FORCED_POSITION - 1, max_value=max_value)
    seed = head.with_element(ZHANG_FORCED_TERM)
    if not verify(seed, SIDON):
        raise AssertionError("forced Zhang seed is not Sidon")
    return greedy(GreedySpec(pattern=SIDON, seed=seed, count=count,
                             max_value=max_value))


PRESETS = {
    "mian-chowla": mian_chowla,
    "zhang": zhang,
}


def preset(name: str, count: int,
           max_value: int = DEFAULT_MAX_VALUE) -> IntegerSequence:
    try:
        fn = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; "
                         f"available: {sorted(PRESETS)}") from None
    return fn(count, max_value=max_value)
