"""Sequence types and exact pattern verification.

The three supported constraint families:

  - Sidon: all pairwise sums s_i + s_j (i <= j) are distinct.  Identical to
    B_2[1]; verification results agree exactly.
  - B_h[g]: every integer has at most g representations as a multiset
    {x_1 <= ... <= x_h} of h elements (repetition allowed).
  - sum-free: no x, y, z in the set with x + y = z, where x = y is allowed
    (so {1, 2} is not sum-free).

Verification is total on valid inputs; the empty sequence satisfies every
pattern.  Incremental checking state lives in the checker classes returned
by make_checker(); checkers are single-owner, and clone() is the supported
way to branch one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, TextIO, Union

import numpy as np

from . import kernels


class SequenceFormatError(ValueError):
    """Malformed sequence text (carries the 1-based offending line number)."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PatternKind:
    """Constraint family selector: Sidon, B_h[g], or sum-free."""

    kind: str  # "sidon" | "bhg" | "sumfree"
    h: int = 2
    g: int = 1

    _KINDS = ("sidon", "bhg", "sumfree")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "bhg":
            if self.h < 2:
                raise ValueError("B_h[g] requires h >= 2")
            if not 1 <= self.g <= 254:
                raise ValueError("B_h[g] requires 1 <= g <= 254")

    @classmethod
    def sidon(cls) -> "PatternKind":
        return cls("sidon")

    @classmethod
    def bhg(cls, h: int, g: int) -> "PatternKind":
        return cls("bhg", h=h, g=g)

    @classmethod
    def sum_free(cls) -> "PatternKind":
        return cls("sumfree")

    @classmethod
    def parse(cls, text: str, h: Optional[int] = None,
              g: Optional[int] = None) -> "PatternKind":
        t = text.strip().lower().replace("_", "-")
        if t == "sidon":
            return cls.sidon()
        if t in ("sumfree", "sum-free"):
            return cls.sum_free()
        if t == "bhg":
            return cls.bhg(h if h is not None else 2, g if g is not None else 1)
        raise ValueError(f"unknown pattern {text!r}")

    @property
    def is_pair(self) -> bool:
        """True when the pattern is governed by pair sums (Sidon or B_2[g])."""
        return self.kind == "sidon" or (self.kind == "bhg" and self.h == 2)

    @property
    def pair_g(self) -> int:
        """Representation cap for pair-sum patterns (Sidon counts as g=1)."""
        return 1 if self.kind == "sidon" else self.g

    def __str__(self) -> str:
        if self.kind == "bhg":
            return f"b{self.h}[{self.g}]"
        return self.kind


SIDON = PatternKind.sidon()
SUM_FREE = PatternKind.sum_free()


@dataclass(frozen=True)
class IntegerSequence:
    """Strictly increasing finite sequence of positive integers."""

    elements: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for x in self.elements:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError(f"element {x!r} is not an integer")
            if x <= prev:
                raise ValueError(
                    f"elements must be strictly increasing positive integers; "
                    f"saw {x} after {prev}")
            prev = x

    @classmethod
    def of(cls, values: Iterable[int]) -> "IntegerSequence":
        return cls(tuple(sorted(set(int(v) for v in values))))

    @classmethod
    def from_sorted(cls, values: Iterable[int]) -> "IntegerSequence":
        return cls(tuple(int(v) for v in values))

    @cached_property
    def as_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: int) -> bool:
        i = int(np.searchsorted(self.as_array, x)) if self.elements else 0
        return i < len(self.elements) and self.elements[i] == x

    @property
    def max_element(self) -> int:
        return self.elements[-1] if self.elements else 0

    def prefix(self, k: int) -> "IntegerSequence":
        return IntegerSequence(self.elements[:k])

    def with_element(self, x: int) -> "IntegerSequence":
        if x in self:
            raise ValueError(f"{x} already in sequence")
        return IntegerSequence.of(self.elements + (x,))

    def reciprocal_sum(self, alpha: int = 1) -> Fraction:
        """Exact sum of s^(-alpha) for integer alpha >= 1 (balanced tree sum)."""
        terms = [Fraction(1, s ** alpha) for s in self.elements]
        return _balanced_sum(terms)


def _balanced_sum(terms: list) -> Fraction:
    if not terms:
        return Fraction(0)
    while len(terms) > 1:
        terms = [terms[i] + terms[i + 1] if i + 1 < len(terms) else terms[i]
                 for i in range(0, len(terms), 2)]
    return terms[0]


@dataclass(frozen=True)
class RepCountProfile:
    """Multiset representation counts: counts[n] = number of multisets
    {x_1 <= ... <= x_h} of sequence elements with sum n, for n in 0..n_max."""

    counts: tuple[int, ...]
    n_max: int
    h: int

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def max_count(self) -> int:
        return max(self.counts) if self.counts else 0


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def pair_count_table(arr: np.ndarray, size: int) -> np.ndarray:
    """int32 table t[s] = number of multiset pairs {x <= y} with x + y == s,
    for s < size.  Pairs summing beyond the table are dropped."""
    table = np.zeros(size, dtype=np.int32)
    k = arr.shape[0]
    for i in range(k):
        sums = arr[i] + arr[i:]
        sums = sums[sums < size]
        np.add.at(table, sums, 1)
    return table


def _sumfree_tables(arr: np.ndarray, size: int):
    memb = np.zeros(size, dtype=np.bool_)
    pairs = np.zeros(size, dtype=np.bool_)
    diffs = np.zeros(size, dtype=np.bool_)
    memb[arr[arr < size]] = True
    k = arr.shape[0]
    for i in range(k):
        s = arr[i] + arr[i:]
        pairs[s[s < size]] = True
        d = arr[i + 1:] - arr[i]
        diffs[d[d < size]] = True
    return memb, pairs, diffs


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def representation_counts(seq: IntegerSequence, n_max: int,
                          h: int) -> RepCountProfile:
    """Exact multiset representation counts up to n_max.

    For h=2 these are the power-series coefficients of (f^2 + f(z^2))/2
    through degree n_max, with f the 0/1 indicator series of the sequence.
    """
    if h < 2:
        raise ValueError("h must be >= 2")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    # M[j][x] = number of size-j multisets with sum x; one pass per element
    m = np.zeros((h + 1, n_max + 1), dtype=np.int64)
    m[0, 0] = 1
    for s in seq.elements:
        if s > n_max:
            break
        for j in range(1, h + 1):
            m[j, s:] += m[j - 1, :n_max + 1 - s]
    return RepCountProfile(tuple(int(c) for c in m[h]), n_max, h)


def verify(seq: IntegerSequence, pattern: PatternKind) -> bool:
    """True iff the sequence satisfies the pattern constraint."""
    return find_violation(seq, pattern) is None


def find_violation(seq: IntegerSequence, pattern: PatternKind):
    """None when valid; otherwise a human-readable witness dict."""
    a = seq.as_array
    k = len(seq)
    if k == 0:
        return None
    if pattern.is_pair:
        g = pattern.pair_g
        size = 2 * seq.max_element + 1
        table = pair_count_table(a, size)
        bad = np.flatnonzero(table > g)
        if bad.size == 0:
            return None
        s = int(bad[0])
        pairs = [(int(x), s - int(x)) for x in a
                 if s - x >= x and (s - x) in seq]
        return {"kind": "pair_sum_collision", "sum": s, "pairs": pairs[:g + 1],
                "count": int(table[s]), "allowed": g}
    if pattern.kind == "sumfree":
        memb = np.zeros(seq.max_element + 1, dtype=np.bool_)
        memb[a] = True
        for z in seq.elements:
            xs = a[a <= z // 2]
            hit = xs[memb[z - xs]]
            if hit.size:
                x = int(hit[0])
                return {"kind": "sum_in_set", "x": x, "y": z - x, "z": z}
        return None
    # general B_h[g]
    n_max = pattern.h * seq.max_element
    prof = representation_counts(seq, n_max, pattern.h)
    for n, c in enumerate(prof.counts):
        if c > pattern.g:
            return {"kind": "representation_overflow", "sum": n, "count": c,
                    "allowed": pattern.g}
    return None


def can_extend(seq: IntegerSequence, candidate: int,
               pattern: PatternKind) -> bool:
    """True iff seq + {candidate} still satisfies the pattern.

    Rejects candidates already present.  This convenience form builds a
    checker each call; reuse make_checker() for repeated queries against a
    growing set.
    """
    if candidate < 1:
        raise ValueError("candidate must be a positive integer")
    if candidate in seq:
        raise ValueError(f"candidate {candidate} already in sequence")
    return make_checker(pattern, seq).can_add(candidate)


def sumset_cover(seq: IntegerSequence, m_max: int) -> tuple[int, ...]:
    """Values m in [1, m_max] that could still be appended to seq without
    violating the Sidon condition; empty result certifies inclusion-maximality
    of seq through m_max.

    A value m is blocked when m is an element, m is in seq+seq-seq, or
    2m is in seq+seq; the survivors are exactly {m : can_extend(seq, m)}.
    """
    return extendable_values(seq, m_max, SIDON)


def extendable_values(seq: IntegerSequence, m_max: int,
                      pattern: PatternKind) -> tuple[int, ...]:
    """Generalization of sumset_cover to any pattern."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    a = seq.as_array
    k = len(seq)
    size = m_max + max(seq.max_element, m_max) + 1
    if pattern.is_pair:
        table = pair_count_table(a, size)
        blocked = kernels.pair_blocked(a, table, pattern.pair_g, m_max)
    elif pattern.kind == "sumfree":
        memb, pairs, diffs = _sumfree_tables(a, size)
        blocked = kernels.sumfree_blocked(a, memb, pairs, diffs, m_max)
    else:
        checker = make_checker(pattern, seq)
        out = [m for m in range(1, m_max + 1)
               if m not in seq and checker.can_add(m)]
        return tuple(out)
    memb = np.zeros(m_max + 1, dtype=np.bool_)
    memb[a[a <= m_max]] = True
    free = np.flatnonzero(~blocked[1:] & ~memb[1:]) + 1
    return tuple(int(m) for m in free)


# ---------------------------------------------------------------------------
# incremental checkers
# ---------------------------------------------------------------------------

class _PairChecker:
    """Pair-sum count table for Sidon / B_2[g]; O(|seq|) per query and insert,
    O(|seq|^2) entries of memory."""

    __slots__ = ("g", "elements", "memb", "sum_counts")

    def __init__(self, g: int, elements=None, memb=None, sum_counts=None):
        self.g = g
        self.elements: list[int] = elements if elements is not None else []
        self.memb: set[int] = memb if memb is not None else set()
        self.sum_counts: dict[int, int] = (
            sum_counts if sum_counts is not None else {})

    def can_add(self, m: int) -> bool:
        if m in self.memb:
            return False
        if self.sum_counts.get(2 * m, 0) >= self.g:
            return False
        for e in self.elements:
            if self.sum_counts.get(m + e, 0) >= self.g:
                return False
        return True

    def add(self, m: int) -> None:
        if not self.can_add(m):
            raise ValueError(f"adding {m} violates the pattern")
        for e in self.elements:
            s = m + e
            self.sum_counts[s] = self.sum_counts.get(s, 0) + 1
        self.sum_counts[2 * m] = self.sum_counts.get(2 * m, 0) + 1
        self.elements.append(m)
        self.memb.add(m)

    def clone(self) -> "_PairChecker":
        return _PairChecker(self.g, list(self.elements), set(self.memb),
                            dict(self.sum_counts))


class _SumFreeChecker:
    __slots__ = ("elements", "memb", "pair_sums", "diffs")

    def __init__(self, elements=None, memb=None, pair_sums=None, diffs=None):
        self.elements: list[int] = elements if elements is not None else []
        self.memb: set[int] = memb if memb is not None else set()
        self.pair_sums: set[int] = pair_sums if pair_sums is not None else set()
        self.diffs: set[int] = diffs if diffs is not None else set()

    def can_add(self, m: int) -> bool:
        if m in self.memb:
            return False
        # m = x+y, m+x = z, or m+m = z with x, y, z existing elements
        return not (m in self.pair_sums or m in self.diffs
                    or 2 * m in self.memb)

    def add(self, m: int) -> None:
        if not self.can_add(m):
            raise ValueError(f"adding {m} violates the pattern")
        for e in self.elements:
            self.pair_sums.add(m + e)
            self.diffs.add(abs(m - e))
        self.pair_sums.add(2 * m)
        self.elements.append(m)
        self.memb.add(m)

    def clone(self) -> "_SumFreeChecker":
        return _SumFreeChecker(list(self.elements), set(self.memb),
                               set(self.pair_sums), set(self.diffs))


class _GeneralBhgChecker:
    """Multiset-count tables C_j for j = 0..h over [0, range); queries cost
    O(h * range) vectorized.  Meant for h >= 3 at modest scales."""

    __slots__ = ("h", "g", "elements", "memb", "tables", "size")

    def __init__(self, h: int, g: int):
        self.h = h
        self.g = g
        self.elements: list[int] = []
        self.memb: set[int] = set()
        self.size = 16
        self.tables = np.zeros((h + 1, self.size), dtype=np.int64)
        self.tables[0, 0] = 1

    def _ensure(self, value: int) -> None:
        need = self.h * value + 1
        if need <= self.size:
            return
        new_size = max(need, 2 * self.size)
        t = np.zeros((self.h + 1, new_size), dtype=np.int64)
        t[:, :self.size] = self.tables
        self.tables = t
        self.size = new_size

    def can_add(self, m: int) -> bool:
        if m in self.memb:
            return False
        self._ensure(max(m, max(self.elements, default=0)))
        total = self.tables[self.h].copy()
        for mm in range(1, self.h + 1):
            shift = mm * m
            if shift >= self.size:
                break
            total[shift:] += self.tables[self.h - mm, :self.size - shift]
        return bool((total <= self.g).all())

    def add(self, m: int) -> None:
        if not self.can_add(m):
            raise ValueError(f"adding {m} violates the pattern")
        for j in range(self.h, 0, -1):
            for mm in range(1, j + 1):
                shift = mm * m
                if shift >= self.size:
                    break
                self.tables[j, shift:] += self.tables[j - mm,
                                                      :self.size - shift]
        self.elements.append(m)
        self.memb.add(m)

    def clone(self) -> "_GeneralBhgChecker":
        c = _GeneralBhgChecker.__new__(_GeneralBhgChecker)
        c.h, c.g = self.h, self.g
        c.elements = list(self.elements)
        c.memb = set(self.memb)
        c.tables = self.tables.copy()
        c.size = self.size
        return c


def make_checker(pattern: PatternKind,
                 seq: Optional[IntegerSequence] = None):
    """Incremental extension checker preloaded with seq (must satisfy the
    pattern; raises ValueError otherwise)."""
    if pattern.is_pair:
        checker = _PairChecker(pattern.pair_g)
    elif pattern.kind == "sumfree":
        checker = _SumFreeChecker()
    else:
        checker = _GeneralBhgChecker(pattern.h, pattern.g)
    if seq is not None:
        for x in seq.elements:
            checker.add(x)
    return checker


# ---------------------------------------------------------------------------
# shared sequence text format: one base-10 integer per line, strictly
# increasing, no blank lines, LF line endings
# ---------------------------------------------------------------------------

def read_sequence(stream: Union[TextIO, Iterable[str]]) -> IntegerSequence:
    values = []
    prev = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if line.strip() == "":
            raise SequenceFormatError("blank line not allowed", lineno)
        try:
            v = int(line.strip())
        except ValueError:
            raise SequenceFormatError(f"not an integer: {line.strip()!r}",
                                      lineno) from None
        if v < 1:
            raise SequenceFormatError(f"value {v} is not positive", lineno)
        if v <= prev:
            raise SequenceFormatError(
                f"value {v} does not increase on previous {prev}", lineno)
        values.append(v)
        prev = v
    return IntegerSequence(tuple(values))


def write_sequence(seq: IntegerSequence, stream: TextIO) -> None:
    for x in seq.elements:
        stream.write(f"{x}\n")
