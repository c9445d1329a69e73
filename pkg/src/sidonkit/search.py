"""Exact extremal search: maximize sum s^(-alpha) over pattern-satisfying
subsets of [1, n_cap], or over exactly-k-element subsets within a value cap.

Strategy by instance:

  - alpha = 1 with n_cap small enough that lcm(1..n_cap)-scaled weights fit
    int64: branch and bound on exact integers (no tolerance questions at the
    incumbent comparison).
  - otherwise: branch and bound on int64 interval weights (outward-rounded
    dyadic enclosures of j^-alpha scaled by 2^40); every leaf that could
    reach the incumbent is collected and re-scored exactly afterwards, so
    the reported optimum and tie-break are still exact.
  - patterns without a kernel (B_h[g], h >= 3): a plain-Python version of
    the same algorithm driven by the incremental checkers.

Ties break toward the lexicographically smallest set (element tuples).  The
DFS explores include-before-exclude in increasing value order, which visits
sets in exactly that lexicographic order, so pruning at <= incumbent never
loses the canonical optimum.  Results are deterministic; `workers` is
accepted for interface stability but the reduction is specified to be
bit-identical to sequential execution, which a single-threaded run satisfies
trivially.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import kernels
from .enclosure import DEFAULT_BITS, Enclosure, reciprocal_power_enclosure
from .sequences import IntegerSequence, PatternKind, make_checker

_INT64_BUDGET = 1 << 62
_INTERVAL_BITS = 40
ORACLE_LIMIT = 26


class SearchStatus(enum.Enum):
    EXACT_OPTIMUM = "ExactOptimum"
    LOWER_BOUND_ONLY = "LowerBoundOnly"


class InfeasibleError(ValueError):
    """No pattern-satisfying set matches the size/cap requirements."""


@dataclass(frozen=True)
class SearchResult:
    optimum_set: IntegerSequence
    objective: Enclosure
    status: SearchStatus
    nodes_explored: int

    def to_json(self, digits: int = 12) -> dict:
        return {
            "optimum_set": list(self.optimum_set.elements),
            "objective_lo": str(self.objective.lo),
            "objective_hi": str(self.objective.hi),
            "objective": self.objective.to_json(digits),
            "status": self.status.value,
            "nodes": self.nodes_explored,
        }


def _exact_weights(n: int) -> Optional[tuple[np.ndarray, int]]:
    """lcm-scaled exact integer weights for alpha=1, or None on overflow."""
    den = math.lcm(*range(1, n + 1))
    # crude harmonic ceiling; guards the int64 accumulator
    if den * (n.bit_length() + 2) >= _INT64_BUDGET:
        return None
    w = np.zeros(n + 1, dtype=np.int64)
    for j in range(1, n + 1):
        w[j] = den // j
    return w, den


def _interval_weights(n: int, alpha: Fraction) -> tuple[np.ndarray, np.ndarray]:
    scale = 1 << _INTERVAL_BITS
    wlo = np.zeros(n + 1, dtype=np.int64)
    whi = np.zeros(n + 1, dtype=np.int64)
    for j in range(1, n + 1):
        enc = reciprocal_power_enclosure(j, alpha, _INTERVAL_BITS + 16)
        wlo[j] = enc.lo.numerator * scale // enc.lo.denominator
        whi[j] = -((-enc.hi.numerator * scale) // enc.hi.denominator)
    return wlo, whi


def _pattern_code(pattern: PatternKind) -> Optional[tuple[int, int]]:
    if pattern.is_pair:
        return 1, pattern.pair_g
    if pattern.kind == "sumfree":
        return 2, 1
    return None


def _exact_objective(elements: tuple[int, ...], alpha: Fraction,
                     bits: int) -> Enclosure:
    if alpha == 1:
        total = Fraction(0)
        for s in elements:
            total += Fraction(1, s)
        return Enclosure.exact(total)
    if not elements:
        return Enclosure.exact(0)
    lo = Fraction(0)
    hi = Fraction(0)
    for s in elements:
        enc = reciprocal_power_enclosure(s, alpha, bits + 8)
        lo += enc.lo
        hi += enc.hi
    return Enclosure(lo, hi)


def _pick_optimum(cands: list[tuple[int, ...]], alpha: Fraction,
                  bits: int) -> tuple[tuple[int, ...], Enclosure, bool]:
    """Exact re-scoring of candidate sets; returns (set, objective,
    decisive).  decisive=False when enclosures could not separate the top
    candidates (only possible for irrational alpha)."""
    scored = [(s, _exact_objective(s, alpha, bits)) for s in cands]
    best_lo = max(e.lo for _, e in scored)
    top = [(s, e) for s, e in scored if e.hi >= best_lo]
    decisive = True
    if alpha != 1 and len(top) > 1:
        for extra in (bits * 2, bits * 4):
            top = [(s, _exact_objective(s, alpha, extra)) for s, _ in top]
            best_lo = max(e.lo for _, e in top)
            top = [(s, e) for s, e in top if e.hi >= best_lo]
            if len(top) == 1:
                break
        if len(top) > 1:
            # either a genuine tie or an unresolved comparison margin
            decisive = all(e.lo == top[0][1].lo and e.hi == top[0][1].hi
                           for _, e in top)
    chosen = min(top, key=lambda se: se[0])
    return chosen[0], chosen[1], decisive


def _run_kernel_bnb(n: int, pattern: PatternKind, alpha: Fraction,
                    k_target: int, budget: Optional[int],
                    bits: int) -> SearchResult:
    code, g = _pattern_code(pattern)
    node_budget = -1 if budget is None else int(budget)
    exact_w = _exact_weights(n) if alpha == 1 else None
    if exact_w is not None:
        w, den = exact_w
        (best_set, best_len, best_lo, _, nodes, status, _, _,
         _) = kernels.bnb_core(code, n, g, w, w, k_target, node_budget, True)
        if best_len < 0:
            if status & kernels.BNB_BUDGET:
                return SearchResult(IntegerSequence(()), Enclosure.exact(0),
                                    SearchStatus.LOWER_BOUND_ONLY, int(nodes))
            raise InfeasibleError(
                f"no {pattern} set of size {k_target} within [1, {n}]")
        elements = tuple(int(x) for x in sorted(best_set[:best_len]))
        objective = Enclosure.exact(Fraction(int(best_lo), den))
        st = (SearchStatus.LOWER_BOUND_ONLY if status & kernels.BNB_BUDGET
              else SearchStatus.EXACT_OPTIMUM)
        return SearchResult(IntegerSequence(elements), objective, st,
                            int(nodes))

    wlo, whi = _interval_weights(n, alpha)
    (best_set, best_len, best_lo, _, nodes, status, cand_sets, cand_lens,
     cand_count) = kernels.bnb_core(code, n, g, wlo, whi, k_target,
                                    node_budget, False)
    if best_len < 0:
        if status & kernels.BNB_BUDGET:
            return SearchResult(IntegerSequence(()), Enclosure.exact(0),
                                SearchStatus.LOWER_BOUND_ONLY, int(nodes))
        raise InfeasibleError(
            f"no {pattern} set of size {k_target} within [1, {n}]")
    cands = [tuple(int(x) for x in sorted(cand_sets[i, :cand_lens[i]]))
             for i in range(int(cand_count))]
    if not cands:
        cands = [tuple(int(x) for x in sorted(best_set[:best_len]))]
    chosen, objective, decisive = _pick_optimum(cands, alpha, bits)
    st = SearchStatus.EXACT_OPTIMUM
    if (status & kernels.BNB_BUDGET or status & kernels.BNB_CAND_OVERFLOW
            or not decisive):
        st = SearchStatus.LOWER_BOUND_ONLY
    return SearchResult(IntegerSequence(chosen), objective, st, int(nodes))


def _generic_bnb(n: int, pattern: PatternKind, alpha: Fraction,
                 k_target: int, budget: Optional[int],
                 bits: int) -> SearchResult:
    # plain-Python mirror of the kernel for patterns without one
    work = max(bits, 96)
    wlo = [Fraction(0)] * (n + 1)
    whi = [Fraction(0)] * (n + 1)
    for j in range(1, n + 1):
        enc = reciprocal_power_enclosure(j, alpha, work).dyadic(work)
        wlo[j], whi[j] = enc.lo, enc.hi
    suffix = [Fraction(0)] * (n + 2)
    for j in range(n, 0, -1):
        suffix[j] = suffix[j + 1] + whi[j]

    state = {"nodes": 0, "best_lo": Fraction(-1), "cands": [],
             "aborted": False}
    node_budget = math.inf if budget is None else budget

    def dfs(v: int, checker, chosen: tuple[int, ...], lo: Fraction,
            hi: Fraction):
        if state["aborted"]:
            return
        if v > n or (k_target >= 0 and len(chosen) == k_target):
            if k_target >= 0 and len(chosen) != k_target:
                return
            if hi >= state["best_lo"]:
                state["cands"].append(chosen)
                if lo > state["best_lo"]:
                    state["best_lo"] = lo
            return
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            state["aborted"] = True
            return
        if k_target < 0:
            if hi + suffix[v] <= state["best_lo"]:
                return
        adm = [j for j in range(v, n + 1) if checker.can_add(j)]
        if k_target >= 0:
            need = k_target - len(chosen)
            if len(adm) < need:
                return
            rem = sum(whi[j] for j in adm[:need])
        else:
            rem = sum(whi[j] for j in adm)
        if hi + rem <= state["best_lo"]:
            return
        if checker.can_add(v):
            inc = checker.clone()
            inc.add(v)
            dfs(v + 1, inc, chosen + (v,), lo + wlo[v], hi + whi[v])
        dfs(v + 1, checker, chosen, lo, hi)

    dfs(1, make_checker(pattern), (), Fraction(0), Fraction(0))
    if not state["cands"]:
        if state["aborted"]:
            return SearchResult(IntegerSequence(()), Enclosure.exact(0),
                                SearchStatus.LOWER_BOUND_ONLY, state["nodes"])
        raise InfeasibleError(
            f"no {pattern} set of size {k_target} within [1, {n}]")
    chosen, objective, decisive = _pick_optimum(state["cands"], alpha, bits)
    st = SearchStatus.EXACT_OPTIMUM
    if state["aborted"] or not decisive:
        st = SearchStatus.LOWER_BOUND_ONLY
    return SearchResult(IntegerSequence(chosen), objective, st,
                        state["nodes"])


def max_reciprocal_subset(n_cap: int, pattern: PatternKind,
                          alpha: Union[int, Fraction] = 1,
                          budget: Optional[int] = None,
                          workers: int = 1,
                          bits: int = DEFAULT_BITS) -> SearchResult:
    """Maximum of sum s^(-alpha) over pattern-satisfying subsets of
    [1, n_cap]; budget exhaustion demotes the status, never raises."""
    if n_cap < 1:
        raise ValueError("n_cap must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if _pattern_code(pattern) is None:
        return _generic_bnb(n_cap, pattern, alpha, -1, budget, bits)
    return _run_kernel_bnb(n_cap, pattern, alpha, -1, budget, bits)


def best_k_prefix(k: int, pattern: PatternKind,
                  alpha: Union[int, Fraction] = 1,
                  value_cap: int = 0,
                  budget: Optional[int] = None,
                  bits: int = DEFAULT_BITS) -> SearchResult:
    """Maximum of sum s^(-alpha) over exactly-k-element pattern sets within
    [1, value_cap]; raises InfeasibleError when no such set exists."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if value_cap < 1:
        raise ValueError("value_cap must be >= 1")
    alpha = Fraction(alpha)
    if _pattern_code(pattern) is None:
        return _generic_bnb(value_cap, pattern, alpha, k, budget, bits)
    return _run_kernel_bnb(value_cap, pattern, alpha, k, budget, bits)


def brute_force_oracle(n_cap: int, pattern: PatternKind,
                       alpha: Union[int, Fraction] = 1,
                       bits: int = DEFAULT_BITS) -> SearchResult:
    """Exhaustive enumeration of all 2^n_cap subsets (n_cap <= 26);
    independent of the branch-and-bound path and always ExactOptimum."""
    if not 1 <= n_cap <= ORACLE_LIMIT:
        raise ValueError(f"oracle limited to n_cap <= {ORACLE_LIMIT}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    code = _pattern_code(pattern)
    if code is None:
        return _python_oracle(n_cap, pattern, alpha, bits)
    _, g = code
    sumfree = pattern.kind == "sumfree"
    if alpha == 1:
        exact_w = _exact_weights(n_cap)
        if exact_w is not None:
            w, den = exact_w
            best = kernels.oracle_best(n_cap, g, w, sumfree)
            masks = kernels.oracle_ties(n_cap, g, w, sumfree, best,
                                        np.int64(0))
            sets = [_mask_to_tuple(int(m)) for m in masks]
            chosen = min(sets)
            return SearchResult(IntegerSequence(chosen),
                                Enclosure.exact(Fraction(int(best), den)),
                                SearchStatus.EXACT_OPTIMUM, 1 << n_cap)
    w = np.zeros(n_cap + 1, dtype=np.float64)
    for j in range(1, n_cap + 1):
        w[j] = float(j) ** (-float(alpha))
    best = kernels.oracle_best(n_cap, g, w, sumfree)
    eps = 1e-9 * max(1.0, float(best))
    masks = kernels.oracle_ties(n_cap, g, w, sumfree, best, eps)
    sets = [_mask_to_tuple(int(m)) for m in masks]
    chosen, objective, decisive = _pick_optimum(sets, alpha, bits)
    st = (SearchStatus.EXACT_OPTIMUM if decisive
          else SearchStatus.LOWER_BOUND_ONLY)
    return SearchResult(IntegerSequence(chosen), objective, st, 1 << n_cap)


def _python_oracle(n_cap: int, pattern: PatternKind, alpha: Fraction,
                   bits: int) -> SearchResult:
    from .sequences import verify
    if n_cap > 20:
        raise ValueError("generic-pattern oracle limited to n_cap <= 20")
    cands = []
    best = None
    for mask in range(1 << n_cap):
        elems = _mask_to_tuple(mask)
        if not verify(IntegerSequence(elems), pattern):
            continue
        val = _exact_objective(elems, alpha, bits)
        if best is None or val.hi >= best:
            cands.append(elems)
            best = val.lo if best is None else max(best, val.lo)
    chosen, objective, decisive = _pick_optimum(cands, alpha, bits)
    st = (SearchStatus.EXACT_OPTIMUM if decisive
          else SearchStatus.LOWER_BOUND_ONLY)
    return SearchResult(IntegerSequence(chosen), objective, st, 1 << n_cap)


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)
