"""Hot kernels: greedy candidate scans, exhaustive subset enumeration, and
branch-and-bound search.

Every kernel has a numba @njit form (the scalar loops below) and a pure-numpy
form (the *_np functions, which process candidates in vectorized blocks).
Dispatch happens in the small wrappers at the bottom of the module according
to backend.get_backend().  Branch and bound cannot be vectorized, so its
numpy form is the same loop uncompiled; it is only meant for small instances
and for checking parity.

Pattern encoding shared with the rest of the package:
  - "pair-count" patterns (Sidon and B_2[g]) keep a table `counts[s]` of
    multiset pair representations of each sum s; a candidate c is admissible
    iff every touched entry counts[c+e] and counts[2c] is <= g-1.
  - sum-free keeps presence tables for pair sums and absolute differences;
    c is admissible iff c is not a pair sum, not a difference (c+x=z), and
    2c is not an element.

Bitset-style tables are plain bool/uint8 numpy arrays indexed by value; the
invariant `len(sum_table) == 2 * len(value_table)` keeps every index c+e in
range without per-access checks.
"""

from __future__ import annotations

import numpy as np

from .backend import NUMBA_AVAILABLE, get_backend, njit

# status codes returned by the greedy extension kernels
DONE_COUNT = 0  # reached requested number of elements
DONE_CAP = 1  # scanned every candidate <= value_cap
NEED_GROW = 2  # elems or table capacity exhausted; caller must grow and retry

# branch-and-bound status bits
BNB_EXHAUSTED = 0
BNB_BUDGET = 1
BNB_CAND_OVERFLOW = 2

_SCAN_BLOCK = 4096


# ---------------------------------------------------------------------------
# greedy extension: Sidon / B_2[g]
# ---------------------------------------------------------------------------

@njit
def _pair_extend(elems, k, maxe, memb, counts, g, frontier, want_k, value_cap,
                 forbidden):
    cap_val = memb.shape[0]
    nf = forbidden.shape[0]
    gm1 = g - 1
    c = frontier
    while True:
        if want_k >= 0 and k >= want_k:
            return k, maxe, c, DONE_COUNT
        if value_cap >= 0 and c > value_cap:
            return k, maxe, c, DONE_CAP
        if c >= cap_val or k >= elems.shape[0]:
            return k, maxe, c, NEED_GROW
        if memb[c]:
            c += 1
            continue
        sel = True
        if nf > 0:
            pos = np.searchsorted(forbidden, c)
            if pos < nf and forbidden[pos] == c:
                sel = False
        if sel:
            if counts[2 * c] > gm1:
                sel = False
            else:
                for j in range(k):
                    if counts[c + elems[j]] > gm1:
                        sel = False
                        break
        if sel:
            for j in range(k):
                counts[c + elems[j]] += 1
            counts[2 * c] += 1
            memb[c] = True
            elems[k] = c
            k += 1
            if c > maxe:
                maxe = c
        c += 1


def _pair_extend_np(elems, k, maxe, memb, counts, g, frontier, want_k,
                    value_cap, forbidden):
    cap_val = memb.shape[0]
    nf = forbidden.shape[0]
    gm1 = g - 1
    c = frontier
    while True:
        if want_k >= 0 and k >= want_k:
            return k, maxe, c, DONE_COUNT
        if value_cap >= 0 and c > value_cap:
            return k, maxe, c, DONE_CAP
        if c >= cap_val or k >= elems.shape[0]:
            return k, maxe, c, NEED_GROW
        hi = c + _SCAN_BLOCK
        if value_cap >= 0:
            hi = min(hi, value_cap + 1)
        hi = min(hi, cap_val)
        blocked = counts[2 * c:2 * hi:2] > gm1
        blocked |= memb[c:hi]
        for j in range(k):
            blocked |= counts[c + elems[j]:hi + elems[j]] > gm1
            if (j & 15) == 15 and blocked.all():
                break
        if nf > 0:
            lo_f, hi_f = np.searchsorted(forbidden, (c, hi))
            blocked[forbidden[lo_f:hi_f] - c] = True
        free = np.flatnonzero(~blocked)
        if free.size == 0:
            c = hi
            continue
        v = c + int(free[0])
        kk = elems[:k]
        counts[v + kk] += 1
        counts[2 * v] += 1
        memb[v] = True
        elems[k] = v
        k += 1
        if v > maxe:
            maxe = v
        c = v + 1


# ---------------------------------------------------------------------------
# greedy extension: sum-free
# ---------------------------------------------------------------------------

@njit
def _sumfree_extend(elems, k, maxe, memb, pairs, diffs, frontier, want_k,
                    value_cap, forbidden):
    cap_val = pairs.shape[0] // 2
    nf = forbidden.shape[0]
    c = frontier
    while True:
        if want_k >= 0 and k >= want_k:
            return k, maxe, c, DONE_COUNT
        if value_cap >= 0 and c > value_cap:
            return k, maxe, c, DONE_CAP
        if c >= cap_val or k >= elems.shape[0]:
            return k, maxe, c, NEED_GROW
        if memb[c]:
            c += 1
            continue
        sel = True
        if nf > 0:
            pos = np.searchsorted(forbidden, c)
            if pos < nf and forbidden[pos] == c:
                sel = False
        if sel and (pairs[c] or diffs[c] or memb[2 * c]):
            sel = False
        if sel:
            for j in range(k):
                e = elems[j]
                pairs[c + e] = True
                d = c - e if c > e else e - c
                diffs[d] = True
            pairs[2 * c] = True
            memb[c] = True
            elems[k] = c
            k += 1
            if c > maxe:
                maxe = c
        c += 1


def _sumfree_extend_np(elems, k, maxe, memb, pairs, diffs, frontier, want_k,
                       value_cap, forbidden):
    cap_val = pairs.shape[0] // 2
    nf = forbidden.shape[0]
    c = frontier
    while True:
        if want_k >= 0 and k >= want_k:
            return k, maxe, c, DONE_COUNT
        if value_cap >= 0 and c > value_cap:
            return k, maxe, c, DONE_CAP
        if c >= cap_val or k >= elems.shape[0]:
            return k, maxe, c, NEED_GROW
        hi = c + _SCAN_BLOCK
        if value_cap >= 0:
            hi = min(hi, value_cap + 1)
        hi = min(hi, cap_val)
        blocked = pairs[c:hi] | diffs[c:hi] | memb[c:hi] | memb[2 * c:2 * hi:2]
        if nf > 0:
            lo_f, hi_f = np.searchsorted(forbidden, (c, hi))
            blocked[forbidden[lo_f:hi_f] - c] = True
        free = np.flatnonzero(~blocked)
        if free.size == 0:
            c = hi
            continue
        v = c + int(free[0])
        kk = elems[:k]
        pairs[v + kk] = True
        diffs[np.abs(v - kk)] = True
        pairs[2 * v] = True
        memb[v] = True
        elems[k] = v
        k += 1
        if v > maxe:
            maxe = v
        c = v + 1


# ---------------------------------------------------------------------------
# extendability scans (sumset_cover and friends)
# ---------------------------------------------------------------------------

@njit
def _pair_blocked(elems, counts, g, m_max):
    out = np.zeros(m_max + 1, dtype=np.bool_)
    gm1 = g - 1
    for m in range(1, m_max + 1):
        if counts[2 * m] > gm1:
            out[m] = True
            continue
        for j in range(elems.shape[0]):
            if counts[m + elems[j]] > gm1:
                out[m] = True
                break
    return out


def _pair_blocked_np(elems, counts, g, m_max):
    out = np.zeros(m_max + 1, dtype=np.bool_)
    gm1 = g - 1
    out[1:] = counts[2:2 * m_max + 1:2] > gm1
    for e in elems:
        out[1:] |= counts[1 + e:m_max + 1 + e] > gm1
    return out


@njit
def _sumfree_blocked(elems, memb, pairs, diffs, m_max):
    out = np.zeros(m_max + 1, dtype=np.bool_)
    for m in range(1, m_max + 1):
        out[m] = pairs[m] or diffs[m] or memb[2 * m]
    return out


def _sumfree_blocked_np(elems, memb, pairs, diffs, m_max):
    out = np.zeros(m_max + 1, dtype=np.bool_)
    out[1:] = pairs[1:m_max + 1] | diffs[1:m_max + 1] | memb[2:2 * m_max + 1:2]
    return out


# ---------------------------------------------------------------------------
# exhaustive subset oracle (n <= 26)
# ---------------------------------------------------------------------------
# Two passes: the first finds the best objective over all valid subsets, the
# second collects every mask within `eps` of it (eps = 0 on the exact integer
# path).  Values are 1..n, bit i of a mask <-> value i+1.

@njit
def _oracle_pair_best(n, g, w):
    size = 2 * n + 1
    stamp = np.full(size, -1, dtype=np.int64)
    cnt = np.zeros(size, dtype=np.int64)
    el = np.zeros(n, dtype=np.int64)
    best = w[0] - w[0]  # zero of w's dtype; empty set is always valid
    for mask in range(1 << n):
        ok = True
        ne = 0
        val = w[0] - w[0]
        for i in range(n):
            if (mask >> i) & 1:
                v = i + 1
                s2 = 2 * v
                if stamp[s2] != mask:
                    stamp[s2] = mask
                    cnt[s2] = 0
                cnt[s2] += 1
                if cnt[s2] > g:
                    ok = False
                    break
                for j in range(ne):
                    s = v + el[j]
                    if stamp[s] != mask:
                        stamp[s] = mask
                        cnt[s] = 0
                    cnt[s] += 1
                    if cnt[s] > g:
                        ok = False
                        break
                if not ok:
                    break
                el[ne] = v
                ne += 1
                val += w[v]
        if ok and val > best:
            best = val
    return best


@njit
def _oracle_pair_ties(n, g, w, best, eps, out):
    size = 2 * n + 1
    stamp = np.full(size, -1, dtype=np.int64)
    cnt = np.zeros(size, dtype=np.int64)
    el = np.zeros(n, dtype=np.int64)
    found = 0
    for mask in range(1 << n):
        ok = True
        ne = 0
        val = w[0] - w[0]
        for i in range(n):
            if (mask >> i) & 1:
                v = i + 1
                s2 = 2 * v
                if stamp[s2] != mask:
                    stamp[s2] = mask
                    cnt[s2] = 0
                cnt[s2] += 1
                if cnt[s2] > g:
                    ok = False
                    break
                for j in range(ne):
                    s = v + el[j]
                    if stamp[s] != mask:
                        stamp[s] = mask
                        cnt[s] = 0
                    cnt[s] += 1
                    if cnt[s] > g:
                        ok = False
                        break
                if not ok:
                    break
                el[ne] = v
                ne += 1
                val += w[v]
        if ok and val >= best - eps:
            if found < out.shape[0]:
                out[found] = mask
            found += 1
    return found


@njit
def _oracle_sumfree_best(n, w):
    el = np.zeros(n, dtype=np.int64)
    best = w[0] - w[0]
    for mask in range(1 << n):
        ok = True
        ne = 0
        val = w[0] - w[0]
        for i in range(n):
            if (mask >> i) & 1:
                v = i + 1
                for j in range(ne):
                    x = el[j]
                    s = v + x
                    if s <= n and (mask >> (s - 1)) & 1:
                        ok = False
                        break
                    y = v - x
                    if y >= x and (mask >> (y - 1)) & 1:
                        ok = False
                        break
                if not ok:
                    break
                s2 = 2 * v
                if s2 <= n and (mask >> (s2 - 1)) & 1:
                    ok = False
                    break
                el[ne] = v
                ne += 1
                val += w[v]
        if ok and val > best:
            best = val
    return best


@njit
def _oracle_sumfree_ties(n, w, best, eps, out):
    el = np.zeros(n, dtype=np.int64)
    found = 0
    for mask in range(1 << n):
        ok = True
        ne = 0
        val = w[0] - w[0]
        for i in range(n):
            if (mask >> i) & 1:
                v = i + 1
                for j in range(ne):
                    x = el[j]
                    s = v + x
                    if s <= n and (mask >> (s - 1)) & 1:
                        ok = False
                        break
                    y = v - x
                    if y >= x and (mask >> (y - 1)) & 1:
                        ok = False
                        break
                if not ok:
                    break
                s2 = 2 * v
                if s2 <= n and (mask >> (s2 - 1)) & 1:
                    ok = False
                    break
                el[ne] = v
                ne += 1
                val += w[v]
        if ok and val >= best - eps:
            if found < out.shape[0]:
                out[found] = mask
            found += 1
    return found


def _oracle_np_scan(n, g, w, sumfree, best, eps, out):
    """Vectorized full-enumeration pass.

    With best=None it returns the maximum objective over valid masks; with a
    best value it fills `out` with masks within eps and returns their count.
    """
    values = np.arange(1, n + 1, dtype=np.int64)
    pair_masks = []
    pair_sums = []
    for i in range(n):
        for j in range(i, n):
            pair_masks.append((1 << i) | (1 << j))
            pair_sums.append(values[i] + values[j])
    pair_masks = np.asarray(pair_masks, dtype=np.int64)
    pair_sums = np.asarray(pair_sums, dtype=np.int64)

    chunk = 1 << 16
    total = 1 << n
    best_seen = None
    found = 0
    for start in range(0, total, chunk):
        m = np.arange(start, min(start + chunk, total), dtype=np.int64)
        valid = np.ones(m.shape[0], dtype=bool)
        if sumfree:
            inside = pair_sums <= n
            tmask = pair_masks[inside] | (1 << (pair_sums[inside] - 1))
            for tm in tmask:
                valid &= (m & tm) != tm
        else:
            order = np.argsort(pair_sums, kind="stable")
            s_sorted = pair_sums[order]
            p_sorted = pair_masks[order]
            idx = 0
            while idx < s_sorted.shape[0]:
                end = idx
                while end < s_sorted.shape[0] and s_sorted[end] == s_sorted[idx]:
                    end += 1
                if end - idx > g:
                    cnt = np.zeros(m.shape[0], dtype=np.int64)
                    for pm in p_sorted[idx:end]:
                        cnt += (m & pm) == pm
                    valid &= cnt <= g
                idx = end
        vals = np.zeros(m.shape[0], dtype=w.dtype)
        for i in range(n):
            vals += w[i + 1] * ((m >> i) & 1)
        if best is None:
            if valid.any():
                cb = vals[valid].max()
                if best_seen is None or cb > best_seen:
                    best_seen = cb
        else:
            hits = m[valid & (vals >= best - eps)]
            for h in hits:
                if found < out.shape[0]:
                    out[found] = h
                found += 1
    if best is None:
        zero = w[0] - w[0]
        return zero if best_seen is None else max(best_seen, zero)
    return found


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------
# Depth-first include/exclude over values 1..n in increasing order, include
# branch first.  With positive weights that visit order is exactly the
# lexicographic order on element tuples, so on the exact path the first
# incumbent that is never strictly beaten is the lexicographically smallest
# optimum, and pruning on <= incumbent is tie-safe.
#
# On the interval path (wlo < whi somewhere) every leaf whose upper sum can
# reach the incumbent's lower sum is also recorded in a candidate buffer; the
# caller re-scores candidates exactly.  Pruning uses the subtree upper bound
# against the incumbent lower bound, which never discards the first-visited
# (= lexicographically smallest) true optimum.

@njit
def _bnb_core(pattern, n, g, wlo, whi, k_target, node_budget, exact, cand_cap):
    suffix_hi = np.zeros(n + 2, dtype=np.int64)
    for j in range(n, 0, -1):
        suffix_hi[j] = suffix_hi[j + 1] + whi[j]
    prefix_hi = np.zeros(n + 1, dtype=np.int64)
    for j in range(1, n + 1):
        prefix_hi[j] = prefix_hi[j - 1] + whi[j]

    counts = np.zeros(2 * n + 1, dtype=np.int64)
    memb = np.zeros(n + 1, dtype=np.bool_)
    chosen = np.zeros(n + 1, dtype=np.int64)
    stage = np.zeros(n + 2, dtype=np.uint8)
    best_set = np.zeros(n + 1, dtype=np.int64)
    cand_sets = np.zeros((cand_cap, n + 1), dtype=np.int64)
    cand_lens = np.zeros(cand_cap, dtype=np.int64)

    nchosen = 0
    csum_lo = np.int64(0)
    csum_hi = np.int64(0)
    nodes = np.int64(0)
    best_lo = np.int64(-1)
    best_hi = np.int64(-1)
    best_len = np.int64(-1)
    cand_count = np.int64(0)
    status = BNB_EXHAUSTED
    gm1 = g - 1

    v = 1
    while True:
        at_leaf = v > n or (k_target >= 0 and nchosen == k_target)
        if at_leaf:
            feasible = k_target < 0 or nchosen == k_target
            if feasible:
                if exact:
                    if csum_lo > best_lo:
                        best_lo = csum_lo
                        best_hi = csum_hi
                        best_len = nchosen
                        for i in range(nchosen):
                            best_set[i] = chosen[i]
                else:
                    if csum_hi >= best_lo:
                        if cand_count < cand_cap:
                            cand_lens[cand_count] = nchosen
                            for i in range(nchosen):
                                cand_sets[cand_count, i] = chosen[i]
                            cand_count += 1
                        else:
                            status |= BNB_CAND_OVERFLOW
                        if csum_lo > best_lo or best_len < 0:
                            best_lo = csum_lo
                            best_hi = csum_hi
                            best_len = nchosen
                            for i in range(nchosen):
                                best_set[i] = chosen[i]
            # fall through to backtracking
        elif stage[v] == 0:
            nodes += 1
            if node_budget >= 0 and nodes > node_budget:
                status |= BNB_BUDGET
                break
            prune = False
            if k_target < 0:
                if csum_hi + suffix_hi[v] <= best_lo:
                    prune = True
            else:
                need = k_target - nchosen
                top = min(n, v + need - 1)
                if csum_hi + prefix_hi[top] - prefix_hi[v - 1] <= best_lo:
                    prune = True
            if not prune:
                # admissibility-filtered bound, recomputed lazily
                rem = np.int64(0)
                nadm = 0
                need = k_target - nchosen if k_target >= 0 else -1
                for j in range(v, n + 1):
                    adm = True
                    if pattern == 2:
                        for i in range(nchosen):
                            x = j - chosen[i]
                            if 1 <= x <= chosen[i] and memb[x]:
                                adm = False
                                break
                    else:
                        if counts[2 * j] > gm1:
                            adm = False
                        else:
                            for i in range(nchosen):
                                if counts[j + chosen[i]] > gm1:
                                    adm = False
                                    break
                    if adm:
                        nadm += 1
                        if need < 0 or nadm <= need:
                            rem += whi[j]
                        if need >= 0 and nadm == need:
                            break
                if need >= 0 and nadm < need:
                    prune = True  # not enough admissible values left
                elif csum_hi + rem <= best_lo:
                    prune = True
            if prune:
                stage[v] = 2
                # treated as fully explored; backtrack below
                at_leaf = True
            else:
                adm = True
                if pattern == 2:
                    for i in range(nchosen):
                        x = v - chosen[i]
                        if 1 <= x <= chosen[i] and memb[x]:
                            adm = False
                            break
                else:
                    if counts[2 * v] > gm1:
                        adm = False
                    else:
                        for i in range(nchosen):
                            if counts[v + chosen[i]] > gm1:
                                adm = False
                                break
                if adm:
                    stage[v] = 1
                    if pattern != 2:
                        for i in range(nchosen):
                            counts[v + chosen[i]] += 1
                        counts[2 * v] += 1
                    memb[v] = True
                    chosen[nchosen] = v
                    nchosen += 1
                    csum_lo += wlo[v]
                    csum_hi += whi[v]
                else:
                    stage[v] = 2
                v += 1
                continue
        elif stage[v] == 1:
            # include branch finished: undo, descend into exclude branch
            nchosen -= 1
            u = chosen[nchosen]
            csum_lo -= wlo[u]
            csum_hi -= whi[u]
            memb[u] = False
            if pattern != 2:
                for i in range(nchosen):
                    counts[u + chosen[i]] -= 1
                counts[2 * u] -= 1
            stage[v] = 2
            v += 1
            continue
        else:
            at_leaf = True  # stage 2: subtree done, backtrack

        # backtrack: walk up to the nearest ancestor with an unexplored branch
        done = False
        while True:
            stage[v] = 0
            v -= 1
            if v == 0:
                done = True
                break
            if stage[v] == 1:
                nchosen -= 1
                u = chosen[nchosen]
                csum_lo -= wlo[u]
                csum_hi -= whi[u]
                memb[u] = False
                if pattern != 2:
                    for i in range(nchosen):
                        counts[u + chosen[i]] -= 1
                    counts[2 * u] -= 1
                stage[v] = 2
                v += 1
                break
        if done:
            break

    return (best_set, best_len, best_lo, best_hi, nodes, status, cand_sets,
            cand_lens, cand_count)


_bnb_core_py = _bnb_core.py_func if NUMBA_AVAILABLE else _bnb_core


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------

def pair_extend(elems, k, maxe, memb, counts, g, frontier, want_k, value_cap,
                forbidden):
    fn = _pair_extend if get_backend() == "numba" else _pair_extend_np
    return fn(elems, k, maxe, memb, counts, g, frontier, want_k, value_cap,
              forbidden)


def sumfree_extend(elems, k, maxe, memb, pairs, diffs, frontier, want_k,
                   value_cap, forbidden):
    fn = _sumfree_extend if get_backend() == "numba" else _sumfree_extend_np
    return fn(elems, k, maxe, memb, pairs, diffs, frontier, want_k, value_cap,
              forbidden)


def pair_blocked(elems, counts, g, m_max):
    fn = _pair_blocked if get_backend() == "numba" else _pair_blocked_np
    return fn(elems, counts, g, m_max)


def sumfree_blocked(elems, memb, pairs, diffs, m_max):
    fn = _sumfree_blocked if get_backend() == "numba" else _sumfree_blocked_np
    return fn(elems, memb, pairs, diffs, m_max)


def oracle_best(n, g, w, sumfree):
    if get_backend() == "numba":
        if sumfree:
            return _oracle_sumfree_best(n, w)
        return _oracle_pair_best(n, g, w)
    return _oracle_np_scan(n, g, w, sumfree, None, None, None)


def oracle_ties(n, g, w, sumfree, best, eps, max_ties=4096):
    out = np.zeros(max_ties, dtype=np.int64)
    if get_backend() == "numba":
        if sumfree:
            found = _oracle_sumfree_ties(n, w, best, eps, out)
        else:
            found = _oracle_pair_ties(n, g, w, best, eps, out)
    else:
        found = _oracle_np_scan(n, g, w, sumfree, best, eps, out)
    if found > max_ties:
        raise RuntimeError(f"tie buffer overflow: {found} tying subsets")
    return out[:found]


def bnb_core(pattern, n, g, wlo, whi, k_target, node_budget, exact,
             cand_cap=2048):
    fn = _bnb_core if get_backend() == "numba" else _bnb_core_py
    return fn(pattern, n, g, wlo, whi, k_target, node_budget, exact, cand_cap)
