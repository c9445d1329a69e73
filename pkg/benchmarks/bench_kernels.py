#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel under both backends (results are checked to match) and
prints a timing table.  Select sizes with --scale {small,default,large}.

    python benchmarks/bench_kernels.py
    SIDONKIT_BACKEND=numpy python ...     # force a single backend elsewhere
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sidonkit import construct, search, sequences
from sidonkit.backend import NUMBA_AVAILABLE, using_backend
from sidonkit.sequences import SIDON, SUM_FREE, IntegerSequence

SCALES = {
    "small": {"greedy_terms": 200, "cover_terms": 200, "oracle_n": 14,
              "bnb_n": 24},
    "default": {"greedy_terms": 800, "cover_terms": 600, "oracle_n": 18,
                "bnb_n": 34},
    "large": {"greedy_terms": 1500, "cover_terms": 1099, "oracle_n": 21,
              "bnb_n": 40},
}


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return time.perf_counter() - t0, out


def bench_greedy(terms: int):
    return construct.mian_chowla(terms).elements


def bench_sumfree(terms: int):
    return construct.greedy(
        construct.GreedySpec(pattern=SUM_FREE, count=terms)).elements


def bench_cover(seq: IntegerSequence):
    return sequences.sumset_cover(seq, seq.max_element)


def bench_oracle(n: int):
    res = search.brute_force_oracle(n, SIDON)
    return res.optimum_set.elements, str(res.objective.lo)


def bench_bnb(n: int):
    res = search.max_reciprocal_subset(n, SIDON)
    return res.optimum_set.elements, str(res.objective.lo), res.nodes_explored


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scale", choices=sorted(SCALES), default="default")
    args = ap.parse_args()
    sizes = SCALES[args.scale]

    if not NUMBA_AVAILABLE:
        print("numba not available; only the numpy backend will run")

    cover_seq = construct.mian_chowla(sizes["cover_terms"])
    cases = [
        (f"greedy sidon, {sizes['greedy_terms']} terms",
         bench_greedy, (sizes["greedy_terms"],)),
        (f"greedy sum-free, {sizes['greedy_terms']} terms",
         bench_sumfree, (sizes["greedy_terms"],)),
        (f"sumset cover, {sizes['cover_terms']}-term prefix",
         bench_cover, (cover_seq,)),
        (f"oracle enumeration, n_cap={sizes['oracle_n']}",
         bench_oracle, (sizes["oracle_n"],)),
        (f"branch and bound, n_cap={sizes['bnb_n']}",
         bench_bnb, (sizes["bnb_n"],)),
    ]

    backends = ["numba", "numpy"] if NUMBA_AVAILABLE else ["numpy"]
    if NUMBA_AVAILABLE:
        # compile outside the timed region
        with using_backend("numba"):
            bench_greedy(16)
            bench_sumfree(16)
            bench_cover(construct.mian_chowla(16))
            bench_oracle(8)
            bench_bnb(8)

    width = max(len(name) for name, _, _ in cases)
    header = f"{'kernel'.ljust(width)}  " + "".join(
        f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn, fnargs in cases:
        times = {}
        results = {}
        for b in backends:
            with using_backend(b):
                times[b], results[b] = timed(fn, *fnargs)
        if len(backends) == 2 and results["numba"] != results["numpy"]:
            raise AssertionError(f"backend mismatch in {name}")
        line = name.ljust(width) + "  " + "".join(
            f"{times[b]:>11.3f}s" for b in backends)
        if len(backends) == 2:
            line += f"{times['numpy'] / max(times['numba'], 1e-9):>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
