"""Kernel backend selection.

The hot inner loops (greedy candidate scans, subset enumeration, branch and
bound) exist twice: a numba @njit version and a pure-numpy fallback.  The
active backend is chosen by the SIDONKIT_BACKEND environment variable
("numba" or "numpy") and can be switched at runtime with set_backend(); the
default is numba whenever it imports.  Both paths compute identical results;
benchmarks/bench_kernels.py measures the gap.
"""

from __future__ import annotations

import os
import warnings
from contextlib import contextmanager

try:
    from numba import njit as _numba_njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    _numba_njit = None
    NUMBA_AVAILABLE = False

_VALID = ("numba", "numpy")


def _initial_backend() -> str:
    req = os.environ.get("SIDONKIT_BACKEND", "").strip().lower()
    if req and req not in _VALID:
        raise ValueError(f"SIDONKIT_BACKEND must be one of {_VALID}, got {req!r}")
    if req == "numba" and not NUMBA_AVAILABLE:
        warnings.warn("SIDONKIT_BACKEND=numba but numba is not importable; using numpy")
        return "numpy"
    if req:
        return req
    return "numba" if NUMBA_AVAILABLE else "numpy"


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


@contextmanager
def using_backend(name: str):
    prev = get_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def njit(func):
    """Compile with numba when available; otherwise return the function as-is.

    Decorated functions stay importable without numba so the numpy backend can
    still call their (slow) plain-Python form where no vectorized variant
    exists.
    """
    if NUMBA_AVAILABLE:
        return _numba_njit(cache=True)(func)
    return func
