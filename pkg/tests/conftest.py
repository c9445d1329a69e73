from __future__ import annotations

import numpy as np
import pytest

from sidonkit import construct
from sidonkit.sequences import SIDON, IntegerSequence, verify


@pytest.fixture(scope="session")
def mc1099() -> IntegerSequence:
    return construct.mian_chowla(1099)


@pytest.fixture(scope="session")
def mc2000() -> IntegerSequence:
    return construct.mian_chowla(2000)


@pytest.fixture(scope="session")
def mc100(mc1099) -> IntegerSequence:
    return mc1099.prefix(100)


@pytest.fixture(scope="session")
def mc50(mc1099) -> IntegerSequence:
    return mc1099.prefix(50)


@pytest.fixture(scope="session")
def zhang400() -> IntegerSequence:
    return construct.zhang(400)


def random_sidon(rng: np.random.Generator, max_value: int,
                 max_len: int) -> IntegerSequence:
    """Random Sidon set by greedy filtering of a random candidate stream."""
    from sidonkit.sequences import make_checker
    checker = make_checker(SIDON)
    out = []
    for c in rng.permutation(np.arange(1, max_value + 1))[:4 * max_len]:
        c = int(c)
        if len(out) >= max_len:
            break
        if checker.can_add(c):
            checker.add(c)
            out.append(c)
    return IntegerSequence.of(out)


def random_subset(rng: np.random.Generator, max_value: int,
                  density: float = 0.3) -> IntegerSequence:
    picks = np.arange(1, max_value + 1)[
        rng.random(max_value) < density]
    return IntegerSequence.of(int(x) for x in picks)
