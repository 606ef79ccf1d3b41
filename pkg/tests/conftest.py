"""Shared helpers: seeded random reachable states and the dense channel oracle."""
from __future__ import annotations

import sys

import numpy as np
import pytest

from chansynth import dense
from chansynth.channel import ChannelMatrix
from chansynth.genset import CLIFFORD_CS, CLIFFORD_T
from chansynth.search import random_instance

# (flavor, n) combinations small enough for exhaustive oracle comparisons
SMALL_SPACES = [(CLIFFORD_T, 1), (CLIFFORD_T, 2), (CLIFFORD_CS, 2)]


def reachable_states(flavor: str, n: int, count: int, seed: int, d_max: int = 12) -> list[ChannelMatrix]:
    rng = np.random.default_rng(seed)
    return [random_instance(n, flavor, int(rng.integers(0, d_max + 1)), rng=rng).state for _ in range(count)]


def oracle_channel(u, ring: str = "sqrt2") -> ChannelMatrix:
    """Channel of a dense exact unitary via the trace formula."""
    return dense.to_channel(u, ring)


def ring_of(flavor: str) -> str:
    return "sqrt2" if flavor == CLIFFORD_T else "dyadic"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
