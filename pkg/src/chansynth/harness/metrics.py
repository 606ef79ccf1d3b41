"""Benchmark metrics in exact rational arithmetic."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def improvement(input_count: int, output_count: int) -> Fraction:
    """``1 - output/input`` as an exact fraction."""
    if input_count <= 0:
        raise ValueError("input count must be positive")
    return 1 - Fraction(output_count, input_count)


def success_rate(successes: int, trials: int) -> Fraction:
    if trials <= 0:
        raise ValueError("need at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    return Fraction(successes, trials)


def mean(xs: Sequence[Fraction]) -> Fraction | None:
    return sum(xs, Fraction(0)) / len(xs) if xs else None


def variance(xs: Sequence[Fraction]) -> Fraction | None:
    """Population variance (divides by ``len(xs)``)."""
    if not xs:
        return None
    m = mean(xs)
    return sum(((x - m) ** 2 for x in xs), Fraction(0)) / len(xs)


def render(x: Fraction | None, digits: int = 6) -> str | None:
    """Decimal rendering used only at output time."""
    return None if x is None else f"{float(x):.{digits}f}"
