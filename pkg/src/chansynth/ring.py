"""Exact scalars over Z[1/sqrt2] and Z[1/2].

``SqrtExt(a, b, k)`` is the value ``(a + b*sqrt2) / sqrt2**k`` and ``Dyadic(a, k)``
is ``a / 2**k``.  Both are kept in canonical form: zero is all-zero, otherwise
``k == 0`` or ``a`` is odd, so ``k`` is the smallest denominator exponent.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

SQRT2 = math.sqrt(2.0)


def _reduce_sqrt2(a: int, b: int, k: int) -> tuple[int, int, int]:
    if k < 0:
        raise ValueError(f"denominator exponent must be non-negative, got {k}")
    if a == 0 and b == 0:
        return 0, 0, 0
    # (a + b√2)/√2^k == (b + (a/2)√2)/√2^(k-1) whenever a is even
    while k > 0 and a % 2 == 0:
        a, b = b, a // 2
        k -= 1
    return a, b, k


def _reduce_dyadic(a: int, k: int) -> tuple[int, int]:
    if k < 0:
        raise ValueError(f"denominator exponent must be non-negative, got {k}")
    if a == 0:
        return 0, 0
    if k > 0:
        tz = min((a & -a).bit_length() - 1, k)
        a >>= tz
        k -= tz
    return a, k


@dataclass(frozen=True, order=False)
class SqrtExt:
    """Element ``(a + b*sqrt2) / sqrt2**k`` of Z[1/sqrt2], canonical on construction."""

    a: int
    b: int
    k: int

    def __post_init__(self) -> None:
        a, b, k = _reduce_sqrt2(int(self.a), int(self.b), int(self.k))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_int(cls, x: int) -> SqrtExt:
        return cls(x, 0, 0)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sde(self) -> int:
        return self.k

    def _aligned(self, other: SqrtExt) -> tuple[int, int, int, int, int]:
        # lift both to the larger exponent; multiplying by √2 maps (a, b) -> (2b, a)
        k = max(self.k, other.k)
        a1, b1 = _lift(self.a, self.b, k - self.k)
        a2, b2 = _lift(other.a, other.b, k - other.k)
        return a1, b1, a2, b2, k

    def __add__(self, other: SqrtExt) -> SqrtExt:
        if not isinstance(other, SqrtExt):
            return NotImplemented
        a1, b1, a2, b2, k = self._aligned(other)
        return SqrtExt(a1 + a2, b1 + b2, k)

    def __sub__(self, other: SqrtExt) -> SqrtExt:
        if not isinstance(other, SqrtExt):
            return NotImplemented
        a1, b1, a2, b2, k = self._aligned(other)
        return SqrtExt(a1 - a2, b1 - b2, k)

    def __neg__(self) -> SqrtExt:
        return SqrtExt(-self.a, -self.b, self.k)

    def __mul__(self, other: SqrtExt) -> SqrtExt:
        if not isinstance(other, SqrtExt):
            return NotImplemented
        a = self.a * other.a + 2 * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return SqrtExt(a, b, self.k + other.k)

    def div_sqrt2(self) -> SqrtExt:
        return SqrtExt(self.a, self.b, self.k + 1) if not self.is_zero() else self

    def __float__(self) -> float:
        return (self.a + self.b * SQRT2) / SQRT2 ** self.k

    def key(self) -> tuple[int, int, int]:
        return (self.k, self.a, self.b)

    def __lt__(self, other: SqrtExt) -> bool:
        return self.key() < other.key()

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.k]

    @classmethod
    def from_json(cls, triple) -> SqrtExt:
        a, b, k = (int(t) for t in triple)
        x = cls(a, b, k)
        if (x.a, x.b, x.k) != (a, b, k):
            warnings.warn(f"non-canonical ring element {list(triple)} normalized to {x.to_json()}",
                          stacklevel=2)
        return x

    def __repr__(self) -> str:
        return f"SqrtExt({self.a}, {self.b}, {self.k})"


@dataclass(frozen=True, order=False)
class Dyadic:
    """Element ``a / 2**k`` of Z[1/2], canonical on construction."""

    a: int
    k: int

    def __post_init__(self) -> None:
        a, k = _reduce_dyadic(int(self.a), int(self.k))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_int(cls, x: int) -> Dyadic:
        return cls(x, 0)

    def is_zero(self) -> bool:
        return self.a == 0

    def sde(self) -> int:
        return self.k

    def __add__(self, other: Dyadic) -> Dyadic:
        if not isinstance(other, Dyadic):
            return NotImplemented
        k = max(self.k, other.k)
        return Dyadic((self.a << (k - self.k)) + (other.a << (k - other.k)), k)

    def __sub__(self, other: Dyadic) -> Dyadic:
        return self + (-other)

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.a, self.k)

    def __mul__(self, other: Dyadic) -> Dyadic:
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.a * other.a, self.k + other.k)

    def halve(self) -> Dyadic:
        return Dyadic(self.a, self.k + 1) if self.a else self

    def __float__(self) -> float:
        return self.a / 2.0 ** self.k

    def key(self) -> tuple[int, int]:
        return (self.k, self.a)

    def __lt__(self, other: Dyadic) -> bool:
        return self.key() < other.key()

    def to_json(self) -> list[int]:
        return [self.a, self.k]

    @classmethod
    def from_json(cls, pair) -> Dyadic:
        a, k = (int(t) for t in pair)
        x = cls(a, k)
        if (x.a, x.k) != (a, k):
            warnings.warn(f"non-canonical ring element {list(pair)} normalized to {x.to_json()}",
                          stacklevel=2)
        return x

    def __repr__(self) -> str:
        return f"Dyadic({self.a}, {self.k})"


RingElement = Union[SqrtExt, Dyadic]


def _lift(a: int, b: int, steps: int) -> tuple[int, int]:
    # multiply numerator by √2^steps
    half, odd = divmod(steps, 2)
    a, b = a << half, b << half
    if odd:
        a, b = 2 * b, a
    return a, b


def normalize(a: int, b: int, k: int) -> SqrtExt:
    return SqrtExt(a, b, k)


def sde_sqrt2(x: SqrtExt) -> int:
    return x.k


def sde_2(x: Dyadic) -> int:
    return x.k


def add(x, y):
    return x + y


def sub(x, y):
    return x - y


def negate(x):
    return -x


def div_sqrt2(x: SqrtExt) -> SqrtExt:
    return x.div_sqrt2()


def halve(x: Dyadic) -> Dyadic:
    return x.halve()


def exact_compare(x: RingElement, y: RingElement) -> int:
    """Deterministic total order on canonical elements: -1, 0 or 1.

    Compares ``(k, a, b)`` (or ``(k, a)``) lexicographically.  This is not the
    order of the real values; it only has to be fixed and total.
    """
    kx, ky = x.key(), y.key()
    return (kx > ky) - (kx < ky)
