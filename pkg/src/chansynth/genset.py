"""Action alphabets for Clifford+T and Clifford+CS synthesis.

Clifford+T uses one ``R(P)`` per non-identity Pauli.  Clifford+CS uses one
``G_{P1,P2}`` per class of commuting, distinct, non-identity pairs, where the
pairs ``(P1, P2)``, ``(P2, P1)`` and ``(P1, P1 P2)`` (phase dropped) belong to
the same class.  The class representative is its two smallest codes.

Every action is a generator applied on the left or the right of the state.
Policy networks see a fixed slot layout of ``2 * slots_per_side`` logits.  For
Clifford+T that is ``2 * 4**n`` slots indexed by Pauli code, so the identity
slot on each side exists but is permanently masked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import pauli
from .channel import DYADIC, SQRT2, GeneratorChannel, g_channel, r_channel

CLIFFORD_T = "clifford_t"
CLIFFORD_CS = "clifford_cs"
FLAVORS = (CLIFFORD_T, CLIFFORD_CS)
SIDES = ("left", "right")


def canonical_cs_pair(p1: int, p2: int) -> tuple[int, int]:
    """Class representative of ``G_{P1,P2}``: the two smallest of ``{P1, P2, P1 P2}``."""
    a, b, _ = sorted((p1, p2, p1 ^ p2))
    return a, b


def cs_class(p1: int, p2: int) -> list[tuple[int, int]]:
    """All six ordered pairs in the class of ``(P1, P2)``."""
    tri = (p1, p2, p1 ^ p2)
    return [(x, y) for x in tri for y in tri if x != y]


def cs_count_formula(n: int) -> float:
    """Closed-form count of CS generators as a function of ``n``."""
    return (16 ** n - 13 ** n - 4 ** n + 1) / 8 + (12 ** n - 2 * 6 ** n) / 12


@dataclass(frozen=True)
class Action:
    gen: int          # index into ActionSpace.generators
    side: str         # "left" or "right"

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")


@dataclass(frozen=True, eq=False)
class ActionSpace:
    n: int
    flavor: str
    generators: tuple[tuple[int, ...], ...]
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index.update({g: i for i, g in enumerate(self.generators)})

    @property
    def ring(self) -> str:
        return SQRT2 if self.flavor == CLIFFORD_T else DYADIC

    @property
    def sides(self) -> tuple[str, str]:
        return SIDES

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def num_actions(self) -> int:
        return 2 * len(self.generators)

    @property
    def slots_per_side(self) -> int:
        return 4 ** self.n if self.flavor == CLIFFORD_T else len(self.generators)

    @property
    def num_slots(self) -> int:
        return 2 * self.slots_per_side

    def slot(self, a: Action) -> int:
        """Flat policy index of an action."""
        base = 0 if a.side == "left" else self.slots_per_side
        if self.flavor == CLIFFORD_T:
            return base + self.generators[a.gen][0]
        return base + a.gen

    def action_at(self, slot: int) -> Action | None:
        """Inverse of :meth:`slot`; ``None`` for identity slots."""
        side, k = divmod(slot, self.slots_per_side)
        side_name = SIDES[side]
        if self.flavor == CLIFFORD_T:
            return None if k == 0 else Action(k - 1, side_name)
        return Action(k, side_name)

    def actions(self) -> Iterator[Action]:
        for side in SIDES:
            for i in range(len(self.generators)):
                yield Action(i, side)

    def channel(self, i: int) -> GeneratorChannel:
        g = self.generators[i]
        return r_channel(g[0], self.n) if self.flavor == CLIFFORD_T else g_channel(g[0], g[1], self.n)

    def index_of(self, ident) -> int:
        if isinstance(ident, str):
            ident = (pauli.from_string(ident),)
        elif isinstance(ident, int):
            ident = (ident,)
        elif isinstance(ident, (list, tuple)) and ident and isinstance(ident[0], str):
            ident = tuple(pauli.from_string(s) for s in ident)
        ident = tuple(int(x) for x in ident)
        if self.flavor == CLIFFORD_CS:
            ident = canonical_cs_pair(*ident)
        try:
            return self._index[ident]
        except KeyError:
            raise ValueError(f"{ident} is not a generator of this action space") from None

    def gen_label(self, i: int):
        g = self.generators[i]
        if self.flavor == CLIFFORD_T:
            return pauli.to_string(g[0], self.n)
        return [pauli.to_string(p, self.n) for p in g]

    def action_to_json(self, a: Action) -> dict:
        return {"gen": self.gen_label(a.gen), "side": a.side}

    def action_from_json(self, obj: dict) -> Action:
        return Action(self.index_of(obj["gen"]), obj["side"])

    def slot_mask(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Expand per-generator boolean masks (one per side) to the slot layout."""
        out = np.zeros(self.num_slots, dtype=bool)
        idx = np.array([self.slot(Action(i, "left")) for i in range(len(self))])
        out[idx] = left
        out[idx + self.slots_per_side] = right
        return out


@lru_cache(maxsize=None)
def enumerate_t(n: int) -> ActionSpace:
    if n < 1:
        raise ValueError("n must be >= 1")
    return ActionSpace(n, CLIFFORD_T, tuple((p,) for p in range(1, 4 ** n)))


@lru_cache(maxsize=None)
def enumerate_cs(n: int) -> ActionSpace:
    if n < 1:
        raise ValueError("n must be >= 1")
    d = 4 ** n
    reps = set()
    for p1 in range(1, d):
        for p2 in range(p1 + 1, d):
            if pauli.commutes(p1, p2):
                reps.add(canonical_cs_pair(p1, p2))
    return ActionSpace(n, CLIFFORD_CS, tuple(sorted(reps)))


def action_space(n: int, flavor: str) -> ActionSpace:
    if flavor == CLIFFORD_T:
        return enumerate_t(n)
    if flavor == CLIFFORD_CS:
        return enumerate_cs(n)
    raise ValueError(f"unknown flavor {flavor!r}")


def action_unitary(space: ActionSpace, a: Action) -> GeneratorChannel:
    if not 0 <= a.gen < len(space):
        raise IndexError(f"generator index {a.gen} out of range")
    return space.channel(a.gen)
