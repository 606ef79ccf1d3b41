"""Divide-and-Select: predict the sde change of every generator without multiplying.

Everything here works on numerator parities of the common-denominator form
held by :class:`~chansynth.channel.ChannelMatrix`.

For ``R(P)`` at level ``K`` the product sits at level ``K+1`` with copied rows
``(2B, A)`` and mixed rows ``(A_r +- A_s, B_r +- B_s)``.  Hence

* sde goes up iff some mixed pair has exactly one odd ``A`` (a lone max entry);
* otherwise it stays iff a copied row holds an odd ``A`` or some mixed pair
  has ``B_r + B_s`` odd (two max entries whose ``b + d`` is odd, or a
  second-max entry meeting a lower one);
* otherwise it drops.

For ``G_{P1,P2}`` over ``Z[1/2]`` the same argument with groups of four rows
gives: up iff a group has an odd number of odd numerators; stays iff a copied
row is odd or a signed group sum is ``2 mod 4``; drops otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import SQRT2, ChannelMatrix, SdeProfile, apply_action, sde_profile
from .genset import ActionSpace, CLIFFORD_T

UNCONSIDERED, DEC, SAME, INC = 0, 1, 2, 3
LABEL_NAMES = {DEC: "dec", SAME: "same", INC: "inc"}


@dataclass(frozen=True, eq=False)
class InteractionTable:
    """Mixing structure of every generator in an action space.

    ``mixed[g, r]`` says whether row ``r`` is combined by generator ``g``;
    ``partners[g, r]`` lists the rows it is combined with (``t = 1`` or ``3``)
    and ``signs[g, r]`` the coefficients, diagonal first.
    """

    space: ActionSpace
    mixed: np.ndarray      # bool[G, R]
    partners: np.ndarray   # int[G, R, t]
    signs: np.ndarray      # int[G, R, t+1]

    def pairs(self, g: int) -> list[tuple[int, int]]:
        """Unordered anticommuting row pairs ``(r, s)`` with ``r < s`` (Clifford+T only)."""
        rows = np.flatnonzero(self.mixed[g])
        s = self.partners[g, rows, 0]
        keep = rows < s
        return list(zip(rows[keep].tolist(), s[keep].tolist()))


@lru_cache(maxsize=None)
def interaction_table(space: ActionSpace) -> InteractionTable:
    chans = [space.channel(i) for i in range(len(space))]
    mixed = np.stack([c.mixed for c in chans])
    partners = np.stack([c.partners for c in chans])
    signs = np.stack([c.signs for c in chans])
    for x in (mixed, partners, signs):
        x.setflags(write=False)
    return InteractionTable(space, mixed, partners, signs)


def _row_labels(bits: np.ndarray) -> np.ndarray:
    """Small integer per row, equal for rows with the same bit pattern."""
    packed = np.packbits(bits, axis=1)
    _, inv = np.unique(packed, axis=0, return_inverse=True)
    return inv.reshape(-1)


def _check(m: ChannelMatrix, space: ActionSpace) -> None:
    if m.n != space.n or m.ring != space.ring:
        raise ValueError(f"{m!r} does not match action space ({space.flavor}, n={space.n})")


def classify_two_way(m: ChannelMatrix, profile: SdeProfile | None, space: ActionSpace) -> np.ndarray:
    """Boolean per generator: does left multiplication raise the sde?"""
    _check(m, space)
    profile = profile or sde_profile(m)
    tab = interaction_table(space)
    odd = profile.max_mask
    G = len(space)
    inc = np.zeros(G, dtype=bool)
    if space.flavor == CLIFFORD_T:
        # a lone max entry at row i pairs with a non-max entry for every P anticommuting with Pauli(i)
        lone_rows = {int(profile.s_col[j][0]) for j in profile.s_col1}
        if lone_rows:
            lone = np.zeros(m.dim, dtype=bool)
            lone[list(lone_rows)] = True
            inc |= (tab.mixed & lone[None, :]).any(axis=1)
        todo = np.flatnonzero(~inc)
        if len(todo):
            lab = _row_labels(odd)
            part = tab.partners[todo, :, 0]
            differ = (lab[None, :] != lab[part]) & tab.mixed[todo]
            inc[todo] = differ.any(axis=1)
        return inc
    # dyadic: a group with an odd count of odd numerators leaves an odd sum
    words = np.packbits(odd, axis=1)
    for g in range(G):
        rows = np.flatnonzero(tab.mixed[g])
        if not len(rows):
            continue
        p = tab.partners[g, rows]
        acc = words[rows] ^ words[p[:, 0]] ^ words[p[:, 1]] ^ words[p[:, 2]]
        inc[g] = acc.any()
    return inc


def classify_three_way(m: ChannelMatrix, profile: SdeProfile | None, space: ActionSpace) -> np.ndarray:
    """Label per generator: ``DEC``, ``SAME`` or ``INC`` for left multiplication."""
    _check(m, space)
    profile = profile or sde_profile(m)
    inc = classify_two_way(m, profile, space)
    labels = np.full(len(space), UNCONSIDERED, dtype=np.int8)
    labels[inc] = INC
    if m.k == 0:
        labels[~inc] = SAME
        return labels
    tab = interaction_table(space)
    odd_rows = profile.max_mask.any(axis=1)
    todo = np.flatnonzero(~inc)
    if space.flavor == CLIFFORD_T:
        b_odd = (m.b & 1).astype(bool)
        lab = _row_labels(b_odd)
        for g in todo:
            mixed = tab.mixed[g]
            if (odd_rows & ~mixed).any():
                labels[g] = SAME
                continue
            part = tab.partners[g, :, 0]
            labels[g] = SAME if ((lab != lab[part]) & mixed).any() else DEC
        return labels
    a4 = (m.a & 3).astype(np.int64)
    for g in todo:
        mixed = tab.mixed[g]
        if (odd_rows & ~mixed).any():
            labels[g] = SAME
            continue
        rows = np.flatnonzero(mixed)
        p, s = tab.partners[g, rows], tab.signs[g, rows]
        tot = (s[:, 0:1] * a4[rows] + s[:, 1:2] * a4[p[:, 0]]
               + s[:, 2:3] * a4[p[:, 1]] + s[:, 3:4] * a4[p[:, 2]])
        labels[g] = SAME if ((tot & 3) == 2).any() else DEC
    return labels


def classify_oracle(m: ChannelMatrix, space: ActionSpace, side: str = "left") -> np.ndarray:
    """Labels by actually multiplying; the reference for the fast classifiers."""
    _check(m, space)
    out = np.empty(len(space), dtype=np.int8)
    for i in range(len(space)):
        k = apply_action(m, space.channel(i), side).k
        out[i] = INC if k > m.k else (SAME if k == m.k else DEC)
    return out


def side_labels(m: ChannelMatrix, space: ActionSpace) -> tuple[np.ndarray, np.ndarray]:
    """Three-way labels for left actions (on ``M``) and right actions (on ``M^T``)."""
    mt = m.transpose()
    return (classify_three_way(m, sde_profile(m), space),
            classify_three_way(mt, sde_profile(mt), space))


class EmptyMaskError(ValueError):
    """No action is available; raised for empty generator sets."""


def _select_side(labels: np.ndarray) -> np.ndarray:
    inc = labels == INC
    n_inc, n_non = int(inc.sum()), int((~inc).sum())
    if n_non == 0:
        return inc.copy()
    if n_inc == 0 or n_non <= n_inc:
        return ~inc
    return inc.copy()


def select_mask(left: np.ndarray, right: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per side, keep the smaller of {inc} and {non-inc}; ties go to non-inc.

    Returns ``(left_mask, right_mask)`` as boolean arrays over generators.
    When every action raises the sde (Toffoli is an example) the inc groups
    are the only non-empty ones and are kept.
    """
    if len(left) == 0 and len(right) == 0:
        raise EmptyMaskError("the action space has no generators")
    return _select_side(left), _select_side(right)


def action_mask(m: ChannelMatrix, space: ActionSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(left_labels, right_labels, left_mask, right_mask)`` for a state."""
    left, right = side_labels(m, space)
    lm, rm = select_mask(left, right)
    return left, right, lm, rm
