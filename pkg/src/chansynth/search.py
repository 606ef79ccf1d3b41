"""Search without learning: random instances, sde-greedy, iterative deepening, replay checks.

Conventions
-----------
A left action with generator ``g`` maps the state ``X`` to ``<g> X``; a right
action maps it to ``X <g>^T``.  A search succeeds once the state is a signed
permutation ``F`` (the Clifford residue).  With left generators ``g_1..g_m``
and right generators ``h_1..h_k`` (in the order applied) the input is

    X = <g_1>^T ... <g_m>^T  F  <h_k> ... <h_1>

so the unitary is ``g_1^dag ... g_m^dag C_F h_k ... h_1`` up to global phase,
with one non-Clifford gate per action.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .channel import (ChannelMatrix, CliffordResidue, apply_action, coset_label, extract_residue,
                      left_mul_fast, right_mul_fast,
                      is_clifford, permute_columns)
from .extract import clifford_columns, random_clifford
from .genset import Action, ActionSpace, action_space
from .prune import DEC, INC, SAME, action_mask


@dataclass
class SynthesisResult:
    n: int
    flavor: str
    actions: list[Action]
    residue: CliffordResidue | None
    success: bool
    elapsed_ms: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def output_count(self) -> int:
        return len(self.actions)

    def to_json(self, space: ActionSpace | None = None, *, timing: bool = True) -> dict:
        space = space or action_space(self.n, self.flavor)
        out = {
            "n": self.n,
            "flavor": self.flavor,
            "actions": [space.action_to_json(a) for a in self.actions],
            "residue": None if self.residue is None else self.residue.to_json(),
            "count": self.output_count,
            "success": self.success,
        }
        if timing:
            out["ms"] = round(self.elapsed_ms, 3)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> SynthesisResult:
        n, flavor = int(obj["n"]), obj["flavor"]
        space = action_space(n, flavor)
        res = obj.get("residue")
        return cls(n, flavor, [space.action_from_json(a) for a in obj["actions"]],
                   None if res is None else CliffordResidue.from_json(res),
                   bool(obj["success"]), float(obj.get("ms", 0.0)))


@dataclass
class RandomInstance:
    state: ChannelMatrix
    input_count: int
    seed: int | None
    flavor: str
    actions: list[Action] = field(default_factory=list)


def apply(state: ChannelMatrix, a: Action, space: ActionSpace) -> ChannelMatrix:
    return apply_action(state, space.channel(a.gen), a.side)


def apply_all(state: ChannelMatrix, actions: Iterable[Action], space: ActionSpace) -> ChannelMatrix:
    for a in actions:
        state = apply(state, a, space)
    return state


def undo(state: ChannelMatrix, a: Action, space: ActionSpace) -> ChannelMatrix:
    """Inverse of :func:`apply`: channels are orthogonal, so the transpose undoes them."""
    g = space.channel(a.gen)
    if a.side == "left":
        return left_mul_fast(g.transpose(), state)
    return right_mul_fast(state, g)


def random_instance(n: int, flavor: str, D: int, seed: int | None = None,
                    rng: np.random.Generator | None = None) -> RandomInstance:
    """Identity evolved by ``D`` uniformly random actions, then a random right Clifford.

    The Clifford is a random ``H``/``S``/``CNOT`` word, so the instance is
    always the channel of an actual unitary.
    """
    if D < 0:
        raise ValueError("D must be >= 0")
    space = action_space(n, flavor)
    rng = rng if rng is not None else np.random.default_rng(seed)
    state = ChannelMatrix.identity(n, space.ring)
    acts = []
    for _ in range(D):
        a = Action(int(rng.integers(len(space))), "left" if rng.integers(2) == 0 else "right")
        state = apply(state, a, space)
        acts.append(a)
    state = permute_columns(state, *clifford_columns(random_clifford(n, rng)))
    return RandomInstance(state, D, seed, flavor, acts)


def _finish(space: ActionSpace, actions: list[Action], state: ChannelMatrix, t0: float,
            **info) -> SynthesisResult:
    ok = is_clifford(state)
    return SynthesisResult(space.n, space.flavor, actions, extract_residue(state) if ok else None, ok,
                           (time.perf_counter() - t0) * 1e3, info)


def ranked_actions(state: ChannelMatrix, space: ActionSpace) -> list[tuple[int, Action]]:
    """Unmasked actions with their labels, best first (dec, same, inc; then index, left first)."""
    left, right, lm, rm = action_mask(state, space)
    order = {DEC: 0, SAME: 1, INC: 2}
    out = []
    for labels, mask, side in ((left, lm, "left"), (right, rm, "right")):
        for i in np.flatnonzero(mask):
            out.append((int(labels[i]), Action(int(i), side)))
    out.sort(key=lambda t: (order[t[0]], t[1].gen, t[1].side != "left"))
    return out


def greedy_sde(state: ChannelMatrix, space: ActionSpace | None = None, max_steps: int = 200, *,
               time_budget_s: float | None = None, rng: np.random.Generator | None = None,
               avoid_revisits: bool = False, climb: bool = True) -> SynthesisResult:
    """Follow the best unmasked non-increasing action until the state is Clifford.

    Ties go to the lowest generator index, then left before right; with ``rng``
    they are broken uniformly at random instead.  With ``avoid_revisits`` an
    action whose successor's coset was already visited is skipped, which stops
    the walk from cycling through sde plateaus.

    Some states (Toffoli among them) have no non-increasing action at all.
    With ``climb`` the walk then takes the first unmasked increasing action
    instead of giving up; without it such states fail immediately.
    """
    space = space or action_space(state.n, "clifford_t" if state.ring == "sqrt2" else "clifford_cs")
    t0 = time.perf_counter()
    actions: list[Action] = []
    seen = {coset_label(state).key()} if avoid_revisits else set()
    while not is_clifford(state):
        if len(actions) >= max_steps:
            return _finish(space, actions, state, t0, reason="max_steps")
        if time_budget_s is not None and time.perf_counter() - t0 > time_budget_s:
            return _finish(space, actions, state, t0, reason="time_budget")
        ranked = ranked_actions(state, space)
        cands = [(lab, a) for lab, a in ranked if lab != INC]
        if not cands and climb:
            cands = ranked
        if rng is not None and cands:
            best = cands[0][0]
            tied = [c for c in cands if c[0] == best]
            rest = [c for c in cands if c[0] != best]
            rng.shuffle(tied)
            cands = tied + rest
        nxt = None
        for _, a in cands:
            child = apply(state, a, space)
            if avoid_revisits:
                key = coset_label(child).key()
                if key in seen:
                    continue
                seen.add(key)
            nxt = (a, child)
            break
        if nxt is None:
            return _finish(space, actions, state, t0, reason="stuck")
        actions.append(nxt[0])
        state = nxt[1]
    return _finish(space, actions, state, t0)


class BudgetExhausted(RuntimeError):
    pass


def exhaustive(state: ChannelMatrix, depth_budget: int = 8, space: ActionSpace | None = None, *,
               time_budget_s: float | None = None, dedup: bool = True,
               use_mask: bool = True) -> SynthesisResult:
    """Iterative deepening over unmasked actions; the first hit is a shortest masked solution.

    States are deduplicated by coset label within each iteration, keeping the
    largest remaining depth at which a label was expanded.  The sde is a lower
    bound on the remaining length since one action moves it by at most one.
    """
    space = space or action_space(state.n, "clifford_t" if state.ring == "sqrt2" else "clifford_cs")
    t0 = time.perf_counter()
    stats = {"nodes": 0}

    def children(x: ChannelMatrix) -> list[Action]:
        if use_mask:
            return [a for _, a in ranked_actions(x, space)]
        return list(space.actions())

    def dfs(x: ChannelMatrix, rem: int, path: list[Action], table: dict) -> list[Action] | None:
        stats["nodes"] += 1
        if is_clifford(x):
            return path
        if rem == 0 or x.k > rem:
            return None
        if time_budget_s is not None and time.perf_counter() - t0 > time_budget_s:
            raise BudgetExhausted
        if dedup:
            key = coset_label(x).key()
            if table.get(key, -1) >= rem:
                return None
            table[key] = rem
        for a in children(x):
            found = dfs(apply(x, a, space), rem - 1, path + [a], table)
            if found is not None:
                return found
        return None

    try:
        for limit in range(state.k, depth_budget + 1):
            found = dfs(state, limit, [], {})
            if found is not None:
                return _finish(space, found, apply_all(state, found, space), t0, nodes=stats["nodes"])
    except BudgetExhausted:
        return _finish(space, [], state, t0, reason="time_budget", nodes=stats["nodes"])
    return _finish(space, [], state, t0, reason="depth_budget", nodes=stats["nodes"])


def verify(state: ChannelMatrix, result: SynthesisResult, space: ActionSpace | None = None) -> bool:
    """Replay the actions and check the leftover is exactly the stated Clifford residue."""
    if not result.success or result.residue is None:
        return False
    space = space or action_space(result.n, result.flavor)
    if state.n != space.n or state.ring != space.ring:
        return False
    try:
        residual = apply_all(state, result.actions, space)
    except (ValueError, IndexError):
        return False
    if not is_clifford(residual) or extract_residue(residual) != result.residue:
        return False
    # rebuild the input from the residue as an independent second check
    back = result.residue.to_channel(space.n, space.ring)
    for a in reversed(result.actions):
        back = undo(back, a, space)
    return back == state


def reconstruct(result: SynthesisResult) -> ChannelMatrix:
    space = action_space(result.n, result.flavor)
    back = result.residue.to_channel(space.n, space.ring)
    for a in reversed(result.actions):
        back = undo(back, a, space)
    return back


def replay_json(actions: Sequence[dict], space: ActionSpace) -> list[Action]:
    return [space.action_from_json(a) for a in actions]
