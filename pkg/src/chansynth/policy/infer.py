"""Policy rollouts without tree search: Greedy and Sample_k."""
from __future__ import annotations

import time

import numpy as np

from ..channel import ChannelMatrix, extract_residue, is_clifford
from ..search import SynthesisResult
from .env import SynthesisEnv
from .network import Network


def _rollout(state: ChannelMatrix, net: Network, env: SynthesisEnv, max_steps: int,
             rng: np.random.Generator | None, temperature: float) -> tuple[list[int], ChannelMatrix]:
    slots: list[int] = []
    while not is_clifford(state) and len(slots) < max_steps:
        mask = env.legal(state)
        pol, _ = net.forward(env.observe(state), mask)
        if rng is None:
            a = int(np.argmax(pol))
        else:
            w = np.where(mask, pol, 0.0) ** (1.0 / temperature)
            if w.sum() <= 0.0:
                w = mask.astype(float)
            a = int(rng.choice(len(w), p=w / w.sum()))
        state, _ = env.step(state, a)
        slots.append(a)
    return slots, state


def infer(state: ChannelMatrix, net: Network, env: SynthesisEnv, mode: str = "greedy", *,
          k: int = 10, temperature: float = 1.0, seed: int = 0, max_steps: int = 100) -> SynthesisResult:
    """Greedy decoding, or the best of ``k`` sampled rollouts.

    Rollout 0 of ``sample`` mode is the greedy rollout and rollout ``i`` uses
    the generator seeded with ``(seed, i)``.  So a larger ``k`` only adds
    rollouts, and its best count can never be worse.
    """
    t0 = time.perf_counter()
    if mode not in ("greedy", "sample"):
        raise ValueError(f"mode must be 'greedy' or 'sample', got {mode!r}")
    runs = 1 if mode == "greedy" else k
    best = None
    for i in range(runs):
        rng = None if i == 0 else np.random.default_rng([seed, i])
        slots, final = _rollout(state, net, env, max_steps, rng, temperature)
        if is_clifford(final) and (best is None or len(slots) < len(best[0])):
            best = (slots, final)
    space = env.space
    if best is None:
        return SynthesisResult(space.n, space.flavor, [], None, False, (time.perf_counter() - t0) * 1e3,
                               {"reason": "max_steps"})
    actions = [space.action_at(s) for s in best[0]]
    return SynthesisResult(space.n, space.flavor, actions, extract_residue(best[1]), True,
                           (time.perf_counter() - t0) * 1e3)
