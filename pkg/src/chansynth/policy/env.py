"""Environment glue: legal-action masks, observations and rewards."""
from __future__ import annotations

from collections import OrderedDict

import numpy as np

from ..channel import ChannelMatrix, is_clifford
from ..genset import ActionSpace, action_space
from ..prune import action_mask
from ..search import apply
from .config import EncoderConfig
from .encode import channels, encode

SUCCESS, FAIL, STEP = "success", "fail", "step"


def reward(step_kind: str, max_steps: int) -> float:
    """``+1`` on reaching a Clifford, ``-0.5`` when the step cap runs out, else ``-0.5/max_steps``."""
    if step_kind == SUCCESS:
        return 1.0
    if step_kind == FAIL:
        return -0.5
    if step_kind == STEP:
        return -0.5 / max_steps
    raise ValueError(f"unknown step kind {step_kind!r}")


def episode_return(kinds, max_steps: int) -> float:
    """Undiscounted sum of rewards over a trajectory of step kinds."""
    return float(sum(reward(k, max_steps) for k in kinds))


def step_kind(success: bool, t: int, cap: int) -> str:
    """Kind of the ``t``-th transition (1-based) of an episode capped at ``cap`` steps."""
    if success:
        return SUCCESS
    return FAIL if t >= cap else STEP


class _LRU(OrderedDict):
    def __init__(self, size: int) -> None:
        super().__init__()
        self.size = size

    def put(self, k, v):
        self[k] = v
        self.move_to_end(k)
        if len(self) > self.size:
            self.popitem(last=False)


class SynthesisEnv:
    """Wraps an action space with cached masks and observations."""

    def __init__(self, n: int, flavor: str, enc: EncoderConfig | None = None, cache: int = 50_000) -> None:
        self.space: ActionSpace = action_space(n, flavor)
        self.enc = enc or EncoderConfig()
        self._masks = _LRU(cache)
        self._obs = _LRU(cache)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def num_slots(self) -> int:
        return self.space.num_slots

    @property
    def obs_shape(self) -> tuple[int, int, int]:
        d = 4 ** self.space.n
        return d, d, channels(self.space.ring, self.enc)

    def legal(self, state: ChannelMatrix) -> np.ndarray:
        key = state.key()
        m = self._masks.get(key)
        if m is None:
            _, _, lm, rm = action_mask(state, self.space)
            m = self.space.slot_mask(lm, rm)
            m.setflags(write=False)
            self._masks.put(key, m)
        return m

    def observe(self, state: ChannelMatrix) -> np.ndarray:
        key = state.key()
        o = self._obs.get(key)
        if o is None:
            o = encode(state, self.enc)
            o.setflags(write=False)
            self._obs.put(key, o)
        return o

    def step(self, state: ChannelMatrix, slot: int) -> tuple[ChannelMatrix, bool]:
        a = self.space.action_at(slot)
        if a is None:
            raise ValueError(f"slot {slot} is a permanently masked identity slot")
        nxt = apply(state, a, self.space)
        return nxt, is_clifford(nxt)
