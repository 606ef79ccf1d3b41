"""Single-player PUCT search guided by the policy/value network."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..channel import ChannelMatrix, is_clifford
from .config import MCTSConfig
from .env import SynthesisEnv, reward, step_kind
from .network import Network


@dataclass(eq=False)
class MCTSNode:
    state: ChannelMatrix
    depth: int                  # steps taken since the start of the episode
    terminal: bool
    mask: np.ndarray | None = None
    prior: np.ndarray | None = None
    N: np.ndarray | None = None
    W: np.ndarray | None = None
    value: float = 0.0
    children: dict = field(default_factory=dict)   # slot -> (child, reward)

    @property
    def expanded(self) -> bool:
        return self.prior is not None

    def q(self) -> np.ndarray:
        # unvisited edges count as value 0
        return np.divide(self.W, self.N, out=np.zeros_like(self.W), where=self.N > 0)


def _expand(node: MCTSNode, net: Network, env: SynthesisEnv) -> float:
    node.mask = env.legal(node.state)
    node.prior, v = net.forward(env.observe(node.state), node.mask)
    node.N = np.zeros(env.num_slots)
    node.W = np.zeros(env.num_slots)
    node.value = float(v)
    return node.value


def _select(node: MCTSNode, c_puct: float) -> int:
    total = node.N.sum()
    u = node.q() + c_puct * node.prior * math.sqrt(total) / (1.0 + node.N)
    u = np.where(node.mask, u, -np.inf)
    return int(np.argmax(u))


def mcts_search(root_state: ChannelMatrix, net: Network, env: SynthesisEnv, cfg: MCTSConfig,
                *, depth: int = 0, cap: int, max_steps: int) -> tuple[np.ndarray, float, MCTSNode]:
    """Run ``cfg.simulations`` simulations; returns ``(pi, root value, root)``.

    ``cap`` is the episode length limit and ``max_steps`` the reward scale.
    Each edge carries its shaped reward, and backups add the rewards below
    an edge to the leaf's value estimate (zero at terminal leaves).
    """
    if is_clifford(root_state):
        raise ValueError("root state is already Clifford")
    root = MCTSNode(root_state, depth, False)
    _expand(root, net, env)
    for _ in range(cfg.simulations):
        node, path = root, []
        while node.expanded and not node.terminal:
            a = _select(node, cfg.c_puct)
            if a not in node.children:
                nxt, ok = env.step(node.state, a)
                t = node.depth + 1
                kind = step_kind(ok, t, cap)
                child = MCTSNode(nxt, t, ok or t >= cap)
                node.children[a] = (child, reward(kind, max_steps))
            child, r = node.children[a]
            path.append((node, a, r))
            node = child
        leaf = 0.0 if node.terminal else _expand(node, net, env)
        g = leaf
        for parent, a, r in reversed(path):
            g = r + g
            parent.N[a] += 1
            parent.W[a] += g
    pi = root.N / root.N.sum()
    return pi, root.value, root
