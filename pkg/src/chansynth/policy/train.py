"""AlphaZero-style training with a reverse-construction curriculum."""
from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..channel import is_clifford
from ..search import random_instance
from .config import RLConfig
from .env import SynthesisEnv, reward, step_kind
from .infer import infer
from .mcts import mcts_search
from .network import Batch, Network, SGDMomentum


@dataclass
class TrainingSample:
    obs: np.ndarray
    mask: np.ndarray
    pi: np.ndarray
    z: float


@dataclass
class CurriculumState:
    D: int
    tau: float
    history: list = field(default_factory=list)

    def update(self, success_rate: float) -> bool:
        """Advance ``D`` when the measured success rate beats ``tau``; ``D`` never goes down."""
        self.history.append((self.D, success_rate))
        if success_rate > self.tau:
            self.D += 1
            return True
        return False


def make_network(cfg: RLConfig, env: SynthesisEnv) -> Network:
    R, _, C = env.obs_shape
    return Network(R, C, env.num_slots, cfg.network, seed=cfg.training.seed)


def self_play(net: Network, env: SynthesisEnv, cfg: RLConfig, D: int,
              rng: np.random.Generator) -> tuple[list[TrainingSample], float, bool]:
    """One episode at difficulty ``D``; returns its samples, return ``G`` and success flag."""
    tc = cfg.training
    inst = random_instance(env.n, tc.flavor, D, rng=rng)
    state = inst.state
    cap = max(D, 1)
    steps, kinds = [], []
    t = 0
    while not is_clifford(state) and t < cap:
        pi, _, _ = mcts_search(state, net, env, cfg.mcts, depth=t, cap=cap, max_steps=tc.step_cap)
        mask = env.legal(state)
        steps.append((env.observe(state), mask, pi))
        w = pi ** (1.0 / tc.temperature)
        a = int(rng.choice(len(w), p=w / w.sum()))
        state, ok = env.step(state, a)
        t += 1
        kinds.append(step_kind(ok, t, cap))
    G = float(sum(reward(k, tc.step_cap) for k in kinds))
    success = is_clifford(state)
    return [TrainingSample(o, m, p, G) for o, m, p in steps], G, success


def evaluate(net: Network, env: SynthesisEnv, cfg: RLConfig, D: int, rng: np.random.Generator,
             count: int | None = None) -> float:
    """Greedy-policy success rate on fresh instances at difficulty ``D`` (step cap ``D``)."""
    count = count or cfg.training.eval_instances
    wins = 0
    for _ in range(count):
        inst = random_instance(env.n, cfg.training.flavor, D, rng=rng)
        wins += infer(inst.state, net, env, "greedy", max_steps=max(D, 1)).success
    return wins / count


def _batch(samples: list[TrainingSample]) -> Batch:
    return Batch(np.stack([s.obs for s in samples]), np.stack([s.mask for s in samples]),
                 np.stack([s.pi for s in samples]), np.array([s.z for s in samples]))


@dataclass
class TrainResult:
    net: Network
    log: list[dict]
    curriculum: CurriculumState
    elapsed_s: float
    stop_reason: str


def train(cfg: RLConfig, *, log_path: str | Path | None = None,
          stop_condition: Callable[[CurriculumState, int], bool] | None = None,
          progress: Callable[[dict], None] | None = None) -> TrainResult:
    """Alternate self-play, SGD updates and evaluation until ``D`` passes ``D_cap``.

    The log has one record per epoch with ``epoch, D, success_rate,
    loss_policy, loss_value``; wall-clock time is kept out of it so equal
    seeds give byte-identical logs.
    """
    tc = cfg.training
    t0 = time.perf_counter()
    rng = np.random.default_rng(tc.seed)
    env = SynthesisEnv(tc.n, tc.flavor, cfg.encoder)
    net = make_network(cfg, env)
    opt = SGDMomentum(tc.lr, tc.momentum)
    replay: deque[TrainingSample] = deque(maxlen=tc.replay_capacity)
    cur = CurriculumState(tc.D_start, tc.tau)
    log: list[dict] = []
    fh = open(log_path, "w") if log_path else None
    reason = "max_epochs"
    try:
        for epoch in range(tc.max_epochs):
            if cur.D > tc.D_cap:
                reason = "D_cap"
                break
            if stop_condition is not None and stop_condition(cur, epoch):
                reason = "stop_condition"
                break
            if tc.time_budget_s is not None and time.perf_counter() - t0 > tc.time_budget_s:
                reason = "time_budget"
                break
            D = cur.D
            for _ in range(tc.episodes_per_epoch):
                samples, _, _ = self_play(net, env, cfg, D, rng)
                replay.extend(samples)
            lp, lv = [], []
            if replay:
                for _ in range(tc.updates_per_epoch):
                    idx = rng.choice(len(replay), size=min(tc.batch_size, len(replay)), replace=False)
                    (_, ce, mse), grads = net.loss_and_grads(_batch([replay[i] for i in idx]), tc.lambda_v)
                    opt.step(net, grads)
                    lp.append(ce)
                    lv.append(mse)
            sr = evaluate(net, env, cfg, D, rng)
            rec = {"epoch": epoch, "D": D, "success_rate": sr,
                   "loss_policy": float(np.mean(lp)) if lp else None,
                   "loss_value": float(np.mean(lv)) if lv else None}
            cur.update(sr)
            log.append(rec)
            if fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                fh.flush()
            if progress:
                progress(rec)
        else:
            reason = "D_cap" if cur.D > tc.D_cap else "max_epochs"
    finally:
        if fh:
            fh.close()
    return TrainResult(net, log, cur, time.perf_counter() - t0, reason)
