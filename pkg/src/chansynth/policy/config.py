"""Configuration for the learned search.  One JSON file holds every section."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

CONFIG_ENV = "CHANSYNTH_CONFIG"


@dataclass(frozen=True)
class EncoderConfig:
    B: int = 16

    def __post_init__(self) -> None:
        if self.B < 2:
            raise ValueError("B must be >= 2")


@dataclass(frozen=True)
class NetworkConfig:
    L1: int = 8
    H: int = 256
    init_scale: float = 1.0


@dataclass(frozen=True)
class MCTSConfig:
    c_puct: float = 1.5
    simulations: int = 64


@dataclass(frozen=True)
class TrainingConfig:
    n: int = 1
    flavor: str = "clifford_t"
    seed: int = 0
    tau: float = 0.95                 # success threshold for advancing D
    lambda_v: float = 1.0
    lr: float = 1e-3
    momentum: float = 0.9
    batch_size: int = 64
    replay_capacity: int = 50_000
    temperature: float = 1.0
    D_start: int = 1
    D_cap: int = 10                   # stop once D exceeds this
    max_steps: int | None = None      # reward scale and inference cap; None means 2 * D_cap
    episodes_per_epoch: int = 16
    updates_per_epoch: int = 16
    eval_instances: int = 64
    max_epochs: int = 200
    time_budget_s: float | None = None

    @property
    def step_cap(self) -> int:
        return self.max_steps if self.max_steps is not None else 2 * self.D_cap


@dataclass(frozen=True)
class RLConfig:
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    mcts: MCTSConfig = field(default_factory=MCTSConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> RLConfig:
        parts = {}
        for f in fields(cls):
            sub = d.get(f.name, {})
            typ = {"encoder": EncoderConfig, "network": NetworkConfig,
                   "mcts": MCTSConfig, "training": TrainingConfig}[f.name]
            known = {x.name for x in fields(typ)}
            extra = set(sub) - known
            if extra:
                raise ValueError(f"unknown {f.name} keys: {sorted(extra)}")
            parts[f.name] = typ(**sub)
        return cls(**parts)

    def replace_training(self, **kw) -> RLConfig:
        t = asdict(self.training)
        t.update(kw)
        return RLConfig(self.encoder, self.network, self.mcts, TrainingConfig(**t))


def load_config(path: str | os.PathLike | None = None) -> RLConfig:
    """Read a config file; falls back to ``$CHANSYNTH_CONFIG`` and then to defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RLConfig()
    with open(path) as fh:
        data = json.load(fh)
    return RLConfig.from_dict(data.get("rl", data))


def save_config(cfg: RLConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
