"""Small policy/value network in plain numpy with hand-written gradients.

Layers::

    obs [N, R, R, C]
      -> per-entry affine C -> L1, ReLU          (a 1x1 convolution)
      -> flatten, affine R*R*L1 -> H, ReLU
      -> policy head: affine H -> A logits, masked softmax
      -> value head:  affine H -> 1, tanh
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import NetworkConfig

PARAM_NAMES = ("W1", "b1", "W2", "b2", "Wp", "bp", "Wv", "bv")


def masked_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Softmax over ``mask``; masked entries get exactly zero probability."""
    if not mask.any(axis=-1).all():
        raise ValueError("every action is masked")
    z = np.where(mask, logits, -np.inf)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.where(mask, np.exp(z), 0.0)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class Batch:
    obs: np.ndarray      # [N, R, R, C]
    mask: np.ndarray     # [N, A] bool
    pi: np.ndarray       # [N, A], zero off-mask
    z: np.ndarray        # [N]


class Network:
    def __init__(self, R: int, C: int, A: int, cfg: NetworkConfig | None = None,
                 seed: int | np.random.Generator = 0) -> None:
        self.cfg = cfg or NetworkConfig()
        self.R, self.C, self.A = R, C, A
        rng = np.random.default_rng(seed)
        L1, H = self.cfg.L1, self.cfg.H
        s = self.cfg.init_scale
        self.params = {
            "W1": rng.normal(0.0, s * np.sqrt(2.0 / C), (C, L1)),
            "b1": np.zeros(L1),
            "W2": rng.normal(0.0, s * np.sqrt(2.0 / (R * R * L1)), (R * R * L1, H)),
            "b2": np.zeros(H),
            "Wp": rng.normal(0.0, s * 0.01, (H, A)),
            "bp": np.zeros(A),
            "Wv": rng.normal(0.0, s * 0.01, (H, 1)),
            "bv": np.zeros(1),
        }

    # --- shapes / copying ---------------------------------------------------------------

    def shapes(self) -> dict[str, tuple[int, ...]]:
        return {k: tuple(v.shape) for k, v in self.params.items()}

    def copy(self) -> Network:
        net = Network.__new__(Network)
        net.cfg, net.R, net.C, net.A = self.cfg, self.R, self.C, self.A
        net.params = {k: v.copy() for k, v in self.params.items()}
        return net

    # --- forward / backward -------------------------------------------------------------

    def _forward(self, obs: np.ndarray):
        p = self.params
        N = obs.shape[0]
        X = obs.reshape(N, self.R * self.R, self.C).astype(np.float64)
        E = X @ p["W1"] + p["b1"]
        A1 = np.maximum(E, 0.0)
        F = A1.reshape(N, -1)
        Z2 = F @ p["W2"] + p["b2"]
        A2 = np.maximum(Z2, 0.0)
        logits = A2 @ p["Wp"] + p["bp"]
        v = np.tanh((A2 @ p["Wv"] + p["bv"])[:, 0])
        return logits, v, (X, E, F, Z2, A2)

    def forward(self, obs: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Policy and value.  Accepts a single observation or a batch."""
        single = obs.ndim == 3
        if single:
            obs, mask = obs[None], mask[None]
        logits, v, _ = self._forward(obs)
        pol = masked_softmax(logits, mask.astype(bool))
        return (pol[0], v[0]) if single else (pol, v)

    def loss(self, batch: Batch, lambda_v: float = 1.0) -> tuple[float, float, float]:
        """``(total, policy CE, value MSE)`` averaged over the batch."""
        logits, v, _ = self._forward(batch.obs)
        return self._loss_terms(logits, v, batch, lambda_v)

    @staticmethod
    def _loss_terms(logits, v, batch, lambda_v):
        mask = batch.mask.astype(bool)
        if (batch.pi[~mask] != 0).any():
            raise ValueError("target policy puts mass on masked actions")
        p = masked_softmax(logits, mask)
        logp = np.log(np.where(mask & (batch.pi > 0), p, 1.0))
        ce = float(-(batch.pi * logp).sum(axis=1).mean())
        mse = float(((v - batch.z) ** 2).mean())
        return ce + lambda_v * mse, ce, mse

    def loss_and_grads(self, batch: Batch, lambda_v: float = 1.0):
        logits, v, (X, E, F, Z2, A2) = self._forward(batch.obs)
        total, ce, mse = self._loss_terms(logits, v, batch, lambda_v)
        p = self.params
        N = X.shape[0]
        mask = batch.mask.astype(bool)
        probs = masked_softmax(logits, mask)
        dlogits = np.where(mask, probs - batch.pi, 0.0) / N
        du = (2.0 * lambda_v * (v - batch.z) * (1.0 - v ** 2) / N)[:, None]
        g = {}
        g["Wp"] = A2.T @ dlogits
        g["bp"] = dlogits.sum(axis=0)
        g["Wv"] = A2.T @ du
        g["bv"] = du.sum(axis=0)
        dA2 = dlogits @ p["Wp"].T + du @ p["Wv"].T
        dZ2 = dA2 * (Z2 > 0)
        g["W2"] = F.T @ dZ2
        g["b2"] = dZ2.sum(axis=0)
        dE = (dZ2 @ p["W2"].T).reshape(E.shape) * (E > 0)
        g["W1"] = X.reshape(-1, self.C).T @ dE.reshape(-1, dE.shape[-1])
        g["b1"] = dE.sum(axis=(0, 1))
        return (total, ce, mse), g

    # --- serialization ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {"R": self.R, "C": self.C, "A": self.A,
                "network": {"L1": self.cfg.L1, "H": self.cfg.H, "init_scale": self.cfg.init_scale},
                "shapes": {k: list(v.shape) for k, v in self.params.items()},
                "params": {k: self.params[k].ravel().tolist() for k in PARAM_NAMES}}

    @classmethod
    def from_json(cls, obj: dict) -> Network:
        net = cls.__new__(cls)
        net.R, net.C, net.A = int(obj["R"]), int(obj["C"]), int(obj["A"])
        net.cfg = NetworkConfig(**obj["network"])
        net.params = {k: np.array(obj["params"][k], dtype=np.float64).reshape(obj["shapes"][k])
                      for k in PARAM_NAMES}
        return net


class SGDMomentum:
    def __init__(self, lr: float = 1e-3, momentum: float = 0.9) -> None:
        self.lr, self.momentum = lr, momentum
        self.velocity: dict[str, np.ndarray] = {}

    def step(self, net: Network, grads: dict[str, np.ndarray]) -> None:
        for k, gk in grads.items():
            v = self.velocity.get(k)
            v = gk.copy() if v is None else self.momentum * v + gk
            self.velocity[k] = v
            net.params[k] -= self.lr * v
