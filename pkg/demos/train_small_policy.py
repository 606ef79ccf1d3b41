"""Train a tiny policy/value network on one-qubit Clifford+T and use it.

Self-play with tree search produces visit-count targets, the network is
fitted to them, and the curriculum raises the instance difficulty D each
time greedy decoding clears more than 95% of evaluation instances.  Runs
in a few seconds on a laptop CPU.

At one qubit the pruning mask already leaves only sde-lowering moves, so
this run mostly shows the machinery working; two qubits is where the
network has real choices to learn.

    python3 demos/train_small_policy.py
"""
import numpy as np

from chansynth import random_instance
from chansynth.policy import (EncoderConfig, MCTSConfig, NetworkConfig, RLConfig, SynthesisEnv,
                              infer, train)
from chansynth.policy.config import TrainingConfig

cfg = RLConfig(encoder=EncoderConfig(B=16), network=NetworkConfig(L1=8, H=64),
               mcts=MCTSConfig(simulations=16),
               training=TrainingConfig(n=1, seed=0, D_cap=10, lr=1e-2, episodes_per_epoch=8,
                                       updates_per_epoch=8, batch_size=32, eval_instances=32))

result = train(cfg, progress=lambda r: print(
    f"epoch {r['epoch']:3d}  D={r['D']:2d}  success={r['success_rate']:.2f}  "
    f"policy loss={r['loss_policy']:.3f}  value loss={r['loss_value']:.3f}"))
print(f"stopped ({result.stop_reason}) after {result.elapsed_s:.1f}s")

env = SynthesisEnv(1, "clifford_t", cfg.encoder)
rng = np.random.default_rng(99)
for D in (4, 8, 12):
    inst = random_instance(1, "clifford_t", D, rng=rng)
    g = infer(inst.state, result.net, env, "greedy", max_steps=40)
    s = infer(inst.state, result.net, env, "sample", k=10, seed=1, max_steps=40)
    print(f"D={D:2d} sde={inst.state.sde():2d}  greedy={g.output_count if g.success else '-'}  "
          f"best of 10 samples={s.output_count if s.success else '-'}")
