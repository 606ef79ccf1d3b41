"""Peeling a one-qubit Clifford+T channel, one sde level at a time.

A random word of D generators is multiplied out into a channel matrix.
Greedy search then strips generators off while the smallest denominator
exponent (sde) falls by one per step, so the T-count it returns is the
sde of the starting channel.

    python3 demos/one_qubit_sde.py
"""
import numpy as np

from chansynth import greedy_sde, random_instance, verify
from chansynth.genset import action_space
from chansynth.search import apply

rng = np.random.default_rng(7)
inst = random_instance(1, "clifford_t", 12, rng=rng)
state = inst.state
print(f"input word length D = 12, channel sde = {state.sde()}")
print("entries of the channel (numerators over sqrt2^k):")
print(state.a, "\n+ sqrt2 *\n", state.b, f"\n/ sqrt2^{state.k}")

res = greedy_sde(state)
print(f"\ngreedy found {res.output_count} generators, verified: {verify(state, res)}")

# replay the peeling to show the potential function going down
x = state
space = action_space(1, "clifford_t")
trace = [x.sde()]
for a in res.actions:
    x = apply(x, a, space)
    trace.append(x.sde())
print("sde along the way:", " -> ".join(map(str, trace)))

# many instances at once: the output always matches the sde
counts = []
for D in range(1, 31):
    s = random_instance(1, "clifford_t", D, rng=rng).state
    counts.append((D, s.sde(), greedy_sde(s).output_count))
print("\n  D  sde  T-count")
for D, k, c in counts[::5]:
    print(f"{D:3d} {k:4d} {c:8d}")
