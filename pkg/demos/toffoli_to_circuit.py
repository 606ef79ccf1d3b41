"""From the Toffoli channel to a Clifford+T gate list.

Iterative deepening over generator words finds a 7-generator factorization
of the Toffoli channel.  Each generator is then compiled to one T gate
sandwiched between Clifford conjugators, and the leftover Clifford factor
is reported as a signed permutation.  Takes around half a minute.

    python3 demos/toffoli_to_circuit.py
"""
import time

from chansynth import dense, exhaustive, verify
from chansynth.channel import naive_mul
from chansynth.extract import expand_result
from chansynth.genset import action_space
from chansynth.harness.fixtures import fixture

state = fixture("toffoli")
print(f"Toffoli channel: {state.dim}x{state.dim}, sde {state.sde()}")

t0 = time.perf_counter()
res = exhaustive(state, depth_budget=8)
print(f"exhaustive search: {res.output_count} generators in {time.perf_counter() - t0:.1f}s")
space = action_space(3, "clifford_t")
for a in res.actions:
    print(f"    {a.side:5s} R({space.gen_label(a.gen)})")
print("replays to a Clifford:", verify(state, res))

exp = expand_result(res)
print(f"\ngate circuit: {len(exp.pre)} gates before and {len(exp.post)} after the residue, "
      f"{exp.non_clifford_count()} T gates")
print("\n".join(exp.post.to_qasm().splitlines()[:12]) + "\n...")

# independent check through dense 8x8 matrices
post = dense.to_channel(dense.circuit_unitary(exp.post.as_pairs(), 3))
pre = dense.to_channel(dense.circuit_unitary(exp.pre.as_pairs(), 3))
rebuilt = naive_mul(post, naive_mul(exp.residue.to_channel(3, "sqrt2"), pre))
print("dense rebuild equals the Toffoli channel:", rebuilt == state)
