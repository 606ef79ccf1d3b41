"""Two-qubit Clifford+CS: how close does greedy get to the input count?

Runs the benchmark harness over a few difficulties and prints the success
rate and the mean improvement ``1 - output/input`` per difficulty.  The
report is byte-stable, so rerunning with the same seed reproduces it.

    python3 demos/cs_bench.py
"""
import tempfile
from pathlib import Path

from chansynth.harness.bench import RunConfig, bench, load_report

cfg = RunConfig(flavor="clifford_cs", n=2, D=(2, 5, 10, 15, 20), trials=20, seed=3)
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "cs.json"
    bench(cfg, out)
    report = load_report(out)
    print(out.with_suffix(".csv").read_text())

print("  D   success  mean improvement")
for p in report["points"]:
    print(f"{p['D']:3d}   {p['success_rate']}  {p['improvement_mean']}")
# a positive improvement means greedy found words shorter than the random
# word used to build the instance
