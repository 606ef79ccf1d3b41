"""Benchmark orchestration with reproducible, byte-stable reports.

Reports never contain wall-clock numbers; those go to a ``.timing.json``
sidecar next to the report so that two runs with one seed give identical
report files.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..genset import FLAVORS
from ..search import exhaustive, greedy_sde, random_instance, verify
from . import metrics

REPORT_SCHEMA = "chansynth.bench/1"
TIMING_SCHEMA = "chansynth.bench-timing/1"
SEARCHERS = ("greedy", "exhaustive", "rl-greedy", "rl-sample-k")


@dataclass(frozen=True)
class RunConfig:
    flavor: str = "clifford_t"
    n: int = 1
    D: tuple[int, ...] = tuple(range(1, 21))
    trials: int = 25
    seed: int = 0
    searcher: str = "greedy"
    time_budget_s: float = 10.0
    max_steps: int = 200
    depth_budget: int = 8
    samples: int = 10
    checkpoint: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.searcher not in SEARCHERS:
            raise ValueError(f"unknown searcher {self.searcher!r}; choose from {SEARCHERS}")
        if self.searcher.startswith("rl") and not self.checkpoint:
            raise ValueError("rl searchers need a checkpoint")
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["D"] = list(self.D)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        d = dict(d)
        if "D" in d:
            d["D"] = tuple(d["D"])
        return cls(**d)


@dataclass
class TrialResult:
    trial: int
    seed: list[int]
    input_count: int
    success: bool
    output_count: int | None
    verified: bool
    ms: float = field(default=0.0, compare=False)


@dataclass
class BenchPoint:
    flavor: str
    n: int
    D: int
    trials: int
    results: list[TrialResult]

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.results)

    @property
    def success_rate(self) -> Fraction:
        return metrics.success_rate(self.successes, self.trials)

    def improvements(self) -> list[Fraction]:
        # only successful runs count, and D = 0 has no defined improvement
        return [metrics.improvement(r.input_count, r.output_count) for r in self.results
                if r.success and r.input_count > 0]

    def to_json(self) -> dict:
        imp = self.improvements()
        return {
            "flavor": self.flavor, "n": self.n, "D": self.D, "trials": self.trials,
            "successes": self.successes,
            "success_rate": metrics.render(self.success_rate),
            "success_rate_exact": str(self.success_rate),
            "improvement_mean": metrics.render(metrics.mean(imp)),
            "improvement_mean_exact": None if not imp else str(metrics.mean(imp)),
            "improvement_var": metrics.render(metrics.variance(imp)),
            "results": [{"trial": r.trial, "seed": r.seed, "input_count": r.input_count,
                         "success": r.success, "output_count": r.output_count, "verified": r.verified}
                        for r in self.results],
        }

    def timing_json(self) -> dict:
        ms = [r.ms for r in self.results]
        return {"flavor": self.flavor, "n": self.n, "D": self.D,
                "time_mean_ms": statistics.fmean(ms) if ms else None,
                "time_var_ms": statistics.pvariance(ms) if len(ms) > 1 else 0.0,
                "per_trial_ms": ms}


def _instance_seed(cfg: RunConfig, D: int, trial: int) -> list[int]:
    return [cfg.seed, FLAVORS.index(cfg.flavor), cfg.n, D, trial]


_RL_CACHE: dict = {}


def _rl_parts(path: str, n: int, flavor: str):
    if path not in _RL_CACHE:
        from ..policy import SynthesisEnv, load_checkpoint
        net, rcfg = load_checkpoint(path)
        _RL_CACHE[path] = (net, SynthesisEnv(n, flavor, rcfg.encoder))
    return _RL_CACHE[path]


def run_trial(cfg: RunConfig, D: int, trial: int) -> TrialResult:
    seed = _instance_seed(cfg, D, trial)
    inst = random_instance(cfg.n, cfg.flavor, D, rng=np.random.default_rng(seed))
    if cfg.searcher == "greedy":
        res = greedy_sde(inst.state, max_steps=cfg.max_steps, time_budget_s=cfg.time_budget_s)
    elif cfg.searcher == "exhaustive":
        res = exhaustive(inst.state, cfg.depth_budget, time_budget_s=cfg.time_budget_s)
    else:
        from ..policy import infer
        net, env = _rl_parts(cfg.checkpoint, cfg.n, cfg.flavor)
        mode = "greedy" if cfg.searcher == "rl-greedy" else "sample"
        res = infer(inst.state, net, env, mode, k=cfg.samples, seed=trial, max_steps=cfg.max_steps)
    ver = verify(inst.state, res) if res.success else False
    ok = res.success and ver
    return TrialResult(trial, seed, D, ok, res.output_count if ok else None, ver, res.elapsed_ms)


def _run_point(args):
    cfg, D = args
    return BenchPoint(cfg.flavor, cfg.n, D, cfg.trials, [run_trial(cfg, D, t) for t in range(cfg.trials)])


def bench(cfg: RunConfig, out: str | Path | None = None) -> list[BenchPoint]:
    """Run every ``(flavor, n, D)`` point; write report files if ``out`` is given.

    ``out`` names the JSON report; the CSV and timing sidecar share its stem.
    """
    jobs = [(cfg, D) for D in cfg.D]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            points = list(pool.map(_run_point, jobs))
    else:
        points = [_run_point(j) for j in jobs]
    if out is not None:
        write_reports(cfg, points, out)
    return points


def report_json(cfg: RunConfig, points: list[BenchPoint]) -> str:
    body = {"schema": REPORT_SCHEMA, "config": cfg.to_dict(), "points": [p.to_json() for p in points]}
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def report_csv(points: list[BenchPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema", "flavor", "n", "D", "trials", "successes", "success_rate",
                "improvement_mean", "improvement_var"])
    for p in points:
        j = p.to_json()
        w.writerow([REPORT_SCHEMA, p.flavor, p.n, p.D, p.trials, p.successes, j["success_rate"],
                    j["improvement_mean"], j["improvement_var"]])
    return buf.getvalue()


def write_reports(cfg: RunConfig, points: list[BenchPoint], out: str | Path) -> dict[str, Path]:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    stem = out.with_suffix("")
    paths = {"json": out, "csv": stem.with_suffix(".csv"), "timing": Path(f"{stem}.timing.json")}
    paths["json"].write_text(report_json(cfg, points))
    paths["csv"].write_text(report_csv(points))
    timing = {"schema": TIMING_SCHEMA, "points": [p.timing_json() for p in points]}
    paths["timing"].write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")
    return paths


def load_report(path: str | Path) -> dict:
    obj = json.loads(Path(path).read_text())
    if obj.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unexpected report schema {obj.get('schema')!r}")
    return obj
