import json
from fractions import Fraction

import pytest

from chansynth.channel import SQRT2, is_clifford
from chansynth.genset import CLIFFORD_CS
from chansynth.harness import metrics
from chansynth.harness.bench import (REPORT_SCHEMA, RunConfig, bench, load_report, report_csv,
                                     report_json, run_trial)
from chansynth.harness.fixtures import T_COUNTS, fixture, fixtures, names
from chansynth.ring import SqrtExt
from chansynth.search import greedy_sde


@pytest.mark.parametrize("inp, out, want", [(10, 7, Fraction(3, 10)), (5, 5, 0), (7, 7, 0), (4, 1, Fraction(3, 4))])
def test_improvement(inp, out, want):
    assert metrics.improvement(inp, out) == want


def test_metric_guards_and_stats():
    with pytest.raises(ValueError):
        metrics.improvement(0, 0)
    with pytest.raises(ValueError):
        metrics.success_rate(3, 2)
    assert metrics.success_rate(3, 4) == Fraction(3, 4)
    xs = [Fraction(1, 2), Fraction(1, 4), Fraction(0)]
    assert metrics.mean(xs) == Fraction(1, 4)
    assert metrics.variance(xs) == Fraction(1, 24)
    assert metrics.mean([]) is None and metrics.render(None) is None
    assert metrics.render(Fraction(1, 3)) == "0.333333"


def test_fixture_properties():
    assert set(names()) >= {"toffoli", "fredkin", "peres", "cs", "cz", "u"}
    allowed = {SqrtExt(0, 0, 0), SqrtExt(1, 0, 0), SqrtExt(-1, 0, 0), SqrtExt(1, 0, 2), SqrtExt(-1, 0, 2)}
    tof = fixture("toffoli")
    assert {e for row in tof.entries() for e in row} <= allowed
    assert is_clifford(fixture("cz"))
    cs = fixture("cs", "dyadic")
    res = greedy_sde(cs)
    assert res.success and res.output_count == 1
    assert fixture("u").n == 4 and T_COUNTS["u"] == 7
    assert set(fixtures(SQRT2)) == set(names())
    with pytest.raises(KeyError):
        fixture("adder")


def test_bench_one_qubit_points():
    cfg = RunConfig(n=1, D=(1, 5, 12), trials=6, seed=3)
    points = bench(cfg)
    for p in points:
        assert p.success_rate == 1
        for r in p.results:
            assert r.verified and r.output_count <= r.input_count


def test_bench_reports_are_byte_stable(tmp_path):
    cfg = RunConfig(flavor=CLIFFORD_CS, n=2, D=(2, 4), trials=3, seed=11)
    bench(cfg, tmp_path / "a" / "r.json")
    bench(cfg, tmp_path / "b" / "r.json")
    for name in ("r.json", "r.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    rep = load_report(tmp_path / "a" / "r.json")
    assert rep["schema"] == REPORT_SCHEMA
    assert RunConfig.from_dict(rep["config"]) == cfg
    timing = json.loads((tmp_path / "a" / "r.timing.json").read_text())
    assert len(timing["points"]) == 2 and len(timing["points"][0]["per_trial_ms"]) == 3


def test_report_roundtrip_and_csv():
    cfg = RunConfig(n=1, D=(3,), trials=2, seed=0)
    points = bench(cfg)
    rep = json.loads(report_json(cfg, points))
    assert rep["points"][0]["successes"] == 2
    csv_lines = report_csv(points).splitlines()
    assert csv_lines[0].startswith("schema,") and len(csv_lines) == 2


def test_bench_worker_count_does_not_change_results():
    cfg = RunConfig(n=1, D=(2, 3), trials=3, seed=5)
    par = RunConfig(n=1, D=(2, 3), trials=3, seed=5, workers=2)
    a = report_json(cfg, bench(cfg))
    b = report_json(cfg, bench(par))
    assert a == b


def test_trial_seeds_differ():
    cfg = RunConfig(n=1, D=(4,), trials=2, seed=0)
    a, b = run_trial(cfg, 4, 0), run_trial(cfg, 4, 1)
    assert a.seed != b.seed


def test_bad_run_configs():
    with pytest.raises(ValueError):
        RunConfig(flavor="clifford_v")
    with pytest.raises(ValueError):
        RunConfig(searcher="magic")
    with pytest.raises(ValueError):
        RunConfig(searcher="rl-greedy")
