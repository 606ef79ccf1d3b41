"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run under pytest (the lines are repeated in the terminal summary) or
directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chansynth import dense
from chansynth.channel import (SQRT2, coset_label, is_clifford, left_mul_fast, naive_mul,
                               right_mul_fast)
from chansynth.extract import expand_result
from chansynth.genset import CLIFFORD_CS, CLIFFORD_T, action_space, cs_count_formula, enumerate_cs, enumerate_t
from chansynth.genset import canonical_cs_pair
from chansynth.harness.bench import RunConfig, bench
from chansynth.harness.fixtures import fixture
from chansynth.pauli import commutes
from chansynth.policy import (Batch, EncoderConfig, MCTSConfig, Network, NetworkConfig, RLConfig,
                              SGDMomentum, SynthesisEnv, infer, train)
from chansynth.policy.config import TrainingConfig
from chansynth.prune import INC, classify_oracle, classify_three_way, classify_two_way
from chansynth.search import exhaustive, greedy_sde, random_instance, verify

from conftest import SMALL_SPACES, oracle_channel, reachable_states, ring_of

LINES: dict[int, str] = {}


def record(num: int, ok: bool, detail: str) -> bool:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[num] = line
    print(line, flush=True)
    return ok


# --- 1 and 2: fast products and the sde step bound ---------------------------------------

def _product_corpus(pairs: int, seed: int):
    """(flavor, n, generator, state) tuples; the dyadic ring has no generators at n = 1."""
    rng = np.random.default_rng(seed)
    for flavor, n in SMALL_SPACES:
        space = action_space(n, flavor)
        for m in reachable_states(flavor, n, pairs, seed=seed + n, d_max=30):
            yield flavor, n, space.channel(int(rng.integers(len(space)))), m


def check_1_and_2(pairs: int = 1000, seed: int = 101) -> tuple[tuple[bool, str], tuple[bool, str]]:
    t0 = time.perf_counter()
    mismatches = violations = total = 0
    for _, _, g, m in _product_corpus(pairs, seed):
        full = g.to_channel()
        for fast, slow in ((left_mul_fast(g, m), naive_mul(full, m)),
                           (right_mul_fast(m, g), naive_mul(m, full))):
            total += 1
            mismatches += fast != slow
            violations += abs(fast.sde() - m.sde()) > 1
    dt = time.perf_counter() - t0
    one = (mismatches == 0 and dt < 60,
           f"{total} products over T n=1,2 and CS n=2, {mismatches} mismatches, {dt:.1f}s (limit 60s)")
    two = (violations == 0, f"{total} products, {violations} sde steps outside {{-1,0,+1}}")
    return one, two


# --- 3: coset labels ------------------------------------------------------------------------

def _clifford_pool(n: int, ring: str, size: int, rng: np.random.Generator):
    """Channels of random H/S/CNOT circuits."""
    pool = []
    for _ in range(size):
        gates = []
        for _ in range(4 * n + 4):
            kind = int(rng.integers(3 if n > 1 else 2))
            if kind == 2:
                a, b = rng.permutation(n)[:2]
                gates.append(("CNOT", (int(a), int(b))))
            else:
                gates.append(("HS"[kind], (int(rng.integers(n)),)))
        pool.append(oracle_channel(dense.circuit_unitary(gates, n), ring))
    return pool


def check_3(pairs: int = 500, distinct: int = 100, seed: int = 303) -> tuple[bool, str]:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    same_fail = done = 0
    for flavor, n in SMALL_SPACES:
        ring = ring_of(flavor)
        pool = _clifford_pool(n, ring, 40, rng)
        assert all(is_clifford(c) for c in pool)
        for m in reachable_states(flavor, n, pairs, seed=seed + n, d_max=20):
            c = pool[int(rng.integers(len(pool)))]
            same_fail += coset_label(naive_mul(m, c)) != coset_label(m)
            done += 1
    # distinct cosets, drawn with equal sde so the labels cannot differ for a trivial reason
    by_sde: dict[int, list] = {}
    for m in reachable_states(CLIFFORD_T, 1, 600, seed=seed + 7, d_max=10):
        by_sde.setdefault(m.sde(), []).append(m)
    groups = [v for k, v in by_sde.items() if k > 0 and len(v) > 1]
    tested = collide = 0
    while tested < distinct:
        grp = groups[int(rng.integers(len(groups)))]
        i, j = rng.choice(len(grp), 2, replace=False)
        a, b = grp[i], grp[j]
        if is_clifford(naive_mul(a.transpose(), b)):
            continue
        tested += 1
        collide += coset_label(a) == coset_label(b)
    dt = time.perf_counter() - t0
    ok = same_fail == 0 and collide == 0 and dt < 30
    return ok, (f"{done} (state, Clifford) pairs with {same_fail} label changes; {tested} distinct-coset "
                f"pairs at n=1 with {collide} collisions; {dt:.1f}s (limit 30s)")


# --- 4: classifiers -------------------------------------------------------------------------

def check_4(states: int = 200, seed: int = 404) -> tuple[bool, str]:
    t0 = time.perf_counter()
    bad = checked = 0
    for flavor, n in SMALL_SPACES:
        space = action_space(n, flavor)
        for m in reachable_states(flavor, n, states, seed=seed + n, d_max=20):
            for view, side in ((m, "left"), (m.transpose(), "right")):
                ref = classify_oracle(m, space, side)
                three = classify_three_way(view, None, space)
                two = classify_two_way(view, None, space)
                bad += int((three != ref).sum() + (two != (ref == INC)).sum())
                checked += 2 * len(space)
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 300, (f"{checked} labels (2-way and 3-way, both sides) on {states} states per "
                                   f"space, {bad} mismatches, {dt:.1f}s (limit 300s)")


# --- 5: generating sets ---------------------------------------------------------------------

def check_5() -> tuple[bool, str]:
    t_sizes = {n: len(enumerate_t(n)) for n in range(1, 5)}
    t_ok = all(t_sizes[n] == 4 ** n - 1 for n in t_sizes)
    classes = {canonical_cs_pair(p, q) for p, q in itertools.permutations(range(1, 16), 2) if commutes(p, q)}
    cs = len(enumerate_cs(2))
    ok = t_ok and cs == 15 == len(classes) == cs_count_formula(2)
    return ok, f"|G_T| for n=1..4 = {list(t_sizes.values())}; |G_CS(2)| = {cs}, classes {len(classes)}, formula {cs_count_formula(2):g}"


# --- 6: one-qubit optimality ---------------------------------------------------------------

def check_6(count: int = 100, seed: int = 606) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(count):
        inst = random_instance(1, CLIFFORD_T, int(rng.integers(1, 31)), rng=rng)
        res = greedy_sde(inst.state)
        bad += not (res.success and res.output_count == inst.state.sde() and verify(inst.state, res))
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 10, f"{count} instances with D<=30, {bad} not equal to sde, {dt:.2f}s (limit 10s)"


# --- 7: three-qubit benchmarks ---------------------------------------------------------------

def _expanded_channel(res, n: int):
    exp = expand_result(res)
    post = oracle_channel(dense.circuit_unitary(exp.post.as_pairs(), n))
    pre = oracle_channel(dense.circuit_unitary(exp.pre.as_pairs(), n))
    return naive_mul(post, naive_mul(exp.residue.to_channel(n, SQRT2), pre)), exp


def check_7(names=("toffoli", "fredkin", "peres"), limit_s: float = 600.0) -> tuple[bool, str]:
    parts, ok = [], True
    for name in names:
        state = fixture(name)
        t0 = time.perf_counter()
        res = exhaustive(state, 8, time_budget_s=limit_s)
        dt = time.perf_counter() - t0
        good = res.success and res.output_count == 7 and verify(state, res) and dt < limit_s
        if good:
            rebuilt, exp = _expanded_channel(res, state.n)
            good = rebuilt == state and exp.non_clifford_count() == 7
        ok &= good
        parts.append(f"{name}={res.output_count if res.success else 'fail'} ({dt:.0f}s)")
    return ok, "exhaustive depth 8: " + ", ".join(parts) + "; verified and dense channel rebuilt"


# --- 8: two-qubit CS -------------------------------------------------------------------------

def check_8(count: int = 50, seed: int = 808) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    wins = over = 0
    slowest = 0.0
    for _ in range(count):
        D = int(rng.integers(1, 21))
        inst = random_instance(2, CLIFFORD_CS, D, rng=rng)
        res = greedy_sde(inst.state, time_budget_s=10.0)
        slowest = max(slowest, res.elapsed_ms / 1e3)
        if res.success and verify(inst.state, res):
            wins += 1
            over += res.output_count > D
    ok = wins == count and over == 0
    return ok, f"success {wins}/{count}, {over} outputs above input count, slowest {slowest:.2f}s (budget 10s)"


# --- 9: gradients ----------------------------------------------------------------------------

def _observed_batch(seed: int, size: int = 12):
    env = SynthesisEnv(1, CLIFFORD_T, EncoderConfig(B=8))
    rng = np.random.default_rng(seed)
    R, _, C = env.obs_shape
    net = Network(R, C, env.num_slots, NetworkConfig(L1=4, H=24), seed=seed)
    for k, v in net.params.items():
        net.params[k] = v + rng.normal(0, 0.3, v.shape)
    obs, masks = [], []
    for m in reachable_states(CLIFFORD_T, 1, size, seed=seed, d_max=8):
        mask = env.legal(m)
        if not mask.any():
            mask = np.zeros(env.num_slots, dtype=bool)
            mask[1] = True
        obs.append(env.observe(m))
        masks.append(mask)
    mask = np.stack(masks)
    pi = np.where(mask, rng.random(mask.shape), 0.0)
    pi /= pi.sum(axis=1, keepdims=True)
    return net, Batch(np.stack(obs).astype(np.float64), mask, pi, rng.uniform(-1, 1, len(obs)))


def check_9(seed: int = 909) -> tuple[bool, str]:
    net, batch = _observed_batch(seed)
    _, grads = net.loss_and_grads(batch, lambda_v=1.0)
    # central differences: h near eps**(1/3) balances truncation against roundoff,
    # which otherwise dominates on gradients below ~1e-6
    worst, h = 0.0, 1e-5
    for name, p in net.params.items():
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = net.loss(batch, 1.0)[0]
            p[idx] = old - h
            down = net.loss(batch, 1.0)[0]
            p[idx] = old
            fd = (up - down) / (2 * h)
            scale = max(abs(fd), abs(grads[name][idx]), 1e-6)
            worst = max(worst, abs(fd - grads[name][idx]) / scale)
    opt = SGDMomentum(lr=0.01, momentum=0.0)
    losses = []
    for _ in range(50):
        (total, _, _), g = net.loss_and_grads(batch)
        losses.append(total)
        opt.step(net, g)
    strict = all(b < a for a, b in zip(losses, losses[1:]))
    return worst < 1e-4 and strict, (f"max relative gradient error {worst:.1e} (limit 1e-4) over "
                                     f"{len(net.params)} tensors; loss {losses[0]:.4f} -> {losses[-1]:.4f}, "
                                     f"strictly decreasing: {strict}")


# --- 10: training ----------------------------------------------------------------------------

def smoke_config(seed: int = 0) -> RLConfig:
    return RLConfig(encoder=EncoderConfig(B=16), network=NetworkConfig(L1=8, H=64),
                    mcts=MCTSConfig(simulations=16),
                    training=TrainingConfig(n=1, seed=seed, D_cap=10, lr=1e-2, episodes_per_epoch=8,
                                            updates_per_epoch=8, batch_size=32, eval_instances=32,
                                            max_epochs=150, time_budget_s=1800.0))


def check_10(seed: int = 0, fresh: int = 100) -> tuple[bool, str]:
    cfg = smoke_config(seed)
    res = train(cfg)
    passed = [r for r in res.log if r["D"] >= 10 and r["success_rate"] > 0.9]
    env = SynthesisEnv(1, CLIFFORD_T, cfg.encoder)
    rng = np.random.default_rng([seed, 10])
    wins = 0
    for _ in range(fresh):
        inst = random_instance(1, CLIFFORD_T, int(rng.integers(1, 11)), rng=rng)
        out = infer(inst.state, res.net, env, "greedy", max_steps=cfg.training.step_cap)
        wins += out.success and verify(inst.state, out)
    ok = bool(passed) and res.elapsed_s < 1800 and wins == fresh
    return ok, (f"curriculum passed D={res.curriculum.D - 1} after {len(res.log)} epochs, "
                f"{res.elapsed_s:.1f}s (limit 1800s); greedy on {fresh} fresh D<=10 instances: {wins}/{fresh}")


# --- 11: determinism -------------------------------------------------------------------------

def check_11(tmp: Path) -> tuple[bool, str]:
    cfg = RunConfig(flavor=CLIFFORD_T, n=2, D=(2, 5, 8), trials=6, seed=11)
    for tag in "ab":
        bench(cfg, tmp / f"bench_{tag}.json")
    same_bench = all((tmp / f"bench_a{s}").read_bytes() == (tmp / f"bench_b{s}").read_bytes()
                     for s in (".json", ".csv"))
    rl = smoke_config(3).replace_training(D_cap=4)
    r1 = train(rl, log_path=tmp / "log_a.jsonl")
    r2 = train(rl, log_path=tmp / "log_b.jsonl")
    same_log = (tmp / "log_a.jsonl").read_bytes() == (tmp / "log_b.jsonl").read_bytes()
    same_net = all(np.array_equal(r1.net.params[k], r2.net.params[k]) for k in r1.net.params)
    ok = same_bench and same_log and same_net
    return ok, (f"bench report and CSV identical: {same_bench}; training log identical: {same_log}; "
                f"network weights identical: {same_net}")


# --- pytest entry points -------------------------------------------------------------------

@pytest.fixture(scope="module")
def products():
    return check_1_and_2()


def test_criterion_01_fast_products(products):
    assert record(1, *products[0])


def test_criterion_02_sde_step(products):
    assert record(2, *products[1])


def test_criterion_03_coset_labels():
    assert record(3, *check_3())


def test_criterion_04_classifiers():
    assert record(4, *check_4())


def test_criterion_05_cardinalities():
    assert record(5, *check_5())


def test_criterion_06_one_qubit_optimal():
    assert record(6, *check_6())


@pytest.mark.slow
def test_criterion_07_three_qubit_benchmarks():
    assert record(7, *check_7())


def test_criterion_08_two_qubit_cs():
    assert record(8, *check_8())


def test_criterion_09_gradients():
    assert record(9, *check_9())


def test_criterion_10_training_smoke():
    assert record(10, *check_10())


def test_criterion_11_determinism(tmp_path):
    assert record(11, *check_11(tmp_path))


if __name__ == "__main__":
    import tempfile

    one, two = check_1_and_2()
    record(1, *one)
    record(2, *two)
    for num, fn in ((3, check_3), (4, check_4), (5, check_5), (6, check_6), (7, check_7),
                    (8, check_8), (9, check_9), (10, check_10)):
        record(num, *fn())
    with tempfile.TemporaryDirectory() as d:
        record(11, *check_11(Path(d)))
    sys.exit(0 if all("PASS" in line for line in LINES.values()) else 1)
