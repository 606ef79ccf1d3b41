"""Command-line front end: ``gen``, ``synth``, ``train``, ``bench``, ``verify``, ``extract``.

Exit codes: 0 success, 1 failed verification or synthesis, 2 usage error.
The default config file path comes from ``$CHANSYNTH_CONFIG``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .channel import ChannelMatrix
from .genset import CLIFFORD_CS, CLIFFORD_T, FLAVORS
from .policy.config import CONFIG_ENV

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _write(obj, out: str | None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config_file(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    return _read_json(path) if path else {}


def _flavor_for(state: ChannelMatrix, flavor: str | None) -> str:
    guess = CLIFFORD_T if state.ring == "sqrt2" else CLIFFORD_CS
    if flavor and flavor != guess:
        raise UsageError(f"flavor {flavor} does not match a {state.ring} channel")
    return flavor or guess


def load_state(args) -> ChannelMatrix:
    """A channel from ``--fixture``, a dense unitary file (``--dense``) or a channel JSON file."""
    from .harness.fixtures import fixture

    ring = "dyadic" if args.flavor == CLIFFORD_CS else "sqrt2"
    if getattr(args, "fixture", None):
        try:
            return fixture(args.fixture, ring)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "dense", None):
        from . import dense
        obj = _read_json(args.dense)
        return dense.to_channel(dense.from_json(obj["unitary"]), obj.get("ring", ring))
    if not getattr(args, "state", None):
        raise UsageError("give a state file, --fixture or --dense")
    obj = _read_json(args.state)
    try:
        return ChannelMatrix.from_json(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad channel file {args.state}: {exc}") from None


# --- subcommands -------------------------------------------------------------------------

def cmd_gen(args) -> int:
    from .search import random_instance

    inst = random_instance(args.n, args.flavor, args.d, seed=args.seed)
    obj = inst.state.to_json()
    obj["meta"] = {"flavor": args.flavor, "input_count": args.d, "seed": args.seed}
    _write(obj, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    from .search import exhaustive, greedy_sde

    state = load_state(args)
    flavor = _flavor_for(state, args.flavor)
    budget = None if args.budget_ms is None else args.budget_ms / 1e3
    if args.searcher == "greedy":
        res = greedy_sde(state, max_steps=args.max_steps, time_budget_s=budget)
    elif args.searcher == "exhaustive":
        res = exhaustive(state, args.depth, time_budget_s=budget)
    else:
        from .policy import SynthesisEnv, infer, load_checkpoint
        if not args.checkpoint:
            raise UsageError(f"--searcher {args.searcher} needs --checkpoint")
        net, cfg = load_checkpoint(args.checkpoint)
        env = SynthesisEnv(state.n, flavor, cfg.encoder)
        mode = "greedy" if args.searcher == "rl-greedy" else "sample"
        res = infer(state, net, env, mode, k=args.samples, seed=args.seed, max_steps=args.max_steps)
    _write(res.to_json(), args.out)
    return EXIT_OK if res.success else EXIT_FAIL


def cmd_train(args) -> int:
    from .policy import RLConfig, save_checkpoint, train

    data = _config_file(args.config)
    cfg = RLConfig.from_dict(data.get("rl", {})) if data else RLConfig()
    over = {k: v for k, v in (("seed", args.seed), ("D_cap", args.d_cap), ("n", args.n),
                              ("flavor", args.flavor)) if v is not None}
    if over:
        cfg = cfg.replace_training(**over)
    res = train(cfg, log_path=args.log)
    save_checkpoint(res.net, cfg, args.out)
    print(json.dumps({"D": res.curriculum.D, "epochs": len(res.log), "stop": res.stop_reason}))
    return EXIT_OK


def cmd_bench(args) -> int:
    from .harness.bench import RunConfig, bench, report_json

    data = _config_file(args.config)
    section = dict(data.get("bench", {}))
    for key in ("seed", "trials", "searcher", "flavor", "n"):
        v = getattr(args, key, None)
        if v is not None:
            section[key] = v
    if args.d:
        section["D"] = args.d
    try:
        cfg = RunConfig.from_dict(section)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    points = bench(cfg, args.out)
    if not args.out:
        sys.stdout.write(report_json(cfg, points))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .search import SynthesisResult, verify

    state = load_state(args)
    try:
        res = SynthesisResult.from_json(_read_json(args.result))
    except (KeyError, ValueError) as exc:
        print(f"malformed result: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = verify(state, res)
    print("verified" if ok else "verification failed")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_extract(args) -> int:
    from .extract import expand_result
    from .search import SynthesisResult

    res = SynthesisResult.from_json(_read_json(args.result))
    if not res.success:
        print("cannot expand an unsuccessful result", file=sys.stderr)
        return EXIT_FAIL
    exp = expand_result(res)
    if args.qasm:
        text = ("// pre-residue\n" + exp.pre.to_qasm() + "// residue: signed permutation "
                + json.dumps(exp.residue.to_json()) + "\n// post-residue\n" + exp.post.to_qasm())
        _write(text, args.out)
    else:
        _write(exp.to_json(), args.out)
    return EXIT_OK


# --- parser -----------------------------------------------------------------------------

def _state_args(p: argparse.ArgumentParser, positional: bool = True) -> None:
    if positional:
        p.add_argument("state", nargs="?", help="channel JSON file")
    p.add_argument("--fixture", help="named unitary (toffoli, fredkin, peres, cs, cz)")
    p.add_argument("--dense", help="dense unitary JSON file {n, unitary}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chansynth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--flavor", choices=FLAVORS, default=CLIFFORD_T)
    g.add_argument("--d", type=int, default=5, help="number of random generators")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("synth", help="synthesize a channel")
    _state_args(s)
    s.add_argument("--flavor", choices=FLAVORS)
    s.add_argument("--searcher", choices=("greedy", "exhaustive", "rl-greedy", "rl-sample-k"),
                   default="greedy")
    s.add_argument("--budget-ms", type=float)
    s.add_argument("--samples", type=int, default=10, help="K for rl-sample-k")
    s.add_argument("--depth", type=int, default=8, help="depth budget for exhaustive")
    s.add_argument("--max-steps", type=int, default=200)
    s.add_argument("--checkpoint")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    t = sub.add_parser("train", help="train a policy")
    t.add_argument("--config")
    t.add_argument("--out", required=True, help="checkpoint path")
    t.add_argument("--log", help="JSON-lines training log")
    t.add_argument("--seed", type=int)
    t.add_argument("--d-cap", type=int)
    t.add_argument("--n", type=int)
    t.add_argument("--flavor", choices=FLAVORS)
    t.set_defaults(func=cmd_train)

    b = sub.add_parser("bench", help="run a benchmark")
    b.add_argument("--config")
    b.add_argument("--out", help="report JSON path (CSV and timing files share its stem)")
    b.add_argument("--seed", type=int)
    b.add_argument("--trials", type=int)
    b.add_argument("--searcher")
    b.add_argument("--flavor", choices=FLAVORS)
    b.add_argument("--n", type=int)
    b.add_argument("--d", type=int, nargs="+")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="check a result against a channel")
    _state_args(v)
    v.add_argument("--result", required=True)
    v.add_argument("--flavor", choices=FLAVORS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extract", help="gate circuit of a result")
    e.add_argument("result")
    e.add_argument("--qasm", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_extract)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
