"""Command-line entry point: the pipeline as composable subcommands.

Each subcommand is a thin wrapper over the library operations, reading
and writing the fixed file formats (graph edge lists, JSON sequences,
JSON clocks, sweep CSV).  Exit codes: 0 success, 1 usage error, 2 data
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .cascade import CascadeParams, load_sequence, save_sequence, simulate_ic
from .clockwork import (
    load_clock,
    load_observed,
    save_clock,
    save_observed,
    distance,
    stretch_distort,
)
from .estimators import EstimationInput, _dp_mlp_full, fastclock
from .exceptions import ConfigError
from .experiments import (
    ERGraphSpec,
    SBMGraphSpec,
    TrialConfig,
    sweep,
    write_results,
)
from .graph import generate_er, generate_sbm, load_graph, save_graph

__all__ = ["main", "run"]


def _cmd_gen_graph(args) -> int:
    if args.model == "er":
        if args.n is None or args.p is None:
            raise ConfigError("er model requires --n and --p")
        g = generate_er(args.n, args.p, args.seed)
    else:
        if not args.block_sizes:
            raise ConfigError("sbm model requires --block-sizes")
        sizes = [int(s) for s in args.block_sizes.split(",") if s]
        g = generate_sbm(sizes, args.p_intra, args.p_inter, args.seed)
    save_graph(g, args.out)
    print(f"wrote {g!r} to {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    g = load_graph(args.graph)
    params = CascadeParams(args.pn, args.pe)
    rng = np.random.default_rng(args.seed)
    s0 = rng.choice(g.n, size=args.s0_size, replace=False)
    seq = simulate_ic(g, params, s0, args.max_steps, int(rng.integers(2**63)))
    save_sequence(seq, args.out)
    print(f"wrote {len(seq)}-step sequence ({seq.total} vertices) to {args.out}")
    return 0


def _cmd_distort(args) -> int:
    seq = load_sequence(args.seq)
    obs, clock = stretch_distort(seq, args.stretch, args.seed)
    save_observed(obs, args.out_obs)
    save_clock(clock, args.out_clock)
    print(f"wrote {len(obs)} observations to {args.out_obs}, clock to {args.out_clock}")
    return 0


def _cmd_estimate(args) -> int:
    g = load_graph(args.graph)
    obs = load_observed(args.obs)
    inp = EstimationInput(g, CascadeParams(args.pn, args.pe), obs, args.s0_size)
    start = time.perf_counter_ns()
    if args.estimator == "fastclock":
        clock, loglik = fastclock(inp), None
    else:
        result = _dp_mlp_full(inp)
        clock, loglik = result.clock, result.log_likelihood
    elapsed = max(1, time.perf_counter_ns() - start)
    save_clock(clock, args.out)
    meta = {"estimator": args.estimator, "wall_clock_ns": elapsed, "log_likelihood": loglik}
    meta_path = args.meta if args.meta else f"{args.out}.meta.json"
    with open(meta_path, "w", encoding="ascii") as fh:
        json.dump(meta, fh)
        fh.write("\n")
    print(f"wrote clock with {clock.num_intervals} intervals to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    obs = load_observed(args.obs)
    c0 = load_clock(args.clock_a)
    c1 = load_clock(args.clock_b)
    print(distance([len(s) for s in obs], c0, c1))
    return 0


def _graph_spec_from_config(data: dict):
    model = data.get("model", "er")
    if model == "er":
        return ERGraphSpec(
            n=int(data["n"]),
            p=data.get("p"),
            density_alpha=float(data.get("density_alpha", 3.0)),
        )
    if model == "sbm":
        if "block_sizes" in data:
            return SBMGraphSpec(
                block_sizes=tuple(int(s) for s in data["block_sizes"]),
                p_intra=float(data.get("p_intra", 0.2)),
                p_inter=float(data.get("p_inter", 0.01)),
            )
        return SBMGraphSpec.default_two_block(
            n=int(data.get("n", 5000)),
            p_intra=float(data.get("p_intra", 0.2)),
            p_inter=float(data.get("p_inter", 0.01)),
        )
    raise ConfigError(f"unknown graph model {model!r}")


def _cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    for key in ("graph", "axis", "values"):
        if key not in data:
            raise ConfigError(f"sweep config is missing {key!r}")
    base = TrialConfig(
        graph=_graph_spec_from_config(data["graph"]),
        params=CascadeParams(float(data.get("p_n", 0.1)), float(data.get("p_e", 1e-7))),
        seed=args.seed,
        s0_size=int(data.get("s0_size", 1)),
        stretch=int(data.get("stretch", 2)),
        estimators=tuple(data.get("estimators", ["fastclock", "dp"])),
        max_steps=int(data.get("max_steps", 30)),
        dp_cap=args.dp_cap if args.dp_cap is not None else int(data.get("dp_cap", 60)),
    )
    trials = args.trials if args.trials is not None else int(data.get("trials", 50))
    rows = sweep(base, data["axis"], data["values"], trials, workers=args.workers)
    write_results(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-clock",
        description="Simulate spreading cascades, distort their timelines, "
                    "and recover the sampling clock.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a random graph file")
    p.add_argument("--model", choices=("er", "sbm"), default="er")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--block-sizes", help="comma-separated block sizes (sbm)")
    p.add_argument("--p-intra", type=float, default=0.2)
    p.add_argument("--p-inter", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("simulate", help="run an independent cascade on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--pn", type=float, required=True)
    p.add_argument("--pe", type=float, default=0.0)
    p.add_argument("--s0-size", type=int, default=1)
    p.add_argument("--max-steps", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("distort", help="stretch a sequence into observations")
    p.add_argument("--seq", required=True)
    p.add_argument("--stretch", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-obs", required=True)
    p.add_argument("--out-clock", required=True)
    p.set_defaults(func=_cmd_distort)

    p = sub.add_parser("estimate", help="recover the clock of an observed sequence")
    p.add_argument("--graph", required=True)
    p.add_argument("--obs", required=True)
    p.add_argument("--pn", type=float, required=True)
    p.add_argument("--pe", type=float, default=0.0)
    p.add_argument("--s0-size", type=int, required=True)
    p.add_argument("--estimator", choices=("fastclock", "dp"), default="fastclock")
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="metadata path (default: <out>.meta.json)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("evaluate", help="distance between two clock files")
    p.add_argument("--obs", required=True, help="observed sequence (for sizes)")
    p.add_argument("--clock-a", required=True)
    p.add_argument("--clock-b", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--dp-cap", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:  # console-script entry point
    sys.exit(main())
