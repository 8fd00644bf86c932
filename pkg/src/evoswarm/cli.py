"""Command-line entry points.

    evoswarm evolve --config PATH [--set section.key=value ...]
    evoswarm sweep-lambda --config PATH --lambdas 5,10,15
    evoswarm eval --genome PATH --task ID [--task ID2] --n-envs N --seed S
    evoswarm replay --genome PATH --task ID --seed S --out DIR
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError
from .experiment import (ExperimentConfig, evaluate_genome_file, load_config,
                         replay_genome_file, resolve_output_dir, run_experiment,
                         run_lambda_sweep)


def _load(args) -> ExperimentConfig:
    overrides = list(args.set or [])
    if args.config:
        return load_config(args.config, overrides)
    cfg = ExperimentConfig()
    if overrides:
        from .experiment import parse_config_text
        cfg = parse_config_text(cfg.canonical_text(), overrides)
    return cfg


def cmd_evolve(args) -> int:
    cfg = load_config(args.config, list(args.set or []))
    manifest = run_experiment(cfg, make_plots=not args.no_plots)
    out = resolve_output_dir(cfg.output_dir)
    print(f"wrote {len(manifest['run_ids'])} runs and aggregate to {out}")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config, list(args.set or []))
    try:
        lambdas = [float(x) for x in args.lambdas.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"invalid --lambdas list {args.lambdas!r}") from None
    table = run_lambda_sweep(cfg, lambdas, make_plots=False)
    print(f"{'lambda':>8}  {'current':>10}  {'ret_top':>10}  {'fgt_top':>10}")
    for row in table:
        print(f"{row['lambda']:>8g}  {row['current_best']:>10.3f}  "
              f"{row['retention_top']:>10.3f}  {row['forgetting_top']:>10.3f}")
    return 0


def cmd_eval(args) -> int:
    cfg = _load(args)
    rows = evaluate_genome_file(args.genome, cfg, args.task, args.n_envs, args.seed)
    for row in rows:
        episodes = " ".join(f"{v:g}" for v in row["episodes"])
        print(f"task {row['task_id']}: mean fitness {row['mean_fitness']:.4f} "
              f"over {len(row['episodes'])} episodes [{episodes}]")
    return 0


def cmd_replay(args) -> int:
    cfg = _load(args)
    report = replay_genome_file(args.genome, cfg, args.task, args.seed,
                                Path(args.out), steps=args.steps,
                                render=not args.no_frames)
    print(f"episode reward {report['reward']:g} over {report['steps']} steps")
    print(f"trajectory: {report['trajectory']}")
    if report["frames_dir"]:
        print(f"frames: {report['frames_dir']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evoswarm",
                                     description="Lifelong neuroevolution of swarm foraging controllers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run the configured experiment for every seed")
    p.add_argument("--config", required=True)
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep-lambda", help="compare regularization coefficients")
    p.add_argument("--config", required=True)
    p.add_argument("--lambdas", required=True, help="comma-separated coefficients")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eval", help="score a serialized genome on one or more tasks")
    p.add_argument("--genome", required=True)
    p.add_argument("--task", action="append", required=True)
    p.add_argument("--n-envs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("replay", help="record one episode as a trajectory log and frames")
    p.add_argument("--genome", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int, default=None, help="override episode length")
    p.add_argument("--no-frames", action="store_true")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
