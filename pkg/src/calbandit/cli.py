"""Command-line entry points: run, sweep, report, presets."""
from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from .presets import DEFAULT_ENDPOINT, DEFAULT_MODEL, all_preset_configs
from .runner import (
    DEFAULT_CHECKPOINTS,
    RunConfig,
    format_report,
    report_runs,
    run_episode,
    run_sweep,
)


def _load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return RunConfig.from_dict(json.load(fh))


def _parse_checkpoints(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise SystemExit(f"bad checkpoint list {text!r}; expected e.g. 30,50,75,100")
    if not values:
        raise SystemExit("checkpoint list is empty")
    return values


def _cmd_run(args) -> int:
    config = _load_config(args.config)
    base_seed = args.seed if args.seed is not None else config.seed
    for i in range(config.n_sims):
        seed = base_seed + i
        result = run_episode(config, seed=seed, out_dir=args.out, replay_path=args.replay)
        s = result.summary
        pairs = ", ".join(f"t={c}: {v:.2f}" for c, v in zip(s.checkpoints, s.cum_regret))
        print(
            f"{s.name} seed={s.seed}: cum regret ({s.primary_metric}) {pairs}; "
            f"tokens in/out {s.total_tokens_in}/{s.total_tokens_out}; "
            f"mean weight {s.mean_weight:.4f}; final EMA {s.final_ema:.4f}"
        )
    print(f"wrote logs to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    paths = sorted(glob.glob(os.path.join(args.configs, "*.json")))
    if not paths:
        raise SystemExit(f"no *.json configs under {args.configs}")
    configs = [_load_config(p) for p in paths]
    seeds = [int(v) for v in args.seeds.split(",") if v.strip()]
    if not seeds:
        raise SystemExit("no seeds given")
    summaries, failures = run_sweep(configs, seeds, out_dir=args.out, parallelism=args.parallel)
    print(f"{len(summaries)} episodes finished, {len(failures)} failed")
    for name, seed, err in failures:
        print(f"  FAILED {name} seed={seed}: {err}", file=sys.stderr)
    print(f"wrote episodes.csv and aggregate.csv to {args.out}")
    return 1 if failures and not summaries else 0


def _cmd_report(args) -> int:
    checkpoints = _parse_checkpoints(args.checkpoints)
    rows = report_runs(args.runs, checkpoints)
    print(format_report(rows, checkpoints))
    return 0


def _cmd_presets(args) -> int:
    if args.env:
        with open(args.env, encoding="utf-8") as fh:
            environment = json.load(fh)
    else:
        environment = {"kind": "synthetic", "K": 5, "d": 10, "noise_sigma": 0.5}
    os.makedirs(args.out, exist_ok=True)
    for config in all_preset_configs(environment, endpoint=args.endpoint, model=args.model):
        path = os.path.join(args.out, f"{config.name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(config.to_dict(), fh, indent=2)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calbandit",
        description="Contextual bandit simulations with weighted scorer pseudo-observations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    p_run.add_argument("--config", required=True, help="run config JSON")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--replay", default=None, help="replay scorer log instead of the configured scorer")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a directory of configs over seeds")
    p_sweep.add_argument("--configs", required=True, help="directory of config JSONs")
    p_sweep.add_argument("--seeds", required=True, help="comma-separated seeds, e.g. 1,2,3")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--parallel", type=int, default=1, help="concurrent episodes (default 1)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_report = sub.add_parser("report", help="recompute checkpoint regrets from rounds CSVs")
    p_report.add_argument("--runs", required=True, help="directory tree containing rounds CSVs")
    p_report.add_argument(
        "--checkpoints",
        default=",".join(str(c) for c in DEFAULT_CHECKPOINTS),
        help="comma-separated round counts",
    )
    p_report.set_defaults(func=_cmd_report)

    p_presets = sub.add_parser("presets", help="write the named preset configs as JSON")
    p_presets.add_argument("--out", required=True, help="output directory")
    p_presets.add_argument("--env", default=None, help="environment JSON file (default: synthetic)")
    p_presets.add_argument("--endpoint", default=DEFAULT_ENDPOINT)
    p_presets.add_argument("--model", default=DEFAULT_MODEL)
    p_presets.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
