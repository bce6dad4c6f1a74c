"""Episode runner: the full per-round protocol, logging, sweeps, summaries.

Round order is load-bearing:

1. observe per-arm contexts
2. select an arm by UCB
3. probe the scorer for the chosen arm (outcome not yet drawn)
4. realize the reward, apply the weight-1 update
5. score the unplayed arms
6. fold the probe error into the calibration EMA
7. evaluate the weight schedule at (t, EMA)
8. inject pseudo-observations for the unplayed arms at that weight

A scorer failure anywhere in steps 3 or 5 makes the whole round scorer-less:
no EMA update, no injection, status "unavailable". Joint-pattern scorers
collapse steps 3 and 5 into a single call issued at step 3.
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .calibration import EmaTracker
from .environments import Environment, build_environment
from .policy import DisjointLinUCB, PolicyConfig
from .schedules import WeightSchedule, schedule_from_config
from .scorers import (
    MODE_COUNTERFACTUAL,
    MODE_JOINT,
    MODE_PROBE,
    ReplayLogWriter,
    Scorer,
    ScorerUnavailable,
    ScoreRequest,
    build_scorer,
)

ROUND_COLUMNS = (
    "t",
    "chosen_arm",
    "realized_reward",
    "expected_reward_chosen",
    "r_star",
    "regret_realized",
    "regret_expected",
    "cum_regret_realized",
    "cum_regret_expected",
    "weight",
    "ema_error",
    "probe_prediction",
    "pseudo_predictions",
    "tokens_in",
    "tokens_out",
    "scorer_status",
)

STATUS_OK = "ok"
STATUS_UNAVAILABLE = "unavailable"
STATUS_NONE = "none"

DEFAULT_CHECKPOINTS = (30, 50, 75, 100)


@dataclass
class RoundRecord:
    t: int
    chosen_arm: int
    realized_reward: float
    expected_reward_chosen: float
    r_star: float
    regret_realized: float
    regret_expected: float
    cum_regret_realized: float
    cum_regret_expected: float
    weight: float
    ema_error: float
    probe_prediction: float | None
    pseudo_predictions: dict[int, float]
    tokens_in: int
    tokens_out: int
    scorer_status: str

    def to_row(self) -> list[str]:
        return [
            str(self.t),
            str(self.chosen_arm),
            repr(self.realized_reward),
            repr(self.expected_reward_chosen),
            repr(self.r_star),
            repr(self.regret_realized),
            repr(self.regret_expected),
            repr(self.cum_regret_realized),
            repr(self.cum_regret_expected),
            repr(self.weight),
            repr(self.ema_error),
            "" if self.probe_prediction is None else repr(self.probe_prediction),
            ";".join(f"{a}:{self.pseudo_predictions[a]!r}" for a in sorted(self.pseudo_predictions)),
            str(self.tokens_in),
            str(self.tokens_out),
            self.scorer_status,
        ]


def write_rounds_csv(path, records) -> None:
    """Fixed column order, UTF-8, LF endings, full-precision floats."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ROUND_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_row())


def read_rounds_csv(path) -> list[dict]:
    """Parse a rounds CSV back into typed dicts (pseudo predictions kept raw)."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in ROUND_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        for row in reader:
            rec = dict(row)
            for col in ("t", "chosen_arm", "tokens_in", "tokens_out"):
                rec[col] = int(row[col])
            for col in (
                "realized_reward",
                "expected_reward_chosen",
                "r_star",
                "regret_realized",
                "regret_expected",
                "cum_regret_realized",
                "cum_regret_expected",
                "weight",
                "ema_error",
            ):
                rec[col] = float(row[col])
            rec["probe_prediction"] = float(row["probe_prediction"]) if row["probe_prediction"] else None
            out.append(rec)
    if not out:
        raise ValueError(f"{path}: no data rows")
    return out


@dataclass
class RunConfig:
    environment: dict
    schedule: dict
    scorer: dict | None = None
    name: str = "run"
    alpha: float = 1.0
    lambda_reg: float = 1.0
    inverse_mode: str = "factorize"
    ema_beta: float = 0.95
    horizon: int = 100
    seed: int = 42
    n_sims: int = 1
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
    scorer_history_len: int = 5

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.n_sims < 1:
            raise ValueError(f"n_sims must be >= 1, got {self.n_sims}")
        self.checkpoints = tuple(int(c) for c in self.checkpoints)
        if any(c < 1 for c in self.checkpoints):
            raise ValueError(f"checkpoints must be >= 1, got {self.checkpoints}")
        if any(c > self.horizon for c in self.checkpoints):
            raise ValueError(
                f"checkpoints {self.checkpoints} exceed the horizon {self.horizon}"
            )
        if self.scorer is None and self.schedule.get("name") != "zero":
            raise ValueError("a run without a scorer must use the zero schedule")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        policy = d.pop("policy", {})
        return cls(
            environment=d.pop("environment"),
            schedule=d.pop("schedule"),
            scorer=d.pop("scorer", None),
            alpha=policy.get("alpha", 1.0),
            lambda_reg=policy.get("lambda_reg", 1.0),
            inverse_mode=policy.get("inverse_mode", "factorize"),
            **d,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "environment": dict(self.environment),
            "policy": {
                "alpha": self.alpha,
                "lambda_reg": self.lambda_reg,
                "inverse_mode": self.inverse_mode,
            },
            "schedule": dict(self.schedule),
            "scorer": None if self.scorer is None else dict(self.scorer),
            "ema_beta": self.ema_beta,
            "horizon": self.horizon,
            "seed": self.seed,
            "n_sims": self.n_sims,
            "checkpoints": list(self.checkpoints),
            "scorer_history_len": self.scorer_history_len,
        }


@dataclass
class RunSummary:
    name: str
    seed: int
    horizon: int
    env_kind: str
    primary_metric: str
    checkpoints: tuple[int, ...]
    cum_regret: list[float]
    cum_regret_expected: list[float]
    cum_regret_realized: list[float]
    total_tokens_in: int
    total_tokens_out: int
    mean_weight: float
    final_ema: float
    scorer_failures: int
    wall_clock_s: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "horizon": self.horizon,
            "env_kind": self.env_kind,
            "primary_metric": self.primary_metric,
            "checkpoints": list(self.checkpoints),
            "cum_regret": self.cum_regret,
            "cum_regret_expected": self.cum_regret_expected,
            "cum_regret_realized": self.cum_regret_realized,
            "total_tokens_in": self.total_tokens_in,
            "total_tokens_out": self.total_tokens_out,
            "mean_weight": self.mean_weight,
            "final_ema": self.final_ema,
            "scorer_failures": self.scorer_failures,
            "wall_clock_s": self.wall_clock_s,
        }


@dataclass
class EpisodeResult:
    records: list[RoundRecord]
    summary: RunSummary
    policy: DisjointLinUCB = field(repr=False, default=None)
    environment: Environment = field(repr=False, default=None)


def checkpoint_values(records, checkpoints, column: str) -> list[float]:
    """Cumulative column values after each checkpoint count of rounds.

    Accepts RoundRecord objects or dicts from read_rounds_csv.
    """
    values = []
    for c in checkpoints:
        if c > len(records):
            raise ValueError(f"checkpoint {c} beyond the {len(records)} recorded rounds")
        rec = records[c - 1]
        if isinstance(rec, RoundRecord):
            t, value = rec.t, getattr(rec, column)
        else:
            t, value = rec["t"], rec[column]
        if t != c - 1:
            raise ValueError(f"records are not contiguous at checkpoint {c}")
        values.append(float(value))
    return values


def summarize(
    records: list[RoundRecord],
    checkpoints=DEFAULT_CHECKPOINTS,
    name: str = "run",
    seed: int = 0,
    env_kind: str = "synthetic",
    wall_clock_s: float = 0.0,
) -> RunSummary:
    expected = checkpoint_values(records, checkpoints, "cum_regret_expected")
    realized = checkpoint_values(records, checkpoints, "cum_regret_realized")
    # On the click environment the labels are deterministic, so realized
    # regret is the ground truth; elsewhere the known mean reward is.
    primary_metric = "realized" if env_kind == "mind" else "expected"
    return RunSummary(
        name=name,
        seed=seed,
        horizon=len(records),
        env_kind=env_kind,
        primary_metric=primary_metric,
        checkpoints=tuple(checkpoints),
        cum_regret=realized if primary_metric == "realized" else expected,
        cum_regret_expected=expected,
        cum_regret_realized=realized,
        total_tokens_in=sum(r.tokens_in for r in records),
        total_tokens_out=sum(r.tokens_out for r in records),
        mean_weight=float(np.mean([r.weight for r in records])),
        final_ema=records[-1].ema_error,
        scorer_failures=sum(1 for r in records if r.scorer_status == STATUS_UNAVAILABLE),
        wall_clock_s=wall_clock_s,
    )


def _episode_paths(out_dir, seed: int) -> dict:
    return {
        "rounds": os.path.join(out_dir, f"rounds_seed{seed}.csv"),
        "summary": os.path.join(out_dir, f"summary_seed{seed}.json"),
        "replay": os.path.join(out_dir, f"replay_seed{seed}.jsonl"),
    }


def _history_snapshot(history, limit: int):
    # stored oldest-first; requests carry most-recent-first
    return tuple(reversed(history[-limit:])) if limit > 0 else ()


def run_episode(
    config: RunConfig,
    seed: int | None = None,
    out_dir=None,
    replay_path=None,
    env: Environment | None = None,
    scorer: Scorer | None = None,
    schedule: WeightSchedule | None = None,
) -> EpisodeResult:
    """Execute one seeded episode; optionally persist rounds/summary/replay.

    Pre-built ``env``/``scorer``/``schedule`` objects override construction
    from the config (used by tests to instrument components).
    """
    if seed is None:
        seed = config.seed
    root = np.random.SeedSequence(seed)
    env_ss, scorer_ss = root.spawn(2)
    if env is None:
        env = build_environment(config.environment, np.random.default_rng(env_ss))
    if schedule is None:
        schedule = schedule_from_config(config.schedule)
    scorer_spec = {"kind": "replay", "path": replay_path} if replay_path else config.scorer
    if scorer is None and scorer_spec is not None:
        scorer = build_scorer(scorer_spec, np.random.default_rng(scorer_ss), env.reward_range)

    policy = DisjointLinUCB(
        PolicyConfig(
            num_arms=env.num_arms,
            dim=env.dim,
            alpha=config.alpha,
            lambda_reg=config.lambda_reg,
            inverse_mode=config.inverse_mode,
        )
    )
    tracker = EmaTracker(config.ema_beta)
    feature_notes = env.feature_notes()

    replay_writer = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        if scorer is not None:
            replay_writer = ReplayLogWriter(_episode_paths(out_dir, seed)["replay"])

    records: list[RoundRecord] = []
    history: list[tuple[int, int, float]] = []
    cum_realized = 0.0
    cum_expected = 0.0
    n_arms = env.num_arms
    started = time.perf_counter()

    for t in range(config.horizon):
        step = env.observe(t)
        chosen = policy.select_arm(step.contexts)
        unplayed = [a for a in range(n_arms) if a != chosen]
        snapshot = _history_snapshot(history, config.scorer_history_len)
        truth = step.expected_rewards if scorer is not None and scorer.needs_truth else None

        status = STATUS_NONE if scorer is None else STATUS_OK
        probe_prediction = None
        pseudo: dict[int, float] = {}
        tokens_in = 0
        tokens_out = 0
        joint = None

        if scorer is not None:
            try:
                if scorer.call_pattern == "joint":
                    request = ScoreRequest(
                        t=t,
                        context_text=step.context_text,
                        arm_descriptions=step.arm_texts,
                        target_arms=tuple(range(n_arms)),
                        mode=MODE_JOINT,
                        history=snapshot,
                        feature_notes=feature_notes,
                    )
                    joint = scorer.score(request, truth)
                    probe_prediction = joint.predicted[chosen]
                    tokens_in += joint.tokens_in
                    tokens_out += joint.tokens_out
                    if replay_writer is not None:
                        replay_writer.record_call(t, MODE_JOINT, joint, range(n_arms))
                else:
                    request = ScoreRequest(
                        t=t,
                        context_text=step.context_text,
                        arm_descriptions=step.arm_texts,
                        target_arms=(chosen,),
                        mode=MODE_PROBE,
                        history=snapshot,
                        feature_notes=feature_notes,
                    )
                    probe = scorer.score(request, truth)
                    probe_prediction = probe.predicted[chosen]
                    tokens_in += probe.tokens_in
                    tokens_out += probe.tokens_out
                    if replay_writer is not None:
                        replay_writer.record_call(t, MODE_PROBE, probe, [chosen])
            except ScorerUnavailable:
                status = STATUS_UNAVAILABLE
                probe_prediction = None

        reward = env.realize(t, chosen)
        policy.update(chosen, step.contexts[chosen], reward, 1.0)

        if scorer is not None and status == STATUS_OK:
            try:
                if joint is not None:
                    pseudo = {a: joint.predicted[a] for a in unplayed}
                else:
                    request = ScoreRequest(
                        t=t,
                        context_text=step.context_text,
                        arm_descriptions=step.arm_texts,
                        target_arms=tuple(unplayed),
                        mode=MODE_COUNTERFACTUAL,
                        history=snapshot,
                        feature_notes=feature_notes,
                    )
                    counter = scorer.score(request, truth)
                    pseudo = {a: counter.predicted[a] for a in unplayed}
                    tokens_in += counter.tokens_in
                    tokens_out += counter.tokens_out
                    if replay_writer is not None:
                        replay_writer.record_call(t, MODE_COUNTERFACTUAL, counter, unplayed)
            except ScorerUnavailable:
                # the whole round degrades: discard the probe as well
                status = STATUS_UNAVAILABLE
                probe_prediction = None
                pseudo = {}

        weight = 0.0
        if scorer is not None and status == STATUS_OK:
            tracker.record(probe_prediction, reward)
            weight = schedule.weight(t, tracker.value)
            if weight > 0.0:
                for a in unplayed:
                    policy.update(a, step.contexts[a], pseudo[a], weight)
            else:
                pseudo = {}

        regret_realized = step.r_star - reward
        regret_expected = step.r_star - float(step.expected_rewards[chosen])
        cum_realized += regret_realized
        cum_expected += regret_expected
        history.append((t, chosen, reward))
        records.append(
            RoundRecord(
                t=t,
                chosen_arm=chosen,
                realized_reward=reward,
                expected_reward_chosen=float(step.expected_rewards[chosen]),
                r_star=step.r_star,
                regret_realized=regret_realized,
                regret_expected=regret_expected,
                cum_regret_realized=cum_realized,
                cum_regret_expected=cum_expected,
                weight=weight,
                ema_error=tracker.value,
                probe_prediction=probe_prediction,
                pseudo_predictions=pseudo,
                tokens_in=tokens_in,
                tokens_out=tokens_out,
                scorer_status=status,
            )
        )

    wall = time.perf_counter() - started
    if replay_writer is not None:
        replay_writer.close()
    summary = summarize(
        records,
        checkpoints=config.checkpoints,
        name=config.name,
        seed=seed,
        env_kind=config.environment.get("kind", env.name),
        wall_clock_s=wall,
    )
    if out_dir is not None:
        paths = _episode_paths(out_dir, seed)
        write_rounds_csv(paths["rounds"], records)
        with open(paths["summary"], "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, indent=2)
            fh.write("\n")
    return EpisodeResult(records=records, summary=summary, policy=policy, environment=env)


def run_reference_episode(config: RunConfig, seed: int | None = None, out_dir=None) -> EpisodeResult:
    """Plain UCB loop with every augmentation code path removed.

    Exists to pin down the zero-schedule degenerate case: this function never
    touches scorers, schedules, or the calibration tracker, yet must emit
    byte-identical CSVs to run_episode under the zero schedule.
    """
    if seed is None:
        seed = config.seed
    root = np.random.SeedSequence(seed)
    env_ss, _scorer_ss = root.spawn(2)  # spawn both streams, use one
    env = build_environment(config.environment, np.random.default_rng(env_ss))
    policy = DisjointLinUCB(
        PolicyConfig(
            num_arms=env.num_arms,
            dim=env.dim,
            alpha=config.alpha,
            lambda_reg=config.lambda_reg,
            inverse_mode=config.inverse_mode,
        )
    )
    records: list[RoundRecord] = []
    cum_realized = 0.0
    cum_expected = 0.0
    started = time.perf_counter()
    for t in range(config.horizon):
        step = env.observe(t)
        chosen = policy.select_arm(step.contexts)
        reward = env.realize(t, chosen)
        policy.update(chosen, step.contexts[chosen], reward, 1.0)
        regret_realized = step.r_star - reward
        regret_expected = step.r_star - float(step.expected_rewards[chosen])
        cum_realized += regret_realized
        cum_expected += regret_expected
        records.append(
            RoundRecord(
                t=t,
                chosen_arm=chosen,
                realized_reward=reward,
                expected_reward_chosen=float(step.expected_rewards[chosen]),
                r_star=step.r_star,
                regret_realized=regret_realized,
                regret_expected=regret_expected,
                cum_regret_realized=cum_realized,
                cum_regret_expected=cum_expected,
                weight=0.0,
                ema_error=0.0,
                probe_prediction=None,
                pseudo_predictions={},
                tokens_in=0,
                tokens_out=0,
                scorer_status=STATUS_NONE,
            )
        )
    wall = time.perf_counter() - started
    summary = summarize(
        records,
        checkpoints=config.checkpoints,
        name=config.name,
        seed=seed,
        env_kind=config.environment.get("kind", env.name),
        wall_clock_s=wall,
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        paths = _episode_paths(out_dir, seed)
        write_rounds_csv(paths["rounds"], records)
        with open(paths["summary"], "w", encoding="utf-8") as fh:
            json.dump(summary.to_dict(), fh, indent=2)
            fh.write("\n")
    return EpisodeResult(records=records, summary=summary, policy=policy, environment=env)


# ---------------------------------------------------------------------------
# Sweeps and reporting
# ---------------------------------------------------------------------------

EPISODE_CSV_COLUMNS = (
    "name",
    "seed",
    "status",
    "primary_metric",
    "checkpoint",
    "cum_regret",
    "cum_regret_expected",
    "cum_regret_realized",
    "total_tokens_in",
    "total_tokens_out",
    "mean_weight",
    "final_ema",
    "wall_clock_s",
    "error",
)


def run_sweep(configs, seeds, out_dir=None, parallelism: int = 1):
    """Cartesian product of configs x seeds; one failed cell never kills the rest.

    Returns (summaries, failures) where failures is a list of
    (config name, seed, error message).
    """
    if not configs or not seeds:
        raise ValueError("run_sweep needs at least one config and one seed")
    cells = [(cfg, int(seed)) for cfg in configs for seed in seeds]

    def _cell(args):
        cfg, seed = args
        cell_dir = os.path.join(out_dir, cfg.name) if out_dir is not None else None
        return run_episode(cfg, seed=seed, out_dir=cell_dir).summary

    summaries = []
    failures = []
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {pool.submit(_cell, cell): cell for cell in cells}
            for fut, (cfg, seed) in futures.items():
                try:
                    summaries.append(fut.result())
                except Exception as exc:
                    failures.append((cfg.name, seed, str(exc)))
    else:
        for cell in cells:
            try:
                summaries.append(_cell(cell))
            except Exception as exc:
                failures.append((cell[0].name, cell[1], str(exc)))

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        _write_sweep_csvs(out_dir, summaries, failures)
    return summaries, failures


def _write_sweep_csvs(out_dir, summaries, failures) -> None:
    with open(os.path.join(out_dir, "episodes.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EPISODE_CSV_COLUMNS)
        for s in summaries:
            for i, c in enumerate(s.checkpoints):
                writer.writerow(
                    [
                        s.name,
                        s.seed,
                        "ok",
                        s.primary_metric,
                        c,
                        repr(s.cum_regret[i]),
                        repr(s.cum_regret_expected[i]),
                        repr(s.cum_regret_realized[i]),
                        s.total_tokens_in,
                        s.total_tokens_out,
                        repr(s.mean_weight),
                        repr(s.final_ema),
                        repr(s.wall_clock_s),
                        "",
                    ]
                )
        for name, seed, err in failures:
            writer.writerow([name, seed, "error", "", "", "", "", "", "", "", "", "", "", err])

    rows = aggregate_summaries(summaries)
    with open(os.path.join(out_dir, "aggregate.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["name", "checkpoint", "n_seeds", "mean_cum_regret", "stderr"])
        for row in rows:
            writer.writerow(
                [row["name"], row["checkpoint"], row["n_seeds"], repr(row["mean"]), repr(row["stderr"])]
            )


def aggregate_summaries(summaries) -> list[dict]:
    """Per (config, checkpoint): mean and standard error over seeds."""
    by_name: dict[str, list[RunSummary]] = {}
    for s in summaries:
        by_name.setdefault(s.name, []).append(s)
    rows = []
    for name in sorted(by_name):
        group = by_name[name]
        checkpoints = group[0].checkpoints
        for i, c in enumerate(checkpoints):
            values = np.array([s.cum_regret[i] for s in group])
            n = len(values)
            stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
            rows.append(
                {
                    "name": name,
                    "checkpoint": c,
                    "n_seeds": n,
                    "mean": float(values.mean()),
                    "stderr": stderr,
                }
            )
    return rows


def report_runs(runs_dir, checkpoints=DEFAULT_CHECKPOINTS) -> list[dict]:
    """Recompute checkpoint regrets from rounds CSVs under a directory tree.

    Cumulative values are re-derived from the per-round regret columns rather
    than trusted from the cumulative columns.
    """
    rows = []
    for root, _dirs, files in os.walk(runs_dir):
        for fname in sorted(files):
            if not (fname.startswith("rounds") and fname.endswith(".csv")):
                continue
            path = os.path.join(root, fname)
            records = read_rounds_csv(path)
            label = os.path.relpath(path, runs_dir)
            row = {"run": label}
            for metric in ("expected", "realized"):
                per_round = [r[f"regret_{metric}"] for r in records]
                for c in checkpoints:
                    if c > len(per_round):
                        raise ValueError(f"{path}: checkpoint {c} beyond {len(per_round)} rounds")
                    row[f"{metric}@{c}"] = float(np.sum(per_round[:c]))
            row["tokens_in"] = int(np.sum([r["tokens_in"] for r in records]))
            rows.append(row)
    if not rows:
        raise ValueError(f"no rounds CSVs found under {runs_dir}")
    return rows


def format_report(rows, checkpoints=DEFAULT_CHECKPOINTS) -> str:
    headers = ["run"]
    for metric in ("expected", "realized"):
        headers += [f"{metric}@{c}" for c in checkpoints]
    headers.append("tokens_in")
    table = [headers]
    for row in rows:
        table.append(
            [row["run"]]
            + [f"{row[f'{metric}@{c}']:.2f}" for metric in ("expected", "realized") for c in checkpoints]
            + [str(row["tokens_in"])]
        )
    widths = [max(len(line[i]) for line in table) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)) for line in table]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Forced-exploration harness for estimator-level studies
# ---------------------------------------------------------------------------


def run_forced_exploration(
    weight: float,
    bias: float = 0.0,
    scorer_noise: float = 0.0,
    env_noise: float = 0.0,
    K: int = 5,
    d: int = 10,
    horizon: int = 100,
    theta_seed: int = 1234,
    seed: int = 0,
    lambda_reg: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Round-robin pulls with oracle pseudo-observations at a fixed weight.

    Bypasses UCB selection so each arm accrues exactly horizon/K real
    observations and horizon - horizon/K pseudo-observations, isolating the
    estimator from the policy. Returns (theta_hat stack, theta_star stack),
    both (K, d+1).
    """
    from .environments import SyntheticConfig, SyntheticEnv
    from .scorers import OracleScorer

    if not 0.0 <= weight < 1.0:
        raise ValueError(f"weight must be in [0, 1), got {weight}")
    root = np.random.SeedSequence(seed)
    env_ss, scorer_ss = root.spawn(2)
    env = SyntheticEnv(
        SyntheticConfig(K=K, d=d, noise_sigma=env_noise, theta_seed=theta_seed),
        np.random.default_rng(env_ss),
    )
    scorer = OracleScorer(np.random.default_rng(scorer_ss), bias=bias, noise_sigma=scorer_noise)
    policy = DisjointLinUCB(PolicyConfig(num_arms=K, dim=d + 1, alpha=0.0, lambda_reg=lambda_reg))
    for t in range(horizon):
        step = env.observe(t)
        chosen = t % K
        reward = env.realize(t, chosen)
        policy.update(chosen, step.contexts[chosen], reward, 1.0)
        if weight > 0.0:
            unplayed = tuple(a for a in range(K) if a != chosen)
            request = ScoreRequest(
                t=t,
                context_text=step.context_text,
                arm_descriptions=step.arm_texts,
                target_arms=unplayed,
                mode=MODE_COUNTERFACTUAL,
            )
            preds = scorer.score(request, step.expected_rewards)
            for a in unplayed:
                policy.update(a, step.contexts[a], preds.predicted[a], weight)
    theta = np.stack([policy.theta_hat(a) for a in range(K)])
    return theta, env.theta_star
