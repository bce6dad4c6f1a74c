"""Counterfactual reward scorers.

Four kinds share one interface: simulated oracles (ground truth plus bias and
noise), hedged mid-range predictors, replay of previously logged predictions,
and a real LLM spoken to over an OpenAI-compatible chat-completions endpoint
with a JSON response constraint.

A scorer that cannot produce predictions for a round raises
``ScorerUnavailable``; the runner treats that round as scorer-less (no
calibration update, no injection) and keeps going.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .prompts import render_prompt

MODE_PROBE = "probe"
MODE_COUNTERFACTUAL = "counterfactual"
MODE_JOINT = "joint_all_arms"
MODES = (MODE_PROBE, MODE_COUNTERFACTUAL, MODE_JOINT)

DEFAULT_API_KEY_ENV = "CALBANDIT_API_KEY"


class ScorerUnavailable(Exception):
    """The scorer could not produce predictions this round."""


class ReplayLogError(Exception):
    """Replay log is missing, malformed, or does not cover a requested round."""


@dataclass(frozen=True)
class ScoreRequest:
    t: int
    context_text: str
    arm_descriptions: tuple[str, ...]
    target_arms: tuple[int, ...]
    mode: str
    history: tuple[tuple[int, int, float], ...] = ()
    feature_notes: str = ""

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.t < 0:
            raise ValueError(f"round index must be >= 0, got {self.t}")
        if not self.target_arms:
            raise ValueError("target_arms must not be empty")
        if self.mode == MODE_PROBE and len(self.target_arms) != 1:
            raise ValueError(f"probe mode targets exactly one arm, got {self.target_arms}")
        k = len(self.arm_descriptions)
        for a in self.target_arms:
            if not 0 <= a < k:
                raise ValueError(f"target arm {a} out of range [0, {k})")
        for rnd, _, _ in self.history:
            if rnd >= self.t:
                raise ValueError(f"history contains round {rnd} >= current round {self.t}")


@dataclass
class ScorePrediction:
    predicted: dict[int, float]
    confidence: dict[int, float]
    tokens_in: int = 0
    tokens_out: int = 0
    raw_payload: str = ""

    def __post_init__(self) -> None:
        for arm, v in self.predicted.items():
            if not math.isfinite(v):
                raise ValueError(f"predicted reward for arm {arm} is not finite: {v}")
        for arm, c in self.confidence.items():
            if not 0.0 <= c <= 1.0:
                raise ValueError(f"confidence for arm {arm} outside [0, 1]: {c}")
        if self.tokens_in < 0 or self.tokens_out < 0:
            raise ValueError("token counts must be non-negative")


class Scorer:
    """Base scorer. ``call_pattern`` tells the runner how to drive it:

    - "two_call": a probe call for the played arm, then a counterfactual call
      for the rest.
    - "joint": one call covering every arm before the pull; the played arm's
      entry doubles as the probe.
    """

    call_pattern = "two_call"
    needs_truth = False

    def __init__(self, reward_range: tuple[float, float] | None = None):
        if reward_range is not None and reward_range[0] > reward_range[1]:
            raise ValueError(f"reward_range lo > hi: {reward_range}")
        self.reward_range = reward_range

    def _clip(self, value: float) -> float:
        if self.reward_range is None:
            return value
        lo, hi = self.reward_range
        return min(max(value, lo), hi)

    def score(self, request: ScoreRequest, hidden_truth=None) -> ScorePrediction:
        raise NotImplementedError


class OracleScorer(Scorer):
    """Ground truth plus per-arm additive bias plus seeded Gaussian noise.

    Simulates a scorer whose prediction for arm a is truth + bias_a + eps,
    eps ~ N(0, noise_sigma^2). Requires the environment's hidden expected
    rewards.
    """

    needs_truth = True

    def __init__(
        self,
        rng: np.random.Generator,
        bias=0.0,
        noise_sigma: float = 0.0,
        reward_range: tuple[float, float] | None = None,
    ):
        super().__init__(reward_range)
        if noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
        self.rng = rng
        self.bias = bias
        self.noise_sigma = noise_sigma

    def _bias_for(self, arm: int) -> float:
        if np.isscalar(self.bias):
            return float(self.bias)
        return float(self.bias[arm])

    def score(self, request: ScoreRequest, hidden_truth=None) -> ScorePrediction:
        if hidden_truth is None:
            raise ValueError("OracleScorer requires the environment's expected rewards")
        predicted = {}
        for arm in request.target_arms:
            v = float(hidden_truth[arm]) + self._bias_for(arm)
            if self.noise_sigma > 0:
                v += self.rng.normal(0.0, self.noise_sigma)
            predicted[arm] = self._clip(v)
        return ScorePrediction(
            predicted=predicted,
            confidence={arm: 1.0 for arm in request.target_arms},
        )


class HedgedScorer(Scorer):
    """Seeded uniform draws inside a fixed band, ignoring the context.

    Models a scorer that hedges every prediction into a mid-range interval.
    """

    def __init__(
        self,
        rng: np.random.Generator,
        lo: float = 0.2,
        hi: float = 0.5,
        reward_range: tuple[float, float] | None = None,
    ):
        super().__init__(reward_range)
        if lo > hi:
            raise ValueError(f"band lo > hi: [{lo}, {hi}]")
        self.rng = rng
        self.lo = lo
        self.hi = hi

    def score(self, request: ScoreRequest, hidden_truth=None) -> ScorePrediction:
        predicted = {
            arm: self._clip(float(self.rng.uniform(self.lo, self.hi)))
            for arm in request.target_arms
        }
        return ScorePrediction(
            predicted=predicted,
            confidence={arm: 0.5 for arm in request.target_arms},
        )


REPLAY_FIELDS = ("t", "mode", "arm", "predicted_reward", "confidence", "tokens_in", "tokens_out")


class ReplayLogWriter:
    """Appends one JSON record per (call, arm) to a newline-delimited log.

    Token counts for a call are carried on its first arm record (zeros on the
    rest) so that per-call sums survive the round trip.
    """

    def __init__(self, path):
        self.path = path
        try:
            self._fh = open(path, "w", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise ReplayLogError(f"cannot open replay log {path}: {exc}") from None

    def record_call(self, t: int, mode: str, prediction: ScorePrediction, arms) -> None:
        try:
            for i, arm in enumerate(arms):
                rec = {
                    "t": t,
                    "mode": mode,
                    "arm": int(arm),
                    "predicted_reward": prediction.predicted[arm],
                    "confidence": prediction.confidence.get(arm, 0.0),
                    "tokens_in": prediction.tokens_in if i == 0 else 0,
                    "tokens_out": prediction.tokens_out if i == 0 else 0,
                }
                self._fh.write(json.dumps(rec) + "\n")
            self._fh.flush()
        except OSError as exc:
            raise ReplayLogError(f"cannot append to replay log {self.path}: {exc}") from None

    def close(self) -> None:
        self._fh.close()


def load_replay_log(path) -> dict[tuple[int, str, int], dict]:
    """Parse a replay log into {(t, mode, arm): record}."""
    entries: dict[tuple[int, str, int], dict] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ReplayLogError(f"{path}:{lineno}: malformed JSON: {exc}") from None
                missing = [f for f in REPLAY_FIELDS if f not in rec]
                if missing:
                    raise ReplayLogError(f"{path}:{lineno}: missing fields {missing}")
                entries[(int(rec["t"]), str(rec["mode"]), int(rec["arm"]))] = rec
    except OSError as exc:
        raise ReplayLogError(f"cannot read replay log {path}: {exc}") from None
    if not entries:
        raise ReplayLogError(f"replay log {path} contains no records")
    return entries


class ReplayScorer(Scorer):
    """Serves logged predictions verbatim; any gap is a hard error."""

    def __init__(self, path, reward_range: tuple[float, float] | None = None):
        super().__init__(reward_range)
        self.path = path
        self.entries = load_replay_log(path)
        modes = {mode for (_, mode, _) in self.entries}
        self.call_pattern = "joint" if modes == {MODE_JOINT} else "two_call"

    def score(self, request: ScoreRequest, hidden_truth=None) -> ScorePrediction:
        predicted = {}
        confidence = {}
        tokens_in = 0
        tokens_out = 0
        for arm in request.target_arms:
            key = (request.t, request.mode, arm)
            if key not in self.entries:
                raise ReplayLogError(
                    f"replay log {self.path} has no record for round {request.t}, "
                    f"mode {request.mode}, arm {arm}"
                )
            rec = self.entries[key]
            predicted[arm] = self._clip(float(rec["predicted_reward"]))
            confidence[arm] = float(rec["confidence"])
            tokens_in += int(rec["tokens_in"])
            tokens_out += int(rec["tokens_out"])
        return ScorePrediction(
            predicted=predicted,
            confidence=confidence,
            tokens_in=tokens_in,
            tokens_out=tokens_out,
        )


@dataclass
class LlmScorer(Scorer):
    """Chat-completions client with a JSON response constraint.

    Issues one POST per score() call, asks for a JSON object mapping arm
    indices to {predicted_reward, confidence}, and retries malformed payloads
    up to max_retries. Transport failures (timeout, connection, HTTP error)
    raise ScorerUnavailable immediately.
    """

    endpoint: str
    model: str
    prompt_style: str = "generic_counterfactual"
    temperature: float = 0.0
    timeout: float = 30.0
    max_retries: int = 2
    api_key_env: str = DEFAULT_API_KEY_ENV
    reward_range: tuple[float, float] | None = None
    needs_truth = False
    _session: object = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.prompt_style == "mind_click":
            self.call_pattern = "joint"
        else:
            self.call_pattern = "two_call"
        if self.max_retries < 0:
            raise ValueError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.reward_range is not None and self.reward_range[0] > self.reward_range[1]:
            raise ValueError(f"reward_range lo > hi: {self.reward_range}")
        if self._session is None:
            import requests

            self._session = requests.Session()

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, prompt: str) -> dict:
        import requests

        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
            "response_format": {"type": "json_object"},
        }
        try:
            resp = self._session.post(
                self.endpoint, json=body, headers=self._headers(), timeout=self.timeout
            )
        except (requests.Timeout, requests.ConnectionError) as exc:
            raise ScorerUnavailable(f"LLM endpoint unreachable: {exc}") from None
        if resp.status_code != 200:
            raise ScorerUnavailable(f"LLM endpoint returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ScorerUnavailable(f"LLM response body is not JSON: {exc}") from None

    @staticmethod
    def _parse_payload(payload: dict, target_arms) -> tuple[str, dict, dict, int, int]:
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ValueError("response lacks choices[0].message.content")
        usage = payload.get("usage", {}) or {}
        tokens_in = int(usage.get("prompt_tokens", 0))
        tokens_out = int(usage.get("completion_tokens", 0))
        parsed = json.loads(content)
        if not isinstance(parsed, dict):
            raise ValueError("model output is not a JSON object")
        predicted = {}
        confidence = {}
        for arm in target_arms:
            entry = parsed.get(str(arm))
            if not isinstance(entry, dict) or "predicted_reward" not in entry:
                raise ValueError(f"model output missing arm {arm}")
            v = float(entry["predicted_reward"])
            if not math.isfinite(v):
                raise ValueError(f"non-finite predicted_reward for arm {arm}")
            c = float(entry.get("confidence", 0.0))
            predicted[arm] = v
            confidence[arm] = min(max(c, 0.0), 1.0)
        return content, predicted, confidence, tokens_in, tokens_out

    def score(self, request: ScoreRequest, hidden_truth=None) -> ScorePrediction:
        prompt = render_prompt(self.prompt_style, request)
        last_error = None
        for _ in range(self.max_retries + 1):
            payload = self._post(prompt)
            try:
                raw, predicted, confidence, tokens_in, tokens_out = self._parse_payload(
                    payload, request.target_arms
                )
            except (ValueError, json.JSONDecodeError) as exc:
                last_error = exc
                continue
            predicted = {arm: self._clip(v) for arm, v in predicted.items()}
            return ScorePrediction(
                predicted=predicted,
                confidence=confidence,
                tokens_in=tokens_in,
                tokens_out=tokens_out,
                raw_payload=raw,
            )
        raise ScorerUnavailable(
            f"LLM output unparseable after {self.max_retries + 1} attempts: {last_error}"
        )


SCORER_KINDS = ("oracle", "hedged", "replay", "llm")


def build_scorer(
    spec: dict,
    rng: np.random.Generator,
    reward_range: tuple[float, float] | None = None,
) -> Scorer:
    """Construct a scorer from a config mapping {'kind': ..., <params>}."""
    if "kind" not in spec:
        raise ValueError("scorer config needs a 'kind' key")
    params = dict(spec)
    kind = params.pop("kind")
    if kind == "oracle":
        return OracleScorer(
            rng,
            bias=params.pop("bias", 0.0),
            noise_sigma=params.pop("noise_sigma", 0.0),
            reward_range=reward_range,
            **params,
        )
    if kind == "hedged":
        return HedgedScorer(
            rng,
            lo=params.pop("lo", 0.2),
            hi=params.pop("hi", 0.5),
            reward_range=reward_range,
            **params,
        )
    if kind == "replay":
        if "path" not in params:
            raise ValueError("replay scorer config needs a 'path' key")
        return ReplayScorer(params.pop("path"), reward_range=reward_range, **params)
    if kind == "llm":
        for required in ("endpoint", "model"):
            if required not in params:
                raise ValueError(f"llm scorer config needs an '{required}' key")
        return LlmScorer(reward_range=reward_range, **params)
    raise ValueError(f"unknown scorer kind {kind!r}; choose from {SCORER_KINDS}")
