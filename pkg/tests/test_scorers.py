"""Scorer interface: simulated oracles, hedged predictor, replay round trips."""
import json
import math

import numpy as np
import pytest

from calbandit.scorers import (
    MODE_COUNTERFACTUAL,
    MODE_JOINT,
    MODE_PROBE,
    HedgedScorer,
    LlmScorer,
    OracleScorer,
    ReplayLogError,
    ReplayLogWriter,
    ReplayScorer,
    ScorePrediction,
    ScoreRequest,
    ScorerUnavailable,
    build_scorer,
    load_replay_log,
)


def req(mode=MODE_COUNTERFACTUAL, targets=(0, 1), t=3, n_arms=3):
    return ScoreRequest(
        t=t,
        context_text="ctx",
        arm_descriptions=tuple(f"arm {k}" for k in range(n_arms)),
        target_arms=tuple(targets),
        mode=mode,
    )


# ---------------------------------------------------------------- requests


def test_request_validation():
    with pytest.raises(ValueError):
        req(mode="oracle")
    with pytest.raises(ValueError):
        req(t=-1)
    with pytest.raises(ValueError):
        req(targets=())
    with pytest.raises(ValueError):
        req(mode=MODE_PROBE, targets=(0, 1))
    with pytest.raises(ValueError):
        req(targets=(3,), n_arms=3)
    with pytest.raises(ValueError):
        ScoreRequest(
            t=2,
            context_text="",
            arm_descriptions=("a", "b"),
            target_arms=(0,),
            mode=MODE_PROBE,
            history=((2, 0, 1.0),),  # history may only contain rounds before t
        )


def test_prediction_validation():
    ScorePrediction(predicted={0: 1.0}, confidence={0: 0.5})
    with pytest.raises(ValueError):
        ScorePrediction(predicted={0: math.nan}, confidence={})
    with pytest.raises(ValueError):
        ScorePrediction(predicted={0: 1.0}, confidence={0: 1.5})
    with pytest.raises(ValueError):
        ScorePrediction(predicted={0: 1.0}, confidence={0: 1.0}, tokens_in=-1)


# ------------------------------------------------------------------ oracle


def test_oracle_exact_truth():
    s = OracleScorer(np.random.default_rng(0))
    out = s.score(req(targets=(0, 2)), hidden_truth=np.array([5.0, 0.0, -35.0]))
    assert out.predicted == {0: 5.0, 2: -35.0}
    assert out.confidence == {0: 1.0, 2: 1.0}
    assert out.tokens_in == 0 and out.tokens_out == 0


def test_oracle_scalar_and_per_arm_bias():
    truth = np.array([1.0, 2.0, 3.0])
    scalar = OracleScorer(np.random.default_rng(0), bias=0.5)
    assert scalar.score(req(targets=(1,)), hidden_truth=truth).predicted == {1: 2.5}
    vector = OracleScorer(np.random.default_rng(0), bias=np.array([0.1, -0.2, 0.3]))
    out = vector.score(req(targets=(0, 1, 2)), hidden_truth=truth)
    assert out.predicted == pytest.approx({0: 1.1, 1: 1.8, 2: 3.3})


def test_oracle_noise_is_seeded():
    truth = np.array([0.0, 0.0, 0.0])
    a = OracleScorer(np.random.default_rng(42), noise_sigma=0.3)
    b = OracleScorer(np.random.default_rng(42), noise_sigma=0.3)
    for _ in range(5):
        ra = a.score(req(targets=(0, 1, 2)), hidden_truth=truth)
        rb = b.score(req(targets=(0, 1, 2)), hidden_truth=truth)
        assert ra.predicted == rb.predicted
    assert ra.predicted != {0: 0.0, 1: 0.0, 2: 0.0}


def test_oracle_zero_sigma_never_draws():
    rng = np.random.default_rng(7)
    s = OracleScorer(rng, noise_sigma=0.0)
    s.score(req(targets=(0, 1)), hidden_truth=np.array([1.0, 2.0, 3.0]))
    # identical generator state as a fresh seed: no draws were consumed
    assert rng.normal() == np.random.default_rng(7).normal()


def test_oracle_requires_truth():
    s = OracleScorer(np.random.default_rng(0))
    assert s.needs_truth
    with pytest.raises(ValueError):
        s.score(req())


def test_oracle_clips_to_reward_range():
    s = OracleScorer(np.random.default_rng(0), bias=10.0, reward_range=(-35.0, 5.0))
    out = s.score(req(targets=(0,)), hidden_truth=np.array([4.0, 0.0, 0.0]))
    assert out.predicted == {0: 5.0}


def test_oracle_rejects_negative_sigma():
    with pytest.raises(ValueError):
        OracleScorer(np.random.default_rng(0), noise_sigma=-0.1)


# ------------------------------------------------------------------ hedged


def test_hedged_band_and_confidence():
    s = HedgedScorer(np.random.default_rng(1), lo=0.2, hi=0.5)
    for _ in range(50):
        out = s.score(req(targets=(0, 1, 2)))
        for v in out.predicted.values():
            assert 0.2 <= v <= 0.5
        assert set(out.confidence.values()) == {0.5}


def test_hedged_is_seeded():
    a = HedgedScorer(np.random.default_rng(5), lo=-1.0, hi=1.0)
    b = HedgedScorer(np.random.default_rng(5), lo=-1.0, hi=1.0)
    for _ in range(10):
        assert a.score(req()).predicted == b.score(req()).predicted


def test_hedged_clips_band_to_reward_range():
    s = HedgedScorer(np.random.default_rng(2), lo=-10.0, hi=10.0, reward_range=(0.0, 1.0))
    seen = [v for _ in range(100) for v in s.score(req()).predicted.values()]
    assert min(seen) == 0.0 and max(seen) == 1.0  # saturates at both edges


def test_hedged_rejects_inverted_band():
    with pytest.raises(ValueError):
        HedgedScorer(np.random.default_rng(0), lo=0.5, hi=0.2)


# ------------------------------------------------------------------ replay


def make_log(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def rec(t, mode, arm, pred, conf=0.9, tin=0, tout=0):
    return {
        "t": t,
        "mode": mode,
        "arm": arm,
        "predicted_reward": pred,
        "confidence": conf,
        "tokens_in": tin,
        "tokens_out": tout,
    }


def test_replay_roundtrip_through_writer(tmp_path):
    path = tmp_path / "log.jsonl"
    writer = ReplayLogWriter(path)
    writer.record_call(
        0,
        MODE_PROBE,
        ScorePrediction(predicted={1: 0.7}, confidence={1: 0.8}, tokens_in=120, tokens_out=30),
        arms=[1],
    )
    writer.record_call(
        0,
        MODE_COUNTERFACTUAL,
        ScorePrediction(
            predicted={0: 0.2, 2: 0.4},
            confidence={0: 0.6, 2: 0.7},
            tokens_in=200,
            tokens_out=50,
        ),
        arms=[0, 2],
    )
    writer.close()

    entries = load_replay_log(path)
    assert entries[(0, MODE_PROBE, 1)]["predicted_reward"] == 0.7
    # tokens ride on the first arm record only
    assert entries[(0, MODE_COUNTERFACTUAL, 0)]["tokens_in"] == 200
    assert entries[(0, MODE_COUNTERFACTUAL, 2)]["tokens_in"] == 0

    scorer = ReplayScorer(path)
    assert scorer.call_pattern == "two_call"
    out = scorer.score(req(mode=MODE_COUNTERFACTUAL, targets=(0, 2), t=0))
    assert out.predicted == {0: 0.2, 2: 0.4}
    assert out.confidence == {0: 0.6, 2: 0.7}
    assert out.tokens_in == 200 and out.tokens_out == 50


def test_replay_joint_pattern_inferred(tmp_path):
    path = tmp_path / "log.jsonl"
    make_log(
        path,
        [rec(t, MODE_JOINT, a, 0.1 * a, tin=90 if a == 0 else 0) for t in range(2) for a in range(3)],
    )
    scorer = ReplayScorer(path)
    assert scorer.call_pattern == "joint"
    out = scorer.score(req(mode=MODE_JOINT, targets=(0, 1, 2), t=1))
    assert out.predicted == pytest.approx({0: 0.0, 1: 0.1, 2: 0.2})
    assert out.tokens_in == 90


def test_replay_missing_round_is_hard_error(tmp_path):
    path = tmp_path / "log.jsonl"
    make_log(path, [rec(0, MODE_PROBE, 0, 1.0)])
    scorer = ReplayScorer(path)
    with pytest.raises(ReplayLogError):
        scorer.score(req(mode=MODE_PROBE, targets=(0,), t=5))


def test_replay_malformed_line(tmp_path):
    path = tmp_path / "log.jsonl"
    path.write_text(json.dumps(rec(0, MODE_PROBE, 0, 1.0)) + "\n{oops\n", encoding="utf-8")
    with pytest.raises(ReplayLogError, match="malformed"):
        load_replay_log(path)


def test_replay_missing_field(tmp_path):
    path = tmp_path / "log.jsonl"
    bad = rec(0, MODE_PROBE, 0, 1.0)
    del bad["confidence"]
    make_log(path, [bad])
    with pytest.raises(ReplayLogError, match="confidence"):
        load_replay_log(path)


def test_replay_empty_or_absent_log(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(ReplayLogError):
        load_replay_log(empty)
    with pytest.raises(ReplayLogError):
        load_replay_log(tmp_path / "nope.jsonl")


def test_replay_applies_clipping(tmp_path):
    path = tmp_path / "log.jsonl"
    make_log(path, [rec(0, MODE_PROBE, 0, 99.0)])
    scorer = ReplayScorer(path, reward_range=(0.0, 1.0))
    out = scorer.score(req(mode=MODE_PROBE, targets=(0,), t=0))
    assert out.predicted == {0: 1.0}


# ------------------------------------------------------------- build_scorer


def test_build_scorer_dispatch(tmp_path):
    rng = np.random.default_rng(0)
    assert isinstance(build_scorer({"kind": "oracle", "bias": 0.1}, rng), OracleScorer)
    assert isinstance(build_scorer({"kind": "hedged", "lo": 0.0, "hi": 1.0}, rng), HedgedScorer)
    path = tmp_path / "log.jsonl"
    make_log(path, [rec(0, MODE_PROBE, 0, 1.0)])
    assert isinstance(build_scorer({"kind": "replay", "path": str(path)}, rng), ReplayScorer)
    llm = build_scorer(
        {"kind": "llm", "endpoint": "http://localhost:1/v1", "model": "m", "prompt_style": "mind_click"},
        rng,
        reward_range=(0.0, 1.0),
    )
    assert isinstance(llm, LlmScorer)
    assert llm.call_pattern == "joint"
    assert llm.reward_range == (0.0, 1.0)


def test_build_scorer_errors(tmp_path):
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        build_scorer({}, rng)
    with pytest.raises(ValueError):
        build_scorer({"kind": "psychic"}, rng)
    with pytest.raises(ValueError):
        build_scorer({"kind": "replay"}, rng)
    with pytest.raises(ValueError):
        build_scorer({"kind": "llm", "model": "m"}, rng)
    with pytest.raises(TypeError):
        build_scorer({"kind": "oracle", "bogus": 1}, rng)


def test_reward_range_reaches_built_scorer():
    rng = np.random.default_rng(0)
    s = build_scorer({"kind": "oracle", "bias": 50.0}, rng, reward_range=(-35.0, 5.0))
    out = s.score(req(targets=(0,)), hidden_truth=np.array([0.0, 0.0, 0.0]))
    assert out.predicted == {0: 5.0}


def test_llm_scorer_unreachable_endpoint_raises_unavailable():
    s = LlmScorer(endpoint="http://127.0.0.1:9/v1/chat/completions", model="m", timeout=0.2)
    with pytest.raises(ScorerUnavailable):
        s.score(req(mode=MODE_PROBE, targets=(0,)))
