"""Prompt rendering: determinism, truncation, and style/mode compatibility."""
import pytest

from calbandit.prompts import (
    GENERIC_HISTORY_ROUNDS,
    PROMPT_STYLES,
    READING_HISTORY_TITLES,
    render_prompt,
)
from calbandit.scorers import (
    MODE_COUNTERFACTUAL,
    MODE_JOINT,
    MODE_PROBE,
    ScoreRequest,
)


def make_request(mode=MODE_PROBE, targets=(0,), t=9, history=(), notes=""):
    return ScoreRequest(
        t=t,
        context_text="cap-shape: convex\nodor: almond",
        arm_descriptions=("eat the mushroom", "do not eat the mushroom"),
        target_arms=tuple(targets),
        mode=mode,
        history=tuple(history),
        feature_notes=notes,
    )


def test_rendering_is_deterministic():
    req = make_request(history=((8, 1, 0.0), (7, 0, 5.0)))
    for style in ("generic_counterfactual", "counterfactual_with_context"):
        assert render_prompt(style, req) == render_prompt(style, req)
    joint = make_request(mode=MODE_JOINT, targets=(0, 1))
    assert render_prompt("mind_click", joint) == render_prompt("mind_click", joint)


def test_probe_prompt_mentions_single_action():
    text = render_prompt("generic_counterfactual", make_request(targets=(1,)))
    assert "about to take action 1" in text
    assert "eat the mushroom" in text
    assert '"predicted_reward"' in text


def test_counterfactual_prompt_lists_targets():
    req = make_request(mode=MODE_COUNTERFACTUAL, targets=(1,))
    text = render_prompt("generic_counterfactual", req)
    assert "had it taken that action instead: 1." in text
    assert "about to take" not in text


def test_history_truncates_to_recent_rounds():
    # 7 rounds supplied most-recent-first; only the 5 newest survive
    history = tuple((t, t % 2, float(t)) for t in range(8, 1, -1))
    assert len(history) == 7
    text = render_prompt("generic_counterfactual", make_request(history=history))
    kept = [ln for ln in text.splitlines() if ln.startswith("  round ")]
    assert len(kept) == GENERIC_HISTORY_ROUNDS
    assert kept[0] == "  round 8: took action 0, observed reward 8.0"
    assert kept[-1] == "  round 4: took action 0, observed reward 4.0"
    assert "round 3" not in text and "round 2" not in text


def test_empty_history_renders_placeholder():
    text = render_prompt("generic_counterfactual", make_request())
    assert "none yet" in text


def test_feature_notes_only_in_context_style():
    req = make_request(notes="odor: smell of the cap")
    plain = render_prompt("generic_counterfactual", req)
    rich = render_prompt("counterfactual_with_context", req)
    assert "Feature guide" not in plain
    assert "Feature guide:\nodor: smell of the cap" in rich


def test_mind_click_truncates_reading_history():
    titles = "\n".join(f"Story number {i}" for i in range(12))
    req = ScoreRequest(
        t=20,
        context_text=titles,
        arm_descriptions=tuple(f"Candidate {k}" for k in range(5)),
        target_arms=(0, 1, 2, 3, 4),
        mode=MODE_JOINT,
    )
    text = render_prompt("mind_click", req)
    kept = [ln for ln in text.splitlines() if ". Story number" in ln]
    assert len(kept) == READING_HISTORY_TITLES
    # oldest surviving title first, numbered from 1
    assert kept[0].strip() == "1. Story number 2"
    assert kept[-1].strip() == "10. Story number 11"
    assert "Story number 0" not in text and "Story number 1\n" not in text


def test_mind_click_empty_history():
    req = ScoreRequest(
        t=0,
        context_text="",
        arm_descriptions=("A", "B"),
        target_arms=(0, 1),
        mode=MODE_JOINT,
    )
    text = render_prompt("mind_click", req)
    assert "no recorded reading history" in text


def test_mind_click_requires_joint_mode():
    with pytest.raises(ValueError):
        render_prompt("mind_click", make_request(mode=MODE_PROBE, targets=(0,)))


def test_generic_styles_reject_joint_mode():
    joint = make_request(mode=MODE_JOINT, targets=(0, 1))
    for style in ("generic_counterfactual", "counterfactual_with_context"):
        with pytest.raises(ValueError):
            render_prompt(style, joint)


def test_unknown_style_rejected():
    with pytest.raises(ValueError):
        render_prompt("haiku", make_request())
    assert set(PROMPT_STYLES) == {
        "generic_counterfactual",
        "counterfactual_with_context",
        "mind_click",
    }
