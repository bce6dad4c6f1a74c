"""Prompt rendering for LLM scorers.

Three styles:

- ``generic_counterfactual``: describes the decision problem abstractly and
  asks for per-action expected rewards. Used for both the pre-outcome probe
  (one action) and counterfactual scoring (the actions not taken).
- ``counterfactual_with_context``: the generic style plus a feature guide
  explaining what the context fields mean.
- ``mind_click``: asks for click probabilities on candidate articles given a
  reading history; one call covers every arm at once.

Rendering is pure string building: identical requests produce byte-identical
prompts. Oversized histories are truncated from the oldest end.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .scorers import ScoreRequest

GENERIC_HISTORY_ROUNDS = 5
READING_HISTORY_TITLES = 10

PROMPT_STYLES = ("generic_counterfactual", "counterfactual_with_context", "mind_click")

_JSON_INSTRUCTION = (
    'Return predictions as JSON: an object mapping each action index (as a string) to '
    '{"predicted_reward": <number>, "confidence": <number between 0 and 1>}. '
    "Include exactly the action indices requested, no other keys."
)


def _action_block(request: ScoreRequest) -> str:
    lines = ["Available actions:"]
    for k, desc in enumerate(request.arm_descriptions):
        lines.append(f"  {k}: {desc}")
    return "\n".join(lines)


def _history_block(request: ScoreRequest) -> str:
    # request.history is most-recent-first; dropping the tail drops the oldest
    kept = list(request.history)[:GENERIC_HISTORY_ROUNDS]
    if not kept:
        return "Past rounds (most recent first):\n  none yet"
    lines = ["Past rounds (most recent first):"]
    for rnd, arm, reward in kept:
        lines.append(f"  round {rnd}: took action {arm}, observed reward {reward}")
    return "\n".join(lines)


def _generic(request: ScoreRequest, feature_notes: str) -> str:
    parts = [
        "You are estimating rewards for an online decision system that picks one "
        "action per round and only observes the reward of the action it takes.",
        f"Context:\n{request.context_text}",
        _action_block(request),
    ]
    if feature_notes:
        parts.append(f"Feature guide:\n{feature_notes}")
    parts.append(_history_block(request))
    targets = ", ".join(str(a) for a in request.target_arms)
    if request.mode == "probe":
        k = request.target_arms[0]
        parts.append(
            f"The system is about to take action {k} this round. The outcome is not "
            f"known yet. Predict the expected reward action {k} will produce."
        )
    else:
        parts.append(
            "The system took a different action this round. For each of the actions "
            f"listed next, predict the expected reward the system would have received "
            f"had it taken that action instead: {targets}."
        )
    parts.append(_JSON_INSTRUCTION)
    return "\n\n".join(parts)


def _mind_click(request: ScoreRequest) -> str:
    titles = [ln for ln in request.context_text.split("\n") if ln.strip()]
    titles = titles[-READING_HISTORY_TITLES:]
    if titles:
        history_lines = "\n".join(f"  {i + 1}. {t}" for i, t in enumerate(titles))
        history = f"Articles this user recently read (oldest first):\n{history_lines}"
    else:
        history = "This user has no recorded reading history."
    candidates = "\n".join(f"  {k}: {d}" for k, d in enumerate(request.arm_descriptions))
    return "\n\n".join(
        [
            "You are predicting news clicks.",
            history,
            f"Candidate articles:\n{candidates}",
            "For each candidate article, predict the probability that this user will "
            "click on it.",
            'Return predictions as JSON: an object mapping each candidate index (as a '
            'string) to {"predicted_reward": <number between 0 and 1>, '
            '"confidence": <number between 0 and 1>}. Include every candidate index.',
        ]
    )


def render_prompt(style: str, request: ScoreRequest) -> str:
    if style not in PROMPT_STYLES:
        raise ValueError(f"unknown prompt style {style!r}; choose from {PROMPT_STYLES}")
    if style == "mind_click":
        if request.mode != "joint_all_arms":
            raise ValueError("mind_click renders a single all-arms call; mode must be joint_all_arms")
        return _mind_click(request)
    if request.mode == "joint_all_arms":
        raise ValueError(f"{style} expects probe or counterfactual mode, got joint_all_arms")
    notes = request.feature_notes if style == "counterfactual_with_context" else ""
    return _generic(request, notes)
