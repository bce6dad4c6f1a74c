"""Named run configurations.

Five presets cover the standard comparison grid: a scorer-less baseline, the
generic counterfactual prompt, the click-focused prompt, the click prompt with
calibration gating, and the generic prompt with feature descriptions. All
share alpha=1.0, lambda_reg=1.0, beta=0.95, T=100, seed=42.
"""
from __future__ import annotations

from .runner import RunConfig

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"
DEFAULT_MODEL = "gpt-4o-mini"

# schedule + prompt style per preset; None prompt style means no scorer
_PRESETS: dict[str, dict] = {
    "no_llm": {
        "schedule": {"name": "zero"},
        "prompt_style": None,
    },
    "llm_default": {
        "schedule": {"name": "constant", "lambda_w": 0.1},
        "prompt_style": "generic_counterfactual",
    },
    "llm_click": {
        "schedule": {"name": "constant", "lambda_w": 0.1},
        "prompt_style": "mind_click",
    },
    "llm_cal_gated": {
        "schedule": {"name": "calibration_gated", "lambda_w": 0.3, "eta": 10.0},
        "prompt_style": "mind_click",
    },
    "llm_context": {
        "schedule": {"name": "constant", "lambda_w": 0.1},
        "prompt_style": "counterfactual_with_context",
    },
}

PRESET_NAMES = tuple(_PRESETS)


def preset_config(
    name: str,
    environment: dict,
    endpoint: str = DEFAULT_ENDPOINT,
    model: str = DEFAULT_MODEL,
    scorer: dict | None = None,
    horizon: int = 100,
    seed: int = 42,
    n_sims: int = 1,
) -> RunConfig:
    """Build a RunConfig for a named preset on the given environment.

    ``scorer`` swaps in a different scorer spec (say an oracle for offline
    study) while keeping the preset's schedule; ignored for the scorer-less
    baseline.
    """
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    p = _PRESETS[name]
    if p["prompt_style"] is None:
        scorer_spec = None
    elif scorer is not None:
        scorer_spec = dict(scorer)
    else:
        scorer_spec = {
            "kind": "llm",
            "endpoint": endpoint,
            "model": model,
            "prompt_style": p["prompt_style"],
            "temperature": 0.0,
        }
    return RunConfig(
        name=name,
        environment=dict(environment),
        schedule=dict(p["schedule"]),
        scorer=scorer_spec,
        horizon=horizon,
        seed=seed,
        n_sims=n_sims,
    )


def all_preset_configs(environment: dict, **kwargs) -> list[RunConfig]:
    return [preset_config(name, environment, **kwargs) for name in PRESET_NAMES]
