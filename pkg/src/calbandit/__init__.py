"""Contextual bandit simulations: disjoint linear UCB with weighted
scorer pseudo-observations, pluggable decay schedules, and online
calibration tracking."""

from .calibration import EmaTracker
from .environments import (
    EnvStep,
    Environment,
    MindConfig,
    MindEnv,
    MushroomConfig,
    MushroomEnv,
    MushroomRewards,
    SyntheticConfig,
    SyntheticEnv,
    build_environment,
)
from .kernels import active_backend, use_backend
from .policy import ArmState, DisjointLinUCB, PolicyConfig, init_arm
from .presets import PRESET_NAMES, all_preset_configs, preset_config
from .prompts import PROMPT_STYLES, render_prompt
from .runner import (
    EpisodeResult,
    RoundRecord,
    RunConfig,
    RunSummary,
    read_rounds_csv,
    run_episode,
    run_forced_exploration,
    run_reference_episode,
    run_sweep,
    summarize,
    write_rounds_csv,
)
from .schedules import (
    CalibrationGatedSchedule,
    ConstantSchedule,
    ExponentialSchedule,
    HybridSchedule,
    InverseSchedule,
    PowerSchedule,
    WeightSchedule,
    ZeroSchedule,
    available_schedules,
    schedule_from_config,
)
from .scorers import (
    HedgedScorer,
    LlmScorer,
    OracleScorer,
    ReplayLogError,
    ReplayLogWriter,
    ReplayScorer,
    ScorePrediction,
    ScoreRequest,
    Scorer,
    ScorerUnavailable,
    build_scorer,
    load_replay_log,
)

__version__ = "0.1.0"

__all__ = [
    "ArmState",
    "CalibrationGatedSchedule",
    "ConstantSchedule",
    "DisjointLinUCB",
    "EmaTracker",
    "EnvStep",
    "Environment",
    "EpisodeResult",
    "ExponentialSchedule",
    "HedgedScorer",
    "HybridSchedule",
    "InverseSchedule",
    "LlmScorer",
    "MindConfig",
    "MindEnv",
    "MushroomConfig",
    "MushroomEnv",
    "MushroomRewards",
    "OracleScorer",
    "PolicyConfig",
    "PowerSchedule",
    "PRESET_NAMES",
    "PROMPT_STYLES",
    "ReplayLogError",
    "ReplayLogWriter",
    "ReplayScorer",
    "RoundRecord",
    "RunConfig",
    "RunSummary",
    "ScorePrediction",
    "ScoreRequest",
    "Scorer",
    "ScorerUnavailable",
    "SyntheticConfig",
    "SyntheticEnv",
    "WeightSchedule",
    "ZeroSchedule",
    "active_backend",
    "all_preset_configs",
    "available_schedules",
    "build_environment",
    "build_scorer",
    "init_arm",
    "load_replay_log",
    "preset_config",
    "read_rounds_csv",
    "render_prompt",
    "run_episode",
    "run_forced_exploration",
    "run_reference_episode",
    "run_sweep",
    "schedule_from_config",
    "summarize",
    "use_backend",
    "write_rounds_csv",
]
