"""Online scorer-accuracy tracking.

An exponential moving average of squared prediction error on the played arm:
E <- beta * E + (1 - beta) * (prediction - reward)^2, starting at E = 0.
Only probe predictions feed the tracker; counterfactual predictions for
unplayed arms have no realized reward to compare against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class EmaTracker:
    beta: float = 0.95
    value: float = field(default=0.0, init=False)
    steps: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must be in [0, 1), got {self.beta}")

    def record(self, prediction: float, realized_reward: float) -> float:
        """Fold one squared error into the average; returns the new value."""
        if not (math.isfinite(prediction) and math.isfinite(realized_reward)):
            raise ValueError(
                f"prediction and reward must be finite, got {prediction}, {realized_reward}"
            )
        err = (prediction - realized_reward) ** 2
        self.value = self.beta * self.value + (1.0 - self.beta) * err
        self.steps += 1
        return self.value

    def current_error(self) -> float:
        return self.value

    def reset(self) -> None:
        self.value = 0.0
        self.steps = 0
