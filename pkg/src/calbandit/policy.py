"""Disjoint linear UCB policy with weighted-observation updates.

Each arm keeps independent ridge statistics (A, b). Real observations enter
with weight 1, pseudo-observations with weight in (0, 1). Scoring solves the
SPD system per call by default; an optional rank-1 inverse-maintenance mode
avoids refactorizing on long horizons.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

INVERSE_MODES = ("factorize", "sherman_morrison")


@dataclass
class PolicyConfig:
    num_arms: int
    dim: int
    alpha: float = 1.0
    lambda_reg: float = 1.0
    inverse_mode: str = "factorize"

    def __post_init__(self) -> None:
        if self.num_arms < 2:
            raise ValueError(f"num_arms must be >= 2, got {self.num_arms}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.lambda_reg <= 0:
            raise ValueError(f"lambda_reg must be > 0, got {self.lambda_reg}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.inverse_mode not in INVERSE_MODES:
            raise ValueError(f"inverse_mode must be one of {INVERSE_MODES}")


@dataclass
class ArmState:
    """Per-arm ridge sufficient statistics plus observation accounting."""

    A: np.ndarray
    b: np.ndarray
    n_real: int = 0
    n_pseudo: int = 0
    pseudo_mass: float = 0.0


def init_arm(config: PolicyConfig) -> ArmState:
    """Fresh arm: A = lambda_reg * I, b = 0, all counters zero."""
    return ArmState(
        A=config.lambda_reg * np.eye(config.dim),
        b=np.zeros(config.dim),
    )


def _as_context(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != dim:
        raise ValueError(f"context dimension {x.size} != policy dimension {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("context contains non-finite entries")
    return x


@dataclass
class DisjointLinUCB:
    """K independent weighted ridge regressions scored with a UCB index.

    Contexts are expected to arrive already bias-augmented (last coordinate
    exactly 1); the environment layer owns that transformation and
    ``expect_bias`` only switches the assertion on or off.
    """

    config: PolicyConfig
    expect_bias: bool = True
    _A: np.ndarray = field(init=False, repr=False)
    _b: np.ndarray = field(init=False, repr=False)
    _A_inv: np.ndarray | None = field(init=False, repr=False, default=None)
    _n_real: np.ndarray = field(init=False, repr=False)
    _n_pseudo: np.ndarray = field(init=False, repr=False)
    _pseudo_mass: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        cfg = self.config
        arms = [init_arm(cfg) for _ in range(cfg.num_arms)]
        self._A = np.stack([a.A for a in arms])
        self._b = np.stack([a.b for a in arms])
        if cfg.inverse_mode == "sherman_morrison":
            self._A_inv = np.stack([np.eye(cfg.dim) / cfg.lambda_reg for _ in arms])
        self._n_real = np.zeros(cfg.num_arms, dtype=np.int64)
        self._n_pseudo = np.zeros(cfg.num_arms, dtype=np.int64)
        self._pseudo_mass = np.zeros(cfg.num_arms)

    @property
    def num_arms(self) -> int:
        return self.config.num_arms

    def _check_arm(self, arm: int) -> None:
        if not 0 <= arm < self.config.num_arms:
            raise IndexError(f"arm {arm} out of range [0, {self.config.num_arms})")

    def _check_context(self, x) -> np.ndarray:
        x = _as_context(x, self.config.dim)
        if self.expect_bias and x[-1] != 1.0:
            raise ValueError("context is not bias-augmented (last entry != 1)")
        return x

    def arm_state(self, arm: int) -> ArmState:
        """Copy of the arm's statistics, safe to hold across further updates."""
        self._check_arm(arm)
        return ArmState(
            A=self._A[arm].copy(),
            b=self._b[arm].copy(),
            n_real=int(self._n_real[arm]),
            n_pseudo=int(self._n_pseudo[arm]),
            pseudo_mass=float(self._pseudo_mass[arm]),
        )

    def update(self, arm: int, x, reward: float, weight: float = 1.0) -> None:
        """Apply one weighted observation: A += w x x', b += w r x."""
        self._check_arm(arm)
        x = self._check_context(x)
        if not np.isfinite(reward):
            raise ValueError(f"reward must be finite, got {reward}")
        if not 0.0 < weight <= 1.0:
            raise ValueError(f"weight must be in (0, 1], got {weight}")
        kernels.rank1_update(self._A[arm], self._b[arm], x, float(reward), float(weight))
        if self._A_inv is not None:
            kernels.sherman_morrison(self._A_inv[arm], x, float(weight))
        if weight == 1.0:
            self._n_real[arm] += 1
        else:
            self._n_pseudo[arm] += 1
            self._pseudo_mass[arm] += weight

    def theta_hat(self, arm: int) -> np.ndarray:
        """Point estimate A^{-1} b for the arm."""
        self._check_arm(arm)
        if self._A_inv is not None:
            return self._A_inv[arm] @ self._b[arm]
        return kernels.solve_spd(self._A[arm], self._b[arm])

    def ucb_score(self, arm: int, x, alpha: float | None = None) -> float:
        """Index x'theta_hat + alpha * sqrt(x'A^{-1}x) for one arm."""
        self._check_arm(arm)
        x = self._check_context(x)
        a = self.config.alpha if alpha is None else alpha
        if a < 0:
            raise ValueError(f"alpha must be >= 0, got {a}")
        sl = slice(arm, arm + 1)
        if self._A_inv is not None:
            scores = kernels.ucb_scores_inv(self._A_inv[sl], self._b[sl], x[None, :], a)
        else:
            scores = kernels.ucb_scores(np.ascontiguousarray(self._A[sl]), self._b[sl], x[None, :], a)
        return float(scores[0])

    def exploration_bonus(self, arm: int, x) -> float:
        """sqrt(x'A^{-1}x); shrinks monotonically as observations accumulate."""
        self._check_arm(arm)
        x = self._check_context(x)
        if self._A_inv is not None:
            z = self._A_inv[arm] @ x
        else:
            z = kernels.solve_spd(self._A[arm], x)
        return float(np.sqrt(x @ z))

    def ucb_scores(self, contexts) -> np.ndarray:
        """Scores for all arms; ``contexts`` is (K, d), one row per arm."""
        X = np.asarray(contexts, dtype=np.float64)
        if X.shape != (self.config.num_arms, self.config.dim):
            raise ValueError(
                f"contexts must have shape {(self.config.num_arms, self.config.dim)}, got {X.shape}"
            )
        for k in range(self.config.num_arms):
            self._check_context(X[k])
        if self._A_inv is not None:
            return kernels.ucb_scores_inv(self._A_inv, self._b, X, self.config.alpha)
        return kernels.ucb_scores(self._A, self._b, X, self.config.alpha)

    def select_arm(self, contexts) -> int:
        """Argmax of the UCB scores; ties broken by lowest arm index."""
        return int(np.argmax(self.ucb_scores(contexts)))
