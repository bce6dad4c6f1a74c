"""Pseudo-observation weight schedules.

A schedule maps (round index, calibration error) to an injection weight in
[0, 1]. Round indices are 0-based: the first round is t = 0 and time-decayed
schedules evaluate to lambda_w there. Schedules are registered by name so run
configs can select them as plain JSON.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_REGISTRY: dict[str, type] = {}


def register(name: str):
    def wrap(cls):
        cls.name = name
        _REGISTRY[name] = cls
        return cls

    return wrap


def available_schedules() -> list[str]:
    return sorted(_REGISTRY)


def _check_lambda_w(lambda_w: float) -> None:
    if not 0.0 <= lambda_w < 1.0:
        raise ValueError(f"lambda_w must be in [0, 1), got {lambda_w}")


def _check_tau(tau: float) -> None:
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")


def _check_t(t: int) -> None:
    if t < 0:
        raise ValueError(f"round index must be >= 0, got {t}")


class WeightSchedule:
    """Base class; subclasses implement weight(t, ema_error)."""

    name = "base"
    uses_calibration = False

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        raise NotImplementedError

    def __call__(self, t: int, ema_error: float = 0.0) -> float:
        return self.weight(t, ema_error)


@register("zero")
@dataclass
class ZeroSchedule(WeightSchedule):
    """Always 0: the policy never sees pseudo-observations."""

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        return 0.0


@register("constant")
@dataclass
class ConstantSchedule(WeightSchedule):
    lambda_w: float = 0.3

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        return self.lambda_w


@register("inverse")
@dataclass
class InverseSchedule(WeightSchedule):
    """lambda_w * tau / (t + tau)."""

    lambda_w: float = 0.3
    tau: float = 25.0

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)
        _check_tau(self.tau)

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        # grouped to match PowerSchedule at a = 1 bit for bit
        return self.lambda_w * (self.tau / (t + self.tau))


@register("power")
@dataclass
class PowerSchedule(WeightSchedule):
    """lambda_w * (tau / (t + tau))^a; a = 1 recovers the inverse schedule."""

    lambda_w: float = 0.3
    tau: float = 25.0
    a: float = 1.0

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)
        _check_tau(self.tau)
        if self.a <= 0:
            raise ValueError(f"a must be > 0, got {self.a}")

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        return self.lambda_w * (self.tau / (t + self.tau)) ** self.a


@register("exponential")
@dataclass
class ExponentialSchedule(WeightSchedule):
    """lambda_w * exp(-t / tau)."""

    lambda_w: float = 0.3
    tau: float = 25.0

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)
        _check_tau(self.tau)

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        return self.lambda_w * math.exp(-t / self.tau)


def _check_eta(eta: float) -> None:
    if eta < 0:
        raise ValueError(f"eta must be >= 0, got {eta}")


def _check_ema(ema_error: float) -> None:
    if ema_error < 0:
        raise ValueError(f"ema_error must be >= 0, got {ema_error}")


@register("calibration_gated")
@dataclass
class CalibrationGatedSchedule(WeightSchedule):
    """lambda_w * exp(-eta * ema_error); time-independent, error-driven."""

    lambda_w: float = 0.3
    eta: float = 10.0
    uses_calibration = True

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)
        _check_eta(self.eta)

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        _check_ema(ema_error)
        return self.lambda_w * math.exp(-self.eta * ema_error)


_HYBRID_PROFILES = ("inverse", "power", "exponential")


@register("hybrid")
@dataclass
class HybridSchedule(WeightSchedule):
    """lambda_w * g(t) * exp(-eta * ema_error).

    g is the unit-scale time profile of one of the time-decayed schedules
    (g(0) = 1), so the calibration gate multiplies rather than stacks another
    lambda_w factor.
    """

    lambda_w: float = 0.3
    eta: float = 10.0
    profile: str = "exponential"
    tau: float = 25.0
    a: float = 1.0
    uses_calibration = True

    def __post_init__(self) -> None:
        _check_lambda_w(self.lambda_w)
        _check_eta(self.eta)
        if self.profile not in _HYBRID_PROFILES:
            raise ValueError(f"profile must be one of {_HYBRID_PROFILES}, got {self.profile!r}")
        _check_tau(self.tau)
        if self.profile == "power" and self.a <= 0:
            raise ValueError(f"a must be > 0, got {self.a}")

    def _g(self, t: int) -> float:
        if self.profile == "inverse":
            return self.tau / (t + self.tau)
        if self.profile == "power":
            return (self.tau / (t + self.tau)) ** self.a
        return math.exp(-t / self.tau)

    def weight(self, t: int, ema_error: float = 0.0) -> float:
        _check_t(t)
        _check_ema(ema_error)
        return self.lambda_w * self._g(t) * math.exp(-self.eta * ema_error)


def schedule_from_config(spec: dict) -> WeightSchedule:
    """Build a schedule from {'name': ..., <params>}; unknown keys rejected."""
    if "name" not in spec:
        raise ValueError("schedule config needs a 'name' key")
    params = dict(spec)
    name = params.pop("name")
    if name not in _REGISTRY:
        raise ValueError(f"unknown schedule {name!r}; available: {available_schedules()}")
    try:
        return _REGISTRY[name](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for schedule {name!r}: {exc}") from None
