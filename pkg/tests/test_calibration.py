"""EMA calibration tracker: closed forms, fixed point, and steady-state band."""
import math

import numpy as np
import pytest

from calbandit.calibration import EmaTracker


def test_fresh_tracker_reads_zero():
    t = EmaTracker()
    assert t.current_error() == 0.0
    assert t.steps == 0
    assert t.beta == 0.95


def test_zero_error_keeps_zero():
    t = EmaTracker(beta=0.95)
    t.record(1.0, 1.0)
    assert t.current_error() == 0.0
    assert t.steps == 1


def test_single_step_hand_value():
    t = EmaTracker(beta=0.95)
    t.record(0.8, 1.0)
    # e = 0.04, E = 0.95 * 0 + 0.05 * 0.04
    assert t.current_error() == pytest.approx(0.002, abs=1e-15)


def test_two_step_recursion():
    t = EmaTracker(beta=0.95)
    t.record(0.8, 1.0)
    t.record(0.5, 1.0)  # e2 = 0.25
    assert t.current_error() == pytest.approx(0.002 * 0.95 + 0.05 * 0.25, abs=1e-15)


def test_constant_error_fixed_point():
    t = EmaTracker(beta=0.95)
    c = 0.04  # |pred - reward| = 0.2 every round
    for _ in range(300):
        t.record(1.2, 1.0)
    assert abs(t.current_error() - c) < 1e-6
    # and the convergence is monotone from below
    t2 = EmaTracker(beta=0.95)
    prev = -1.0
    for _ in range(50):
        t2.record(1.2, 1.0)
        cur = t2.current_error()
        assert cur > prev
        prev = cur
    assert prev < c


def test_closed_form_weighted_sum():
    rng = np.random.default_rng(7)
    beta = 0.95
    t = EmaTracker(beta=beta)
    errors = []
    for _ in range(1000):
        pred = float(rng.uniform(-2, 2))
        reward = float(rng.uniform(-2, 2))
        errors.append((pred - reward) ** 2)
        t.record(pred, reward)
    n = len(errors)
    want = sum(beta ** (n - 1 - i) * (1 - beta) * e for i, e in enumerate(errors))
    assert abs(t.current_error() - want) < 1e-10


def test_bounded_by_max_error():
    rng = np.random.default_rng(11)
    t = EmaTracker(beta=0.9)
    emax = 0.0
    for _ in range(500):
        pred = float(rng.uniform(-5, 5))
        reward = float(rng.uniform(-5, 5))
        emax = max(emax, (pred - reward) ** 2)
        t.record(pred, reward)
        assert 0.0 <= t.current_error() <= emax


def test_beta_zero_tracks_last_error():
    t = EmaTracker(beta=0.0)
    t.record(0.0, 1.0)
    assert t.current_error() == 1.0
    t.record(0.5, 1.0)
    assert t.current_error() == 0.25
    t.record(1.0, 1.0)
    assert t.current_error() == 0.0


def test_steady_state_band_for_modest_errors():
    # |prediction - reward| held in [0.2, 0.3] -> E settles inside [0.04, 0.09]
    rng = np.random.default_rng(3)
    t = EmaTracker(beta=0.95)
    for _ in range(400):
        gap = float(rng.uniform(0.2, 0.3))
        t.record(1.0 + gap, 1.0)
    for _ in range(200):
        gap = float(rng.uniform(0.2, 0.3))
        t.record(1.0 + gap, 1.0)
        assert 0.04 <= t.current_error() <= 0.09


def test_record_returns_new_value():
    t = EmaTracker(beta=0.95)
    out = t.record(0.8, 1.0)
    assert out == t.current_error()


def test_reset():
    t = EmaTracker(beta=0.95)
    t.record(0.0, 1.0)
    t.reset()
    assert t.current_error() == 0.0
    assert t.steps == 0


def test_beta_validation():
    with pytest.raises(ValueError):
        EmaTracker(beta=1.0)
    with pytest.raises(ValueError):
        EmaTracker(beta=-0.01)
    EmaTracker(beta=0.0)  # boundary is allowed


def test_nonfinite_inputs_rejected_and_state_unchanged():
    t = EmaTracker(beta=0.95)
    t.record(0.8, 1.0)
    before = (t.current_error(), t.steps)
    for pred, reward in ((math.nan, 1.0), (1.0, math.inf), (-math.inf, 0.0)):
        with pytest.raises(ValueError):
            t.record(pred, reward)
        assert (t.current_error(), t.steps) == before


def test_raw_scale_errors_allowed():
    # mushroom-scale mistakes are legal inputs: e can reach (5 - (-35))^2
    t = EmaTracker(beta=0.95)
    t.record(5.0, -35.0)
    assert t.current_error() == pytest.approx(0.05 * 1600.0, rel=1e-12)
