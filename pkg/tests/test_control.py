import math

import numpy as np
import pytest

from cronav.control import (
    ControllerConfig,
    adaptive_control_input,
    check_gain_condition,
    control_input,
    design_controller,
    gain_condition_sides,
    lyapunov_value,
    max_velocity_error_bound,
    min_feedback_gain,
    validate_adaptive_gain,
)
from cronav.errors import ConfigError, InfeasibleBoundError


def test_velocity_bound_value(omega):
    d = max_velocity_error_bound(1e-5, 1e-7, omega)
    assert d == pytest.approx(6 * (1e-5 - 1e-7) / (omega * (3 + math.sqrt(3))), rel=1e-15)
    assert d == pytest.approx(1.134e-2, rel=1e-3)
    with pytest.raises(InfeasibleBoundError):
        max_velocity_error_bound(1e-7, 1e-7, omega)


def test_min_gain_is_threshold(omega):
    D, E, W = 5e-3, 5e-4, 1e-7
    k = min_feedback_gain(D, E, W, omega)
    lhs, rhs = gain_condition_sides(k, D, E, W, omega)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    cfg = ControllerConfig(K=1.0, W=W, D=D, E=E)
    assert check_gain_condition(cfg, omega, K=k * 1.001).holds
    assert not check_gain_condition(cfg, omega, K=k * 0.999).holds


def test_gain_condition_requires_e_below_d():
    with pytest.raises(ConfigError):
        ControllerConfig(K=1.0, D=1e-3, E=1e-3)
    with pytest.raises(ConfigError):
        min_feedback_gain(1e-3, 2e-3, 0.0, 1e-3)


def test_design_controller_clears_condition_at_delta_min(omega):
    cfg = design_controller(1e-5, 1e-7, omega, delta_min=1e-3, margin=2.0)
    cond = validate_adaptive_gain(cfg, 1e-3, omega)
    assert cond.holds and cond.lhs == pytest.approx(2 * cond.rhs)
    with pytest.raises(ConfigError):
        validate_adaptive_gain(cfg, 1e-4, omega)


def test_control_saturates_per_axis():
    cfg = ControllerConfig(K=10.0, U=1e-5)
    u = control_input([1.0, -1e-7, 0.0], [0, 0, 0], cfg, lambda p: np.zeros(3))
    np.testing.assert_allclose(u, [-1e-5, 1e-6, 0.0])
    ua = adaptive_control_input([1e-7, 0, 0], [0, 0, 0], 0.1, cfg, lambda p: np.zeros(3))
    np.testing.assert_allclose(ua, [-1e-7, 0, 0])


def test_lyapunov_value():
    assert lyapunov_value([3.0, 4.0, 0.0], [0, 0, 0], lambda p: np.zeros(3)) == 12.5
