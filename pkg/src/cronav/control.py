"""
Saturated velocity-feedback control and the Lyapunov bound calculators.

The controller tracks the guidance velocity evaluated at the *estimated*
position with the *estimated* velocity; every command is clamped per axis at
the thrust bound ``U``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConfigError, InfeasibleBoundError

GuidanceFn = Callable[[np.ndarray], np.ndarray]

# (sqrt(3) + 3) / 6, the rotation-coupling coefficient of the bound
_COUPLING = (math.sqrt(3.0) + 3.0) / 6.0


@dataclass(frozen=True)
class ControllerConfig:
    """Feedback gain K [1/s], thrust bound U and disturbance bound W [m/s^2],
    velocity-error bound D and estimation-factor bound E [m/s]."""

    K: float
    U: float = 1e-5
    W: float = 1e-7
    D: float = 5e-3
    E: float = 5e-4

    def __post_init__(self):
        if not self.K > 0:
            raise ConfigError(f"K must be > 0, got {self.K}")
        if not self.U > 0:
            raise ConfigError(f"U must be > 0, got {self.U}")
        if not self.W >= 0:
            raise ConfigError(f"W must be >= 0, got {self.W}")
        if not 0 <= self.E < self.D:
            raise ConfigError(f"need 0 <= E < D, got E={self.E}, D={self.D}")


class GainCondition(NamedTuple):
    holds: bool
    margin: float  # lhs - rhs
    lhs: float
    rhs: float


def control_input(v_hat, p_hat, cfg: ControllerConfig, guidance: GuidanceFn) -> np.ndarray:
    """``-clamp(K (v_hat - v_des(p_hat)), +/-U)`` per axis."""
    err = np.asarray(v_hat, dtype=float) - guidance(np.asarray(p_hat, dtype=float))
    return -np.clip(cfg.K * err, -cfg.U, cfg.U)


def adaptive_control_input(v_hat, p_hat, delta: float, cfg: ControllerConfig, guidance: GuidanceFn) -> np.ndarray:
    """Control with the gain scaled to ``delta * K``, still saturated."""
    if delta == 1.0:
        return control_input(v_hat, p_hat, cfg, guidance)
    err = np.asarray(v_hat, dtype=float) - guidance(np.asarray(p_hat, dtype=float))
    return -np.clip(delta * cfg.K * err, -cfg.U, cfg.U)


def max_velocity_error_bound(U: float, W: float, omega: float) -> float:
    """Largest velocity error for which the saturated loop still decreases V."""
    if not U > W:
        raise InfeasibleBoundError(f"thrust bound U={U} must exceed disturbance bound W={W}")
    return 6.0 * (U - W) / (omega * (3.0 + math.sqrt(3.0)))


def gain_condition_sides(K: float, D: float, E: float, W: float, omega: float) -> tuple[float, float]:
    lhs = K * (D * D - D * E)
    rhs = _COUPLING * omega * D * D + 0.5 * W * D
    return lhs, rhs


def check_gain_condition(cfg: ControllerConfig, omega: float, K: float | None = None) -> GainCondition:
    """Evaluate ``K (D^2 - D E) > (sqrt(3)+3) omega D^2 / 6 + W D / 2``.

    ``K`` overrides ``cfg.K`` (used to check the smallest adapted gain).
    A structurally violated premise ``E >= D`` reports ``holds=False``.
    """
    if not cfg.D > 0:
        raise ConfigError(f"D must be > 0, got {cfg.D}")
    k = cfg.K if K is None else K
    lhs, rhs = gain_condition_sides(k, cfg.D, cfg.E, cfg.W, omega)
    holds = (0 <= cfg.E < cfg.D) and lhs > rhs
    return GainCondition(holds, lhs - rhs, lhs, rhs)


def min_feedback_gain(D: float, E: float, W: float, omega: float) -> float:
    """Infimum of the gains satisfying the closed-loop condition."""
    if not 0 <= E < D:
        raise ConfigError(f"need 0 <= E < D, got E={E}, D={D}")
    _, rhs = gain_condition_sides(1.0, D, E, W, omega)
    return rhs / (D * D - D * E)


def design_controller(
    U: float,
    W: float,
    omega: float,
    *,
    delta_min: float = 1.0,
    margin: float = 2.0,
    d_fraction: float = 0.5,
    e_fraction: float = 0.1,
) -> ControllerConfig:
    """Default controller: D = d_fraction * D_bar, E = e_fraction * D, and K
    chosen so that even ``delta_min * K`` clears the condition by ``margin``."""
    D = d_fraction * max_velocity_error_bound(U, W, omega)
    E = e_fraction * D
    K = margin * min_feedback_gain(D, E, W, omega) / delta_min
    return ControllerConfig(K=K, U=U, W=W, D=D, E=E)


def validate_adaptive_gain(cfg: ControllerConfig, delta_min: float, omega: float) -> GainCondition:
    """Setup-time check that the smallest adapted gain keeps the loop stable."""
    cond = check_gain_condition(cfg, omega, K=delta_min * cfg.K)
    if not cond.holds:
        raise ConfigError(
            f"delta_min*K = {delta_min * cfg.K:.3e} violates the closed-loop gain condition "
            f"(margin {cond.margin:.3e})"
        )
    return cond


def lyapunov_value(v, p, guidance: GuidanceFn) -> float:
    err = np.asarray(v, dtype=float) - guidance(np.asarray(p, dtype=float))
    return 0.5 * float(err @ err)
