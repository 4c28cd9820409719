"""
Adaptive scaling of observer and controller gains.

``delta`` integrates ``G ||v_hat - v_lin(p_hat)||_inf - gamma delta`` with a
projection onto ``[delta_min, delta_max]``; ``gamma = G * Gamma`` makes
``Gamma`` the tracking-error level at which ``delta = 1`` is an equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigError
from ..guidance import linearized_vdes


@dataclass(frozen=True)
class AdaptiveState:
    delta: float
    G: float
    Gamma: float
    Delta_cap: float
    delta_min: float
    delta_max: float = 1.0

    def __post_init__(self):
        if not 0 < self.delta_min <= self.delta_max <= 1.0:
            raise ConfigError(f"need 0 < delta_min <= delta_max <= 1, got {self.delta_min}, {self.delta_max}")
        if not self.delta_min <= self.delta <= self.delta_max:
            raise ConfigError(f"delta={self.delta} outside [{self.delta_min}, {self.delta_max}]")
        if not (self.G > 0 and self.Gamma > 0 and self.Delta_cap > 0):
            raise ConfigError("G, Gamma and Delta_cap must be > 0")
        if self.gamma > self.Delta_cap:
            raise ConfigError(f"gamma = G*Gamma = {self.gamma:.3e} exceeds the decrease cap {self.Delta_cap:.3e}")

    @property
    def gamma(self) -> float:
        return self.G * self.Gamma


def tracking_error(v_hat, p_hat, omega: float) -> float:
    """``||v_hat - v_lin(p_hat)||_inf`` with the near-CRO linear field."""
    return float(np.max(np.abs(np.asarray(v_hat) - linearized_vdes(p_hat, omega))))


def raw_rate(adaptive: AdaptiveState, v_hat, p_hat, omega: float) -> float:
    return adaptive.G * tracking_error(v_hat, p_hat, omega) - adaptive.gamma * adaptive.delta


def project(rate: float, delta: float, lo: float, hi: float) -> float:
    """Zero the component of ``rate`` that would leave ``[lo, hi]``."""
    if delta >= hi and rate > 0:
        return 0.0
    if delta <= lo and rate < 0:
        return 0.0
    return rate


def adaptive_update(adaptive: AdaptiveState, v_hat, p_hat, omega: float, dt: float) -> AdaptiveState:
    """Explicit Euler step of the projected law."""
    a = adaptive
    rate = project(raw_rate(a, v_hat, p_hat, omega), a.delta, a.delta_min, a.delta_max)
    delta = min(max(a.delta + dt * rate, a.delta_min), a.delta_max)
    return replace(a, delta=delta)
