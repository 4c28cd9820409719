"""Luenberger observer on the CW model with position measurements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dynamics import cw_matrices, rk4_transition
from ..errors import ConfigError
from .design import LuenbergerDesign


@dataclass
class LuenbergerState:
    xhat: np.ndarray  # [p_hat, v_hat]

    def __post_init__(self):
        self.xhat = np.asarray(self.xhat, dtype=float).reshape(6)
        if not np.all(np.isfinite(self.xhat)):
            raise ConfigError("Luenberger state must be finite")


def luenberger_step(
    state: LuenbergerState,
    y_meas,
    u,
    design: LuenbergerDesign,
    delta: float,
    omega: float,
    dt: float,
) -> LuenbergerState:
    """One step of the observer with gains ``delta * L``.

    The output error ``p_hat - y`` is taken at the start of the step and held,
    like the input ``u``; the model part is propagated with the same RK4 map
    as the truth, so a zero error is preserved exactly.
    """
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    A, B = cw_matrices(omega)
    Phi, Psi = rk4_transition(A, dt)
    x = state.xhat
    e = x[:3] - np.asarray(y_meas, dtype=float)
    forcing = B @ np.asarray(u, dtype=float) - delta * (design.L @ e)
    return LuenbergerState(Phi @ x + Psi @ forcing)


class LuenbergerObserver:
    """Sequential observer object used by the simulation loop.

    ``correct(y)`` latches the output error of the current estimate,
    ``predict(u, delta)`` advances to the next sample.
    """

    kind = "luenberger"

    def __init__(self, design: LuenbergerDesign, omega: float, dt: float, x0):
        if not dt > 0:
            raise ConfigError(f"dt must be > 0, got {dt}")
        self.design = design
        self.dt = dt
        A, B = cw_matrices(omega)
        self._Phi, Psi = rk4_transition(A, dt)
        self._PsiB = Psi @ B
        self._PsiL = Psi @ design.L
        self.xhat = np.asarray(x0, dtype=float).reshape(6).copy()
        self._e = np.zeros(3)

    @property
    def p_hat(self) -> np.ndarray:
        return self.xhat[:3]

    @property
    def v_hat(self) -> np.ndarray:
        return self.xhat[3:]

    @property
    def w_hat(self) -> None:
        return None

    def correct(self, y) -> None:
        self._e = self.xhat[:3] - y

    def predict(self, u, delta: float = 1.0) -> None:
        self.xhat = self._Phi @ self.xhat + self._PsiB @ u - delta * (self._PsiL @ self._e)
