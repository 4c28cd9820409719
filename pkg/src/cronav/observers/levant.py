"""
Levant-type extended state observer.

Extended state ``xi = [p, v, w_d, dw_d/dt]`` (four stacked 3-vectors).  The
output-error injections are fractional powers of the position error with the
gain product ``k4 * L`` raised to 1/4, 2/4, 3/4 and 1; the adaptive factor
``delta`` multiplies that product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dynamics import cw_matrices, rk4_transition
from ..errors import ConfigError

COEFFICIENTS = (8.6, 21.0, 16.25, 1.0)
_EXPONENTS = (0.75, 0.5, 0.25, 0.0)


@dataclass(frozen=True)
class LevantParams:
    L_lev: float
    k4: float
    coefficients: tuple = COEFFICIENTS

    def __post_init__(self):
        if not (self.k4 > self.L_lev > 0):
            raise ConfigError(f"need k4 > L > 0, got k4={self.k4}, L={self.L_lev}")
        if len(self.coefficients) != 4 or any(c <= 0 for c in self.coefficients):
            raise ConfigError(f"need four positive coefficients, got {self.coefficients}")

    @property
    def gain(self) -> float:
        return self.k4 * self.L_lev

    def scaled(self, factor: float) -> "LevantParams":
        """Same k4/L ratio with the product scaled by ``factor``."""
        s = np.sqrt(factor)
        return LevantParams(self.L_lev * s, self.k4 * s, self.coefficients)


@dataclass
class LevantState:
    xi_hat: np.ndarray  # (12,) = [p, v, w_d, w_d_dot]
    params: LevantParams

    def __post_init__(self):
        self.xi_hat = np.asarray(self.xi_hat, dtype=float).reshape(12)


def extended_matrices(omega: float) -> tuple[np.ndarray, np.ndarray]:
    """Linear part of the extended system and its input matrix."""
    A, _ = cw_matrices(omega)
    Ax = np.zeros((12, 12))
    Ax[:6, :6] = A
    Ax[3:6, 6:9] = np.eye(3)
    Ax[6:9, 9:12] = np.eye(3)
    Bx = np.zeros((12, 3))
    Bx[3:6, :] = np.eye(3)
    return Ax, Bx


def injection(e: np.ndarray, gain: float, coefficients=COEFFICIENTS) -> np.ndarray:
    """Stacked output-error injections (12,), to be subtracted from the rates.

    Component-wise ``c_i gain^(i/4) |e|^(1 - i/4) sign(e)``, with sign(0) = 0.
    """
    sgn = np.sign(e)
    ae = np.abs(e)
    out = np.empty(12)
    for i, (c, ex) in enumerate(zip(coefficients, _EXPONENTS)):
        g = gain ** ((i + 1) / 4.0)
        out[3 * i:3 * i + 3] = c * g * (ae**ex if ex else 1.0) * sgn
    return out


def levant_step(state: LevantState, y_meas, u, delta: float, omega: float, dt: float) -> LevantState:
    """One step with the injections held over the step and the linear part
    propagated by the RK4 map of the extended system."""
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    Ax, Bx = extended_matrices(omega)
    Phi, Psi = rk4_transition(Ax, dt)
    xi = state.xi_hat
    e = xi[:3] - np.asarray(y_meas, dtype=float)
    inj = injection(e, delta * state.params.gain, state.params.coefficients)
    forcing = Bx @ np.asarray(u, dtype=float) - inj
    return LevantState(Phi @ xi + Psi @ forcing, state.params)


class LevantObserver:
    """Sequential Levant observer (see :class:`LuenbergerObserver` for the protocol)."""

    kind = "levant"

    def __init__(self, params: LevantParams, omega: float, dt: float, x0, w0=None):
        if not dt > 0:
            raise ConfigError(f"dt must be > 0, got {dt}")
        self.params = params
        self.dt = dt
        Ax, Bx = extended_matrices(omega)
        self._Phi, self._Psi = rk4_transition(Ax, dt)
        self._PsiB = self._Psi @ Bx
        self.xi = np.zeros(12)
        self.xi[:6] = np.asarray(x0, dtype=float).reshape(6)
        if w0 is not None:
            self.xi[6:9] = w0
        self._e = np.zeros(3)

    @property
    def p_hat(self) -> np.ndarray:
        return self.xi[:3]

    @property
    def v_hat(self) -> np.ndarray:
        return self.xi[3:6]

    @property
    def w_hat(self) -> np.ndarray:
        return self.xi[6:9]

    @property
    def xhat(self) -> np.ndarray:
        return self.xi[:6]

    def correct(self, y) -> None:
        self._e = self.xi[:3] - y

    def predict(self, u, delta: float = 1.0) -> None:
        inj = injection(self._e, delta * self.params.gain, self.params.coefficients)
        self.xi = self._Phi @ self.xi + self._PsiB @ u - self._Psi @ inj
