"""Discrete Kalman filter on the zero-order-hold CW model (baseline comparator)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..dynamics import cw_matrices
from ..errors import ConfigError
from .design import C_POS


def zoh_discretize(omega: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """``(F, G)`` with ``x+ = F x + G u`` for u held over ``dt``."""
    A, B = cw_matrices(omega)
    M = np.zeros((9, 9))
    M[:6, :6] = A
    M[:6, 6:] = B
    E = expm(M * dt)
    return E[:6, :6], E[:6, 6:]


def process_covariance(G: np.ndarray, accel_std: float) -> np.ndarray:
    """Covariance of a per-axis white acceleration held over one step."""
    return accel_std**2 * (G @ G.T)


@dataclass
class KalmanState:
    xhat: np.ndarray
    P: np.ndarray
    Qk: np.ndarray
    Rk: np.ndarray

    def __post_init__(self):
        self.xhat = np.asarray(self.xhat, dtype=float).reshape(6)
        self.P = np.asarray(self.P, dtype=float)
        self.Rk = np.asarray(self.Rk, dtype=float)
        if np.linalg.matrix_rank(self.Rk) < self.Rk.shape[0]:
            raise ConfigError("measurement covariance Rk is singular")


def kalman_update(state: KalmanState, y_meas) -> KalmanState:
    """Measurement update in Joseph form."""
    H = C_POS
    P = state.P
    S = H @ P @ H.T + state.Rk
    K = np.linalg.solve(S, H @ P).T
    x = state.xhat + K @ (np.asarray(y_meas, dtype=float) - H @ state.xhat)
    IKH = np.eye(6) - K @ H
    P = IKH @ P @ IKH.T + K @ state.Rk @ K.T
    return KalmanState(x, 0.5 * (P + P.T), state.Qk, state.Rk)


def kalman_predict(state: KalmanState, u, F: np.ndarray, G: np.ndarray) -> KalmanState:
    x = F @ state.xhat + G @ np.asarray(u, dtype=float)
    P = F @ state.P @ F.T + state.Qk
    return KalmanState(x, 0.5 * (P + P.T), state.Qk, state.Rk)


def kalman_step(state: KalmanState, y_meas, u, omega: float, dt: float) -> KalmanState:
    """Update with ``y_meas`` at the current sample, then predict to the next."""
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    F, G = zoh_discretize(omega, dt)
    return kalman_predict(kalman_update(state, y_meas), u, F, G)


def make_kalman_state(x0, omega: float, dt: float, accel_std: float, meas_std: float,
                      p0_pos_std: float, p0_vel_std: float) -> KalmanState:
    if not meas_std > 0:
        raise ConfigError("Kalman filter needs a positive measurement noise level")
    _, G = zoh_discretize(omega, dt)
    P0 = np.diag([p0_pos_std**2] * 3 + [p0_vel_std**2] * 3)
    return KalmanState(x0, P0, process_covariance(G, accel_std), meas_std**2 * np.eye(3))


class KalmanObserver:
    """Sequential Kalman filter; ``correct`` updates, ``predict`` propagates.

    The adaptive factor is accepted for interface symmetry and ignored.
    """

    kind = "kalman"

    def __init__(self, state: KalmanState, omega: float, dt: float):
        self.state = state
        self._F, self._G = zoh_discretize(omega, dt)

    @property
    def xhat(self) -> np.ndarray:
        return self.state.xhat

    @property
    def p_hat(self) -> np.ndarray:
        return self.state.xhat[:3]

    @property
    def v_hat(self) -> np.ndarray:
        return self.state.xhat[3:]

    @property
    def w_hat(self) -> None:
        return None

    def correct(self, y) -> None:
        self.state = kalman_update(self.state, y)

    def predict(self, u, delta: float = 1.0) -> None:
        self.state = kalman_predict(self.state, u, self._F, self._G)
