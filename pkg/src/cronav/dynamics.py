"""
Clohessy-Wiltshire relative dynamics in the target LVLH frame.

Frame convention: x along the orbital velocity, z towards the Earth centre,
y completing the triad.  State ordering everywhere is ``[x, y, z, vx, vy, vz]``.

The truth model integrates the CW equations with a fixed-step RK4 scheme.
Because the CW system is linear and the forcing (thrust, disturbance and
process noise) is held constant over a step, one RK4 step collapses to an
affine map ``x+ = Phi x + Psi f``; :func:`rk4_transition` builds that map once
per ``(omega, dt)`` pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError

MU_EARTH = 3.986004418e14  # m^3/s^2
R_ORBIT_500KM = 6_878_137.0  # m

NOISE_INTERPRETATIONS = ("variance", "std")


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ConfigError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be finite, got {arr}")
    return arr


def noise_std(level: float, interpretation: str) -> float:
    """Standard deviation implied by a configured noise level.

    The published noise numbers are labelled as variances; ``"std"`` reads the
    same number as a standard deviation instead.
    """
    if level < 0:
        raise ConfigError(f"noise level must be >= 0, got {level}")
    if interpretation == "variance":
        return float(np.sqrt(level))
    if interpretation == "std":
        return float(level)
    raise ConfigError(
        f"noise interpretation must be one of {NOISE_INTERPRETATIONS}, got {interpretation!r}"
    )


@dataclass
class RelativeState:
    """Chaser position [m] and velocity [m/s] relative to the target, LVLH."""

    p: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.p = _vec3(self.p, "p")
        self.v = _vec3(self.v, "v")

    @classmethod
    def from_vector(cls, x) -> "RelativeState":
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.v])


@dataclass(frozen=True)
class OrbitParams:
    """Circular target orbit; the angular rate is always derived, never stored."""

    mu: float = MU_EARTH
    r_o: float = R_ORBIT_500KM

    def __post_init__(self):
        if not (self.r_o > 0 and self.mu > 0):
            raise ConfigError(f"orbit needs mu > 0 and r_o > 0, got mu={self.mu}, r_o={self.r_o}")

    @property
    def omega(self) -> float:
        return float(np.sqrt(self.mu / self.r_o**3))

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega


@dataclass(frozen=True)
class CroParams:
    """Circular relative orbit: radius R [m], phase phi [rad], LGVF vertical gain lam."""

    R: float = 100.0
    phi: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigError(f"CRO radius must be > 0, got {self.R}")
        if not self.phi >= 0:
            raise ConfigError(f"CRO phase must be >= 0, got {self.phi}")
        if not self.lam > 0:
            raise ConfigError(f"LGVF vertical gain must be > 0, got {self.lam}")


@dataclass(frozen=True)
class DisturbanceModel:
    """Constant along-track acceleration plus white acceleration noise."""

    d_ex: float = -1e-7
    sigma_pn: float = 1e-8
    interpretation: str = "variance"

    def __post_init__(self):
        noise_std(self.sigma_pn, self.interpretation)

    @property
    def std(self) -> float:
        return noise_std(self.sigma_pn, self.interpretation)


@dataclass(frozen=True)
class SensorModel:
    """Relative position sensor with additive white noise per axis."""

    sigma_y: float = 1e-2
    interpretation: str = "variance"

    def __post_init__(self):
        noise_std(self.sigma_y, self.interpretation)

    @property
    def std(self) -> float:
        return noise_std(self.sigma_y, self.interpretation)


@dataclass
class ActuatorState:
    """First-order thruster lag with a per-axis clamp at +/- u_max."""

    tau: float = 1.0
    u_max: float = 1e-5
    u_applied: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigError(f"actuator time constant must be > 0, got {self.tau}")
        if not self.u_max > 0:
            raise ConfigError(f"actuator bound must be > 0, got {self.u_max}")
        self.u_applied = _vec3(self.u_applied, "u_applied")

    def advance(self, u_cmd, dt: float) -> np.ndarray:
        """Move the filter output one step towards the saturated command.

        The explicit update is a convex combination for dt <= tau; a larger
        step jumps straight onto the target so the clamp is never exceeded.
        """
        target = np.clip(u_cmd, -self.u_max, self.u_max)
        alpha = min(dt / self.tau, 1.0)
        self.u_applied = self.u_applied + alpha * (target - self.u_applied)
        return self.u_applied


def cw_matrices(omega: float) -> tuple[np.ndarray, np.ndarray]:
    """State and input matrices of the CW equations (state [p, v], input accel)."""
    A = np.zeros((6, 6))
    A[:3, 3:] = np.eye(3)
    A[3, 5] = 2.0 * omega
    A[4, 1] = -(omega**2)
    A[5, 2] = 3.0 * omega**2
    A[5, 3] = -2.0 * omega
    B = np.zeros((6, 3))
    B[3:, :] = np.eye(3)
    return A, B


def rk4_transition(A: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Affine map of one classical RK4 step on ``x' = A x + f`` with f constant.

    Returns ``(Phi, Psi)`` with ``x+ = Phi @ x + Psi @ f``.
    """
    n = A.shape[0]
    M = A * dt
    I = np.eye(n)
    M2 = M @ M
    M3 = M2 @ M
    Phi = I + M + M2 / 2.0 + M3 / 6.0 + M3 @ M / 24.0
    Psi = dt * (I + M / 2.0 + M2 / 6.0 + M3 / 24.0)
    return Phi, Psi


@lru_cache(maxsize=64)
def _cw_step(omega: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    A, B = cw_matrices(omega)
    Phi, Psi = rk4_transition(A, dt)
    Phi.setflags(write=False)
    PsiB = Psi @ B
    PsiB.setflags(write=False)
    return Phi, PsiB


def cw_derivative(state: RelativeState, u, w, orbit: OrbitParams) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side of the CW equations: returns ``(v, a)``."""
    u = _vec3(u, "u")
    w = _vec3(w, "w")
    om = orbit.omega
    p, v = state.p, state.v
    a = np.array([
        2.0 * om * v[2],
        -(om**2) * p[1],
        3.0 * om**2 * p[2] - 2.0 * om * v[0],
    ]) + u + w
    return v.copy(), a


def cro_reference(t: float, orbit: OrbitParams, cro: CroParams) -> RelativeState:
    """Closed-form circular relative orbit of radius R about the target."""
    if not np.isfinite(t):
        raise ConfigError(f"time must be finite, got {t}")
    om = orbit.omega
    th = om * t + cro.phi
    c, s = np.cos(th), np.sin(th)
    R = cro.R
    p = np.array([-R * c, 0.5 * np.sqrt(3.0) * R * s, 0.5 * R * s])
    v = np.array([R * om * s, 0.5 * np.sqrt(3.0) * R * om * c, 0.5 * R * om * c])
    return RelativeState(p, v)


def make_streams(seed: int) -> dict[str, np.random.Generator]:
    """Independent generators for process noise, sensor noise and dispersion.

    Streams are spawned from one ``SeedSequence`` in a fixed order, so adding
    draws to one stream never shifts another.
    """
    children = np.random.SeedSequence(seed).spawn(3)
    return {
        name: np.random.Generator(np.random.PCG64(ss))
        for name, ss in zip(("process", "sensor", "dispersion"), children)
    }


def sample_process_noise(dist: DisturbanceModel, rng: np.random.Generator, size=None) -> np.ndarray:
    shape = (3,) if size is None else (size, 3)
    std = dist.std
    if std == 0.0:
        return np.zeros(shape)
    return rng.normal(0.0, std, shape)


def step_truth(
    state: RelativeState,
    u_cmd,
    act: ActuatorState,
    dist: DisturbanceModel,
    orbit: OrbitParams,
    dt: float,
    rng: np.random.Generator | None,
) -> tuple[RelativeState, ActuatorState]:
    """Advance the actuator filter, then the truth state, by one step.

    Disturbance and process noise are held constant over the RK4 stages.
    ``act`` is updated in place and also returned.
    """
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    u_applied = act.advance(_vec3(u_cmd, "u_cmd"), dt)
    w = np.array([dist.d_ex, 0.0, 0.0])
    if rng is not None:
        w = w + sample_process_noise(dist, rng)
    Phi, PsiB = _cw_step(orbit.omega, dt)
    x = Phi @ state.as_vector() + PsiB @ (u_applied + w)
    return RelativeState.from_vector(x), act


def measure_position(state: RelativeState, sensor: SensorModel, rng: np.random.Generator | None) -> np.ndarray:
    """Noisy relative position measurement ``p + n``."""
    std = sensor.std
    if std == 0.0 or rng is None:
        return state.p.copy()
    return state.p + rng.normal(0.0, std, 3)
