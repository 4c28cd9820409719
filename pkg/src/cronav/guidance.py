"""
Lyapunov guidance vector field (LGVF) towards the circular relative orbit.

The field is defined in a trajectory frame whose x*-y* plane contains the CRO.
``Q`` rotates trajectory-frame vectors into LVLH, ``Q.T`` the other way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import CroParams
from .errors import ConfigError, GuidanceSingularityError

PRINTED_FRAME_ANGLE = math.pi / 3
# inclination of the CRO plane about x: direction (0, sqrt(3)/2, 1/2)
CRO_PLANE_ANGLE = math.pi / 6

DELTA_VARIANTS = ("printed", "squared")


@dataclass(frozen=True)
class GuidanceConfig:
    frame_angle: float = CRO_PLANE_ANGLE
    delta_variant: str = "printed"
    r_eps: float = 1e-6

    def __post_init__(self):
        if self.delta_variant not in DELTA_VARIANTS:
            raise ConfigError(f"delta_variant must be one of {DELTA_VARIANTS}, got {self.delta_variant!r}")
        if not self.r_eps > 0:
            raise ConfigError(f"r_eps must be > 0, got {self.r_eps}")


@dataclass
class GuidanceOutput:
    v_des: np.ndarray  # LVLH, m/s
    v_star: np.ndarray  # trajectory frame, m/s
    r_cyl: float
    delta_g: float


def frame_rotation(angle: float = CRO_PLANE_ANGLE) -> np.ndarray:
    """Rotation about the x-axis taking trajectory-frame vectors to LVLH."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def to_trajectory_frame(p, angle: float = CRO_PLANE_ANGLE) -> np.ndarray:
    return frame_rotation(angle).T @ np.asarray(p, dtype=float)


def lgvf_velocity(
    p_star,
    omega: float,
    cro: CroParams,
    *,
    angle: float = CRO_PLANE_ANGLE,
    delta_variant: str = "printed",
    r_eps: float = 1e-6,
) -> GuidanceOutput:
    """Evaluate the guidance field at a trajectory-frame position.

    Raises
    ------
    GuidanceSingularityError
        If the planar radius ``sqrt(x*^2 + y*^2)`` is below ``r_eps``.
    """
    xs, ys, zs = (float(c) for c in p_star)
    R = cro.R
    lam = cro.lam
    r = math.hypot(xs, ys)
    if r < r_eps:
        raise GuidanceSingularityError(f"planar radius {r:.3e} m below guard {r_eps:.1e} m")
    if delta_variant == "printed":
        vert = lam * zs**4
    elif delta_variant == "squared":
        vert = lam**2 * zs**4
    else:
        raise ConfigError(f"unknown delta_variant {delta_variant!r}")
    rr = r * r - R * R
    delta = omega * R / (r * math.sqrt((r * r + R * R) ** 2 + vert))
    v_star = np.array([
        delta * (-xs * rr + 2.0 * ys * r * R),
        delta * (-ys * rr - 2.0 * xs * r * R),
        delta * (-lam * zs * r),
    ])
    v_des = frame_rotation(angle) @ v_star
    return GuidanceOutput(v_des=v_des, v_star=v_star, r_cyl=r, delta_g=delta)


def linearized_vdes(p, omega: float) -> np.ndarray:
    """Near-CRO linearisation of the guidance field (valid for r ~ R, y ~ sqrt(3) z)."""
    x, _, z = p
    return np.array([2.0 * omega * z, -0.5 * math.sqrt(3.0) * omega * x, -0.5 * omega * x])


class Guidance:
    """Stateful wrapper holding the last valid output across singular points.

    ``consecutive_singular`` counts how many calls in a row fell back to the
    held value; the simulation aborts a run when it exceeds its limit.
    """

    def __init__(self, omega: float, cro: CroParams, config: GuidanceConfig | None = None):
        self.omega = omega
        self.cro = cro
        self.config = config or GuidanceConfig()
        self._Q = frame_rotation(self.config.frame_angle)
        self.last_valid = np.zeros(3)
        self.consecutive_singular = 0

    def evaluate(self, p) -> GuidanceOutput:
        cfg = self.config
        return lgvf_velocity(
            self._Q.T @ np.asarray(p, dtype=float),
            self.omega,
            self.cro,
            angle=cfg.frame_angle,
            delta_variant=cfg.delta_variant,
            r_eps=cfg.r_eps,
        )

    def __call__(self, p) -> np.ndarray:
        try:
            out = self.evaluate(p)
        except GuidanceSingularityError:
            self.consecutive_singular += 1
            return self.last_valid.copy()
        self.consecutive_singular = 0
        self.last_valid = out.v_des
        return out.v_des
