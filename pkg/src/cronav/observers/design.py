"""
Luenberger gain design and the spectrum of the estimation-error dynamics.

Two routes produce a :class:`LuenbergerDesign`:

* :func:`design_luenberger` -- per-axis second-order design from an overshoot
  and rise-time specification, CW coupling ignored (diagonal gains);
* :func:`place_luenberger` -- exact placement of the coupled 6x6 error
  dynamics on a repeated pair of real poles per axis.  The reactive preset
  uses poles {-1, -0.1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dynamics import cw_matrices
from ..errors import ConfigError

ZETA_VARIANTS = ("printed", "textbook")

REACTIVE_POLES = (-1.0, -0.1)
DEFAULT_HR_FACTOR = 1000.0

# position-selecting output matrix, one row per measured axis
C_POS = np.hstack([np.eye(3), np.zeros((3, 3))])


@dataclass
class LuenbergerDesign:
    """Observer gain matrix ``L`` (6x3) and the specification it came from.

    Rows 0-2 act on the position derivatives [1/s], rows 3-5 on the velocity
    derivatives [1/s^2].
    """

    L: np.ndarray
    zeta: float | None = None
    omega_n: float | None = None
    overshoot_spec: float | None = None
    rise_time_spec: float | None = None
    label: str = "custom"

    def __post_init__(self):
        self.L = np.asarray(self.L, dtype=float)
        if self.L.shape != (6, 3):
            raise ConfigError(f"Luenberger gain must be 6x3, got {self.L.shape}")

    @property
    def gains(self) -> np.ndarray:
        """Per-axis gains ``[L_x, L_y, L_z, L_vx, L_vy, L_vz]`` (diagonal part)."""
        return np.concatenate([np.diag(self.L[:3]), np.diag(self.L[3:])])

    def scaled(self, factor: float, label: str | None = None) -> "LuenbergerDesign":
        return LuenbergerDesign(
            self.L * factor,
            zeta=None,
            omega_n=None,
            overshoot_spec=self.overshoot_spec,
            rise_time_spec=self.rise_time_spec,
            label=label or f"{self.label}*{factor:g}",
        )


def damping_from_overshoot(overshoot: float, variant: str = "printed") -> float:
    """Damping ratio for a peak overshoot fraction.

    ``"printed"`` uses ``sqrt(pi + ln^2)`` in the denominator, ``"textbook"``
    the standard ``sqrt(pi^2 + ln^2)``.
    """
    if not 0 < overshoot < 1:
        raise ConfigError(f"overshoot must lie in (0, 1), got {overshoot}")
    ln = math.log(overshoot)
    if variant == "printed":
        return -ln / math.sqrt(math.pi + ln * ln)
    if variant == "textbook":
        return -ln / math.sqrt(math.pi**2 + ln * ln)
    raise ConfigError(f"zeta variant must be one of {ZETA_VARIANTS}, got {variant!r}")


def design_luenberger(overshoot: float, rise_time: float, variant: str = "printed") -> LuenbergerDesign:
    """Per-axis design: error polynomial ``s^2 + 2 zeta wn s + wn^2`` on every axis.

    With the position error injected in both rows, the position-row gain is
    ``2 zeta wn`` and the velocity-row gain ``wn^2``.
    """
    if not rise_time > 0:
        raise ConfigError(f"rise time must be > 0, got {rise_time}")
    zeta = damping_from_overshoot(overshoot, variant)
    if zeta >= 1.0:
        raise ConfigError(f"overshoot {overshoot} gives zeta={zeta:.4f} >= 1; rise-time formula undefined")
    wn = math.pi / (rise_time * math.sqrt(1.0 - zeta * zeta))
    L = np.vstack([2.0 * zeta * wn * np.eye(3), wn * wn * np.eye(3)])
    return LuenbergerDesign(
        L, zeta=zeta, omega_n=wn, overshoot_spec=overshoot, rise_time_spec=rise_time, label="spec"
    )


def place_luenberger(omega: float, poles=REACTIVE_POLES, label: str = "placed") -> LuenbergerDesign:
    """Gains making ``A - L C`` have each pole of ``poles`` with multiplicity 3.

    Writing the CW state matrix as ``[[0, I], [Om, Gam]]``, the choice
    ``L1 = Gam + a I`` and ``L2 = Om + b I + Gam^2 + a Gam`` turns the error
    characteristic matrix into ``(s^2 + a s + b) I``.
    """
    p1, p2 = (float(p) for p in poles)
    if np.iscomplexobj(poles) or p1 >= 0 or p2 >= 0:
        raise ConfigError(f"poles must be real and negative, got {poles}")
    a = -(p1 + p2)
    b = p1 * p2
    A, _ = cw_matrices(omega)
    Om = A[3:, :3]
    Gam = A[3:, 3:]
    I = np.eye(3)
    L1 = Gam + a * I
    L2 = Om + b * I + Gam @ Gam + a * Gam
    wn = math.sqrt(b)
    return LuenbergerDesign(np.vstack([L1, L2]), zeta=a / (2.0 * wn), omega_n=wn, label=label)


def reactive_design(omega: float) -> LuenbergerDesign:
    return place_luenberger(omega, REACTIVE_POLES, label="R")


def high_resolution_design(omega: float, factor: float = DEFAULT_HR_FACTOR) -> LuenbergerDesign:
    """Reactive gains scaled down by ``factor``."""
    if not factor > 0:
        raise ConfigError(f"HR factor must be > 0, got {factor}")
    return reactive_design(omega).scaled(1.0 / factor, label="HR")


def error_matrix(design: LuenbergerDesign, omega: float, delta: float = 1.0) -> np.ndarray:
    A, _ = cw_matrices(omega)
    return A - delta * design.L @ C_POS


def error_spectrum(design: LuenbergerDesign, omega: float, delta: float = 1.0) -> np.ndarray:
    """Eigenvalues of ``A - delta L C`` sorted by real part, then imaginary part."""
    ev = np.linalg.eigvals(error_matrix(design, omega, delta))
    return ev[np.lexsort((ev.imag, ev.real))]


def is_hurwitz(design: LuenbergerDesign, omega: float, delta: float = 1.0) -> bool:
    return bool(np.all(error_spectrum(design, omega, delta).real < 0))


def eigenvalue_shift_report(design: LuenbergerDesign, delta_values, omega: float) -> list[dict]:
    """One row per ``delta``: eigenvalues of ``A - delta L C`` and their extremes."""
    rows = []
    for d in delta_values:
        ev = error_spectrum(design, omega, float(d))
        rows.append({
            "delta": float(d),
            "eigenvalues": ev,
            "max_real": float(ev.real.max()),
            "min_real": float(ev.real.min()),
            "max_abs_imag": float(np.abs(ev.imag).max()),
        })
    return rows
