from .adaptive import AdaptiveState, adaptive_update, raw_rate, tracking_error
from .design import (
    C_POS,
    LuenbergerDesign,
    damping_from_overshoot,
    design_luenberger,
    eigenvalue_shift_report,
    error_spectrum,
    high_resolution_design,
    is_hurwitz,
    place_luenberger,
    reactive_design,
)
from .kalman import KalmanObserver, KalmanState, kalman_step, make_kalman_state
from .levant import LevantObserver, LevantParams, LevantState, levant_step
from .luenberger import LuenbergerObserver, LuenbergerState, luenberger_step

__all__ = [
    "AdaptiveState",
    "C_POS",
    "KalmanObserver",
    "KalmanState",
    "LevantObserver",
    "LevantParams",
    "LevantState",
    "LuenbergerDesign",
    "LuenbergerObserver",
    "LuenbergerState",
    "adaptive_update",
    "damping_from_overshoot",
    "design_luenberger",
    "eigenvalue_shift_report",
    "error_spectrum",
    "high_resolution_design",
    "is_hurwitz",
    "kalman_step",
    "levant_step",
    "luenberger_step",
    "make_kalman_state",
    "place_luenberger",
    "raw_rate",
    "reactive_design",
    "tracking_error",
]
