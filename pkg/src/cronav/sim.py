"""
Scenario orchestration: truth, sensing, estimation, adaptation, guidance,
control and actuation in one fixed-step loop, plus run metrics.

Per-step ordering is fixed::

    measure -> observer correction -> adapt -> guide -> control -> actuate
            -> propagate truth and observer

Telemetry row ``k`` describes the state at ``t_k = k * dt`` together with the
command computed from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence

import numpy as np

from .control import ControllerConfig, design_controller, max_velocity_error_bound, min_feedback_gain, validate_adaptive_gain
from .dynamics import (
    ActuatorState,
    CroParams,
    DisturbanceModel,
    OrbitParams,
    RelativeState,
    SensorModel,
    _cw_step,
    cro_reference,
    make_streams,
)
from .errors import ConfigError, GuidanceSingularityError, RunAborted
from .guidance import Guidance, GuidanceConfig, linearized_vdes
from .observers.adaptive import AdaptiveState, project
from .observers.design import (
    DEFAULT_HR_FACTOR,
    REACTIVE_POLES,
    is_hurwitz,
    place_luenberger,
)
from .observers.kalman import KalmanObserver, make_kalman_state
from .observers.levant import COEFFICIENTS, LevantObserver, LevantParams
from .observers.luenberger import LuenbergerObserver

OBSERVER_KINDS = ("luenberger", "levant", "kalman")
TUNINGS = ("HR", "R", "adaptive")
MODES = ("open_loop", "closed_loop")
START_KINDS = ("cro", "deployment", "custom")


@dataclass
class ActuatorConfig:
    tau: float = 1.0
    u_max: float = 1e-5


@dataclass
class ControllerSettings:
    """Controller analysis parameters; ``None`` fields are derived at setup.

    Defaults: W = |d_ex|, D = d_fraction * D_bar, E = e_fraction * D and K the
    gain that clears the closed-loop condition by ``margin`` at the smallest
    adaptive factor.
    """

    K: float | None = None
    W: float | None = None
    D: float | None = None
    E: float | None = None
    margin: float = 2.0
    d_fraction: float = 0.5
    e_fraction: float = 0.1


@dataclass
class ObserverConfig:
    """Observer family and gains.

    ``levant_L`` / ``levant_k4`` are the reactive Levant gains (product 1e-8);
    HR divides the Luenberger and Levant gains by ``hr_factor``.  The Kalman
    process noise defaults to ``hypot(process std, kalman_bias_inflation *
    |d_ex|)`` so the filter can follow the unmodelled constant disturbance.
    """

    kind: str = "luenberger"
    tuning: str = "R"
    hr_factor: float = DEFAULT_HR_FACTOR
    reactive_poles: tuple = REACTIVE_POLES
    levant_L: float = 7.071067811865475e-05
    levant_k4: float = 1.414213562373095e-04
    levant_coefficients: tuple = COEFFICIENTS
    kalman_accel_std: float | None = None
    kalman_bias_inflation: float = 10.0
    kalman_p0_pos_std: float | None = None
    kalman_p0_vel_std: float = 1e-3


@dataclass
class AdaptiveConfig:
    """Adaptive law parameters; ``None`` fields are derived at setup.

    Defaults: Gamma = gamma_fraction * D_bar, G = 1 / (Gamma * restore_time),
    Delta_cap = gamma (the cap is tight).
    """

    delta0: float = 1.0
    delta_min: float = 1e-3
    G: float | None = None
    Gamma: float | None = None
    Delta_cap: float | None = None
    gamma_fraction: float = 0.5
    restore_time: float = 600.0


@dataclass
class InitialConditions:
    """``start='cro'`` begins on the reference orbit; ``'deployment'`` scales
    the CRO position by ``1 + radial_offset`` keeping the CRO velocity;
    ``'custom'`` uses ``p`` and ``v``.  The estimate starts offset from the
    truth by ``est_pos_error`` / ``est_vel_error`` per axis, with signs drawn
    from the dispersion stream when ``random_sign`` is set."""

    start: str = "cro"
    radial_offset: float = 0.2
    p: tuple = (0.0, 0.0, 0.0)
    v: tuple = (0.0, 0.0, 0.0)
    est_pos_error: float = 0.0
    est_vel_error: float = 0.0
    random_sign: bool = True


@dataclass
class ScenarioConfig:
    name: str = "scenario"
    orbit: OrbitParams = field(default_factory=OrbitParams)
    cro: CroParams = field(default_factory=CroParams)
    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)
    disturbance: DisturbanceModel = field(default_factory=DisturbanceModel)
    sensor: SensorModel = field(default_factory=SensorModel)
    actuator: ActuatorConfig = field(default_factory=ActuatorConfig)
    controller: ControllerSettings = field(default_factory=ControllerSettings)
    observer: ObserverConfig = field(default_factory=ObserverConfig)
    adaptive: AdaptiveConfig = field(default_factory=AdaptiveConfig)
    initial: InitialConditions = field(default_factory=InitialConditions)
    mode: str = "open_loop"
    dt: float = 0.1
    duration: float | None = None  # None -> two orbital periods
    seed: int = 0
    max_singular_steps: int = 100
    tail_fraction: float = 0.2
    convergence_sigmas: float = 5.0
    convergence_hold: float = 60.0

    def __post_init__(self):
        self.validate()

    @property
    def resolved_duration(self) -> float:
        return 2.0 * self.orbit.period if self.duration is None else float(self.duration)

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.resolved_duration / self.dt + 1e-9))

    def validate(self) -> None:
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not self.resolved_duration > self.dt:
            raise ConfigError(f"duration must exceed dt, got {self.resolved_duration}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.observer.kind not in OBSERVER_KINDS:
            raise ConfigError(f"observer.kind must be one of {OBSERVER_KINDS}, got {self.observer.kind!r}")
        if self.observer.tuning not in TUNINGS:
            raise ConfigError(f"observer.tuning must be one of {TUNINGS}, got {self.observer.tuning!r}")
        if self.initial.start not in START_KINDS:
            raise ConfigError(f"initial.start must be one of {START_KINDS}, got {self.initial.start!r}")
        if not 0 < self.tail_fraction <= 1:
            raise ConfigError(f"tail_fraction must lie in (0, 1], got {self.tail_fraction}")
        if self.max_singular_steps < 1:
            raise ConfigError("max_singular_steps must be >= 1")
        if not self.actuator.tau > 0 or not self.actuator.u_max > 0:
            raise ConfigError("actuator tau and u_max must be > 0")
        if not self.observer.hr_factor > 0:
            raise ConfigError("observer.hr_factor must be > 0")
        if self.observer.kalman_bias_inflation < 0:
            raise ConfigError("observer.kalman_bias_inflation must be >= 0")


@dataclass
class TelemetryRecord:
    t: float
    truth: RelativeState
    y_meas: np.ndarray
    p_hat: np.ndarray
    v_hat: np.ndarray
    w_hat: np.ndarray | None
    delta: float
    u_cmd: np.ndarray
    u_applied: np.ndarray
    v_des: np.ndarray
    E_t: float
    radius_err: float
    V: float


@dataclass
class RunMetrics:
    E_max: float
    E_tail: float
    pos_rmse: float
    vel_rmse: float
    pos_err_tail: float
    vel_err_tail: float
    radius_err_final: float
    switching_count: int
    total_variation_u: float
    fuel: float
    convergence_time: float
    delta_final: float
    delta_min_seen: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Telemetry:
    """Column store of a run, one row per sample."""

    COLUMNS = (
        ["t"]
        + [f"truth_{c}" for c in ("x", "y", "z", "vx", "vy", "vz")]
        + [f"y_meas_{c}" for c in "xyz"]
        + [f"est_{c}" for c in ("x", "y", "z", "vx", "vy", "vz")]
        + [f"w_d_hat_{c}" for c in "xyz"]
        + ["delta"]
        + [f"u_cmd_{c}" for c in "xyz"]
        + [f"u_applied_{c}" for c in "xyz"]
        + [f"v_des_{c}" for c in "xyz"]
        + ["E_t", "radius_err", "V"]
    )

    def __init__(self, n: int, has_w: bool):
        self.n = n
        self.has_w = has_w
        self.t = np.zeros(n)
        self.truth = np.zeros((n, 6))
        self.y_meas = np.zeros((n, 3))
        self.est = np.zeros((n, 6))
        self.w_hat = np.full((n, 3), np.nan)
        self.delta = np.zeros(n)
        self.u_cmd = np.zeros((n, 3))
        self.u_applied = np.zeros((n, 3))
        self.v_des = np.zeros((n, 3))
        self.E_t = np.zeros(n)
        self.radius_err = np.zeros(n)
        self.V = np.zeros(n)

    def __len__(self) -> int:
        return self.n

    def truncated(self, n: int) -> "Telemetry":
        """Copy holding only the first ``n`` rows."""
        out = Telemetry(n, self.has_w)
        for name in ("t", "truth", "y_meas", "est", "w_hat", "delta", "u_cmd",
                     "u_applied", "v_des", "E_t", "radius_err", "V"):
            setattr(out, name, getattr(self, name)[:n].copy())
        return out

    def matrix(self) -> np.ndarray:
        return np.column_stack([
            self.t, self.truth, self.y_meas, self.est, self.w_hat, self.delta,
            self.u_cmd, self.u_applied, self.v_des, self.E_t, self.radius_err, self.V,
        ])

    def record(self, k: int) -> TelemetryRecord:
        return TelemetryRecord(
            t=float(self.t[k]),
            truth=RelativeState.from_vector(self.truth[k]),
            y_meas=self.y_meas[k].copy(),
            p_hat=self.est[k, :3].copy(),
            v_hat=self.est[k, 3:].copy(),
            w_hat=self.w_hat[k].copy() if self.has_w else None,
            delta=float(self.delta[k]),
            u_cmd=self.u_cmd[k].copy(),
            u_applied=self.u_applied[k].copy(),
            v_des=self.v_des[k].copy(),
            E_t=float(self.E_t[k]),
            radius_err=float(self.radius_err[k]),
            V=float(self.V[k]),
        )

    def records(self) -> Iterator[TelemetryRecord]:
        for k in range(self.n):
            yield self.record(k)

    @property
    def pos_error(self) -> np.ndarray:
        return self.est[:, :3] - self.truth[:, :3]

    @property
    def vel_error(self) -> np.ndarray:
        return self.est[:, 3:] - self.truth[:, 3:]


@dataclass
class ResolvedSetup:
    """Derived quantities fixed at setup time (reported in run outputs)."""

    omega: float
    D_bar: float
    controller: ControllerConfig
    adaptive: AdaptiveState | None
    luenberger_L: np.ndarray | None
    levant: LevantParams | None
    gain_scale: float  # constant factor applied to observer gains (HR)

    def summary(self) -> dict:
        out = {
            "omega": self.omega,
            "D_bar": self.D_bar,
            "K": self.controller.K,
            "U": self.controller.U,
            "W": self.controller.W,
            "D": self.controller.D,
            "E": self.controller.E,
            "gain_scale": self.gain_scale,
        }
        if self.adaptive is not None:
            a = self.adaptive
            out.update(G=a.G, Gamma=a.Gamma, gamma=a.gamma, Delta_cap=a.Delta_cap, delta_min=a.delta_min)
        if self.levant is not None:
            out.update(levant_gain=self.levant.gain)
        return out


# --------------------------------------------------------------------- metrics


def estimation_factor(ee_v, ee_p, omega: float) -> float:
    """``||ee_v - v_lin(ee_p)||_inf``, the estimation-error coupling term."""
    return float(np.max(np.abs(np.asarray(ee_v, dtype=float) - linearized_vdes(ee_p, omega))))


def estimation_factor_series(ee_v: np.ndarray, ee_p: np.ndarray, omega: float) -> np.ndarray:
    lin = np.column_stack([
        2.0 * omega * ee_p[:, 2],
        -0.5 * math.sqrt(3.0) * omega * ee_p[:, 0],
        -0.5 * omega * ee_p[:, 0],
    ])
    return np.max(np.abs(ee_v - lin), axis=1)


def switching_count(u) -> int:
    """Total per-axis sign changes; zero samples carry no sign and are skipped."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    if u.shape[0] < 2:
        raise ConfigError("switching_count needs at least two samples")
    total = 0
    for col in u.T:
        s = np.sign(col)
        s = s[s != 0]
        total += int(np.count_nonzero(s[1:] != s[:-1]))
    return total


def convergence_time(t: np.ndarray, err: np.ndarray, threshold: float, hold: float) -> float:
    """Start of the first stretch of at least ``hold`` seconds with ``err < threshold``.

    A stretch reaching the end of the run counts even if shorter than
    ``hold``; ``inf`` if the error never drops below the threshold.
    """
    below = err < threshold
    start = None
    for k in range(len(t)):
        if below[k]:
            if start is None:
                start = k
            if t[k] - t[start] >= hold:
                return float(t[start])
        else:
            start = None
    return float(t[start]) if start is not None else math.inf


def compute_metrics(tel: Telemetry, cfg: ScenarioConfig, omega: float) -> RunMetrics:
    n = len(tel)
    tail = slice(n - max(1, int(round(cfg.tail_fraction * n))), n)
    pe = np.linalg.norm(tel.pos_error, axis=1)
    ve = np.linalg.norm(tel.vel_error, axis=1)
    du = np.abs(np.diff(tel.u_cmd, axis=0)).sum()
    threshold = cfg.convergence_sigmas * cfg.sensor.std
    return RunMetrics(
        E_max=float(tel.E_t.max()),
        E_tail=float(tel.E_t[tail].mean()),
        pos_rmse=float(np.sqrt(np.mean(pe**2))),
        vel_rmse=float(np.sqrt(np.mean(ve**2))),
        pos_err_tail=float(np.sqrt(np.mean(pe[tail] ** 2))),
        vel_err_tail=float(np.sqrt(np.mean(ve[tail] ** 2))),
        radius_err_final=float(np.abs(tel.radius_err[tail]).mean()),
        switching_count=switching_count(tel.u_cmd),
        total_variation_u=float(du),
        fuel=float(np.linalg.norm(tel.u_applied, axis=1).sum() * cfg.dt),
        convergence_time=convergence_time(tel.t, pe, threshold, cfg.convergence_hold),
        delta_final=float(tel.delta[-1]),
        delta_min_seen=float(tel.delta.min()),
    )


# ----------------------------------------------------------------------- setup


def resolve_setup(cfg: ScenarioConfig) -> ResolvedSetup:
    omega = cfg.orbit.omega
    U = cfg.actuator.u_max
    cs = cfg.controller
    W = abs(cfg.disturbance.d_ex) if cs.W is None else cs.W
    D_bar = max_velocity_error_bound(U, W, omega)
    adaptive_on = cfg.observer.tuning == "adaptive"
    ac = cfg.adaptive
    delta_floor = ac.delta_min if adaptive_on else 1.0

    base = design_controller(U, W, omega, delta_min=delta_floor, margin=cs.margin,
                             d_fraction=cs.d_fraction, e_fraction=cs.e_fraction)
    D = base.D if cs.D is None else cs.D
    E = (cs.e_fraction * D) if cs.E is None else cs.E
    if cs.K is None:
        K = cs.margin * min_feedback_gain(D, E, W, omega) / delta_floor
    else:
        K = cs.K
    ctrl = ControllerConfig(K=K, U=U, W=W, D=D, E=E)

    adaptive = None
    if adaptive_on:
        Gamma = ac.gamma_fraction * D_bar if ac.Gamma is None else ac.Gamma
        if not Gamma < D_bar:
            raise ConfigError(f"Gamma={Gamma:.3e} must be below D_bar={D_bar:.3e}")
        G = 1.0 / (Gamma * ac.restore_time) if ac.G is None else ac.G
        cap = G * Gamma if ac.Delta_cap is None else ac.Delta_cap
        adaptive = AdaptiveState(delta=ac.delta0, G=G, Gamma=Gamma, Delta_cap=cap, delta_min=ac.delta_min)
        if cfg.mode == "closed_loop":
            validate_adaptive_gain(ctrl, ac.delta_min, omega)

    oc = cfg.observer
    gain_scale = 1.0 / oc.hr_factor if oc.tuning == "HR" else 1.0
    L = None
    lev = None
    if oc.kind == "luenberger":
        design = place_luenberger(omega, oc.reactive_poles, label="R")
        L = design.L * gain_scale
        if not is_hurwitz(design, omega, gain_scale):
            raise ConfigError("Luenberger error dynamics are not Hurwitz for this tuning")
        if adaptive is not None and not is_hurwitz(design, omega, ac.delta_min):
            raise ConfigError(f"A - delta_min L C is not Hurwitz for delta_min={ac.delta_min}")
    elif oc.kind == "levant":
        lev = LevantParams(oc.levant_L, oc.levant_k4, tuple(oc.levant_coefficients)).scaled(gain_scale)
    return ResolvedSetup(omega, D_bar, ctrl, adaptive, L, lev, gain_scale)


def initial_states(cfg: ScenarioConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    ic = cfg.initial
    if ic.start == "cro":
        x0 = cro_reference(0.0, cfg.orbit, cfg.cro).as_vector()
    elif ic.start == "deployment":
        ref = cro_reference(0.0, cfg.orbit, cfg.cro)
        x0 = np.concatenate([ref.p * (1.0 + ic.radial_offset), ref.v])
    else:
        x0 = RelativeState(ic.p, ic.v).as_vector()
    signs = rng.choice([-1.0, 1.0], size=6) if ic.random_sign else np.ones(6)
    offset = signs * np.array([ic.est_pos_error] * 3 + [ic.est_vel_error] * 3)
    return x0, x0 + offset


def build_observer(cfg: ScenarioConfig, setup: ResolvedSetup, xhat0: np.ndarray):
    oc = cfg.observer
    if oc.kind == "luenberger":
        from .observers.design import LuenbergerDesign

        return LuenbergerObserver(LuenbergerDesign(setup.luenberger_L), setup.omega, cfg.dt, xhat0)
    if oc.kind == "levant":
        return LevantObserver(setup.levant, setup.omega, cfg.dt, xhat0)
    if oc.kalman_accel_std is None:
        accel_std = math.hypot(cfg.disturbance.std, oc.kalman_bias_inflation * abs(cfg.disturbance.d_ex))
    else:
        accel_std = oc.kalman_accel_std
    p0 = cfg.sensor.std if oc.kalman_p0_pos_std is None else oc.kalman_p0_pos_std
    state = make_kalman_state(xhat0, setup.omega, cfg.dt, accel_std, cfg.sensor.std, p0, oc.kalman_p0_vel_std)
    return KalmanObserver(state, setup.omega, cfg.dt)


# ------------------------------------------------------------------------ loop


def run_scenario(
    cfg: ScenarioConfig,
    callback: Callable[[TelemetryRecord], None] | None = None,
) -> tuple[Telemetry, RunMetrics]:
    """Run one scenario to completion.

    ``callback`` (optional) receives each :class:`TelemetryRecord` as the
    loop produces it.

    Raises
    ------
    RunAborted
        When the guidance stays singular for more than ``max_singular_steps``
        consecutive steps; the exception carries the partial telemetry.
    """
    cfg.validate()
    setup = resolve_setup(cfg)
    omega = setup.omega
    dt = cfg.dt
    n = cfg.n_steps + 1
    streams = make_streams(cfg.seed)
    rng_pn, rng_y = streams["process"], streams["sensor"]

    x, xhat0 = initial_states(cfg, streams["dispersion"])
    obs = build_observer(cfg, setup, xhat0)
    guide = Guidance(omega, cfg.cro, cfg.guidance)
    act = ActuatorState(tau=cfg.actuator.tau, u_max=cfg.actuator.u_max)
    Phi, PsiB = _cw_step(omega, dt)
    ctrl = setup.controller
    ada = setup.adaptive
    closed = cfg.mode == "closed_loop"
    R = cfg.cro.R
    y_std = cfg.sensor.std
    pn_std = cfg.disturbance.std
    d_ex = np.array([cfg.disturbance.d_ex, 0.0, 0.0])
    U = ctrl.U
    alpha = min(dt / act.tau, 1.0)

    delta = ada.delta if ada is not None else 1.0
    if ada is not None:
        G, gamma, dmin, dmax = ada.G, ada.gamma, ada.delta_min, ada.delta_max

    tel = Telemetry(n, has_w=cfg.observer.kind == "levant")
    zero3 = np.zeros(3)
    u_app = np.zeros(3)
    sq3 = 0.5 * math.sqrt(3.0)

    for k in range(n):
        t = k * dt
        p = x[:3]
        y = p + rng_y.normal(0.0, y_std, 3) if y_std > 0 else p.copy()
        obs.correct(y)
        p_hat = obs.p_hat.copy()
        v_hat = obs.v_hat.copy()

        v_lin = np.array([2.0 * omega * p_hat[2], -sq3 * omega * p_hat[0], -0.5 * omega * p_hat[0]])
        v_des = guide(p_hat)
        if guide.consecutive_singular > cfg.max_singular_steps:
            raise RunAborted(
                f"guidance singular for {guide.consecutive_singular} consecutive steps at t={t:.1f} s",
                telemetry=tel.truncated(k),
            )

        if closed:
            err = v_hat - v_des
            u_cmd = -np.clip(delta * ctrl.K * err, -U, U)
        else:
            u_cmd = zero3

        ee_p = p_hat - p
        ee_v = v_hat - x[3:]
        e_t = max(abs(ee_v[0] - 2.0 * omega * ee_p[2]),
                  abs(ee_v[1] + sq3 * omega * ee_p[0]),
                  abs(ee_v[2] + 0.5 * omega * ee_p[0]))
        dv = x[3:] - v_des

        tel.t[k] = t
        tel.truth[k] = x
        tel.y_meas[k] = y
        tel.est[k, :3] = p_hat
        tel.est[k, 3:] = v_hat
        if tel.has_w:
            tel.w_hat[k] = obs.w_hat
        tel.delta[k] = delta
        tel.u_cmd[k] = u_cmd
        tel.v_des[k] = v_des
        tel.E_t[k] = e_t
        tel.radius_err[k] = math.sqrt(p @ p) - R
        tel.V[k] = 0.5 * float(dv @ dv)

        # actuate
        u_app = u_app + alpha * (np.clip(u_cmd, -U, U) - u_app)
        tel.u_applied[k] = u_app

        if callback is not None:
            callback(tel.record(k))
        if k == n - 1:
            break

        # propagate truth, observer and the adaptive factor
        w = d_ex + rng_pn.normal(0.0, pn_std, 3) if pn_std > 0 else d_ex
        x = Phi @ x + PsiB @ (u_app + w)
        obs.predict(u_app, delta)
        if ada is not None:
            rate = G * float(np.max(np.abs(v_hat - v_lin))) - gamma * delta
            rate = project(rate, delta, dmin, dmax)
            delta = min(max(delta + dt * rate, dmin), dmax)

    return tel, compute_metrics(tel, cfg, omega)


# ------------------------------------------------------------------ comparison


@dataclass
class RunResult:
    label: str
    config: ScenarioConfig
    telemetry: Telemetry | None
    metrics: RunMetrics | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def check_common_grid(cfgs: Sequence[ScenarioConfig]) -> None:
    """All configs must share ``dt`` and the resolved duration."""
    if not cfgs:
        raise ConfigError("comparison needs at least one scenario")
    dt0, dur0 = cfgs[0].dt, cfgs[0].resolved_duration
    for c in cfgs[1:]:
        if c.dt != dt0 or c.resolved_duration != dur0:
            raise ConfigError(
                f"timing grid of {c.name!r} (dt={c.dt}, duration={c.resolved_duration}) "
                f"differs from {cfgs[0].name!r} (dt={dt0}, duration={dur0})"
            )


def _run_member(args) -> RunResult:
    label, cfg = args
    try:
        tel, metrics = run_scenario(cfg)
    except (RunAborted, ConfigError, GuidanceSingularityError) as exc:
        return RunResult(label, cfg, None, None, f"{type(exc).__name__}: {exc}")
    return RunResult(label, cfg, tel, metrics)


def compare_runs(
    cfgs: Sequence[ScenarioConfig],
    labels: Sequence[str] | None = None,
    jobs: int = 1,
) -> list[RunResult]:
    """Run every scenario on a shared timing grid.

    Failed members are reported through :attr:`RunResult.error` rather than
    raised so completed runs are kept.  ``jobs > 1`` runs members in worker
    processes; results keep the input order either way.
    """
    cfgs = list(cfgs)
    check_common_grid(cfgs)
    labels = [c.name for c in cfgs] if labels is None else list(labels)
    if len(labels) != len(cfgs):
        raise ConfigError("labels and configs differ in length")
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate run labels: {labels}")
    for c in cfgs:
        c.validate()
    work = list(zip(labels, cfgs))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
            return list(pool.map(_run_member, work))
    return [_run_member(w) for w in work]


def metrics_table(results: Sequence[RunResult]) -> tuple[list[str], list[list]]:
    """Header and rows (one per run) of the aligned metrics table."""
    names = [f.name for f in fields(RunMetrics)]
    header = ["label", "observer", "tuning", "mode", "status"] + names
    rows = []
    for r in results:
        head = [r.label, r.config.observer.kind, r.config.observer.tuning, r.config.mode]
        if r.ok:
            rows.append(head + ["ok"] + [getattr(r.metrics, n) for n in names])
        else:
            rows.append(head + ["failed"] + [""] * len(names))
    return header, rows
