import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from cronav.dynamics import (
    MU_EARTH,
    R_ORBIT_500KM,
    ActuatorState,
    CroParams,
    DisturbanceModel,
    OrbitParams,
    RelativeState,
    SensorModel,
    cro_reference,
    cw_derivative,
    cw_matrices,
    make_streams,
    measure_position,
    noise_std,
    rk4_transition,
    step_truth,
)
from cronav.errors import ConfigError


def test_orbit_rate_matches_kepler():
    orbit = OrbitParams()
    assert orbit.omega == pytest.approx(math.sqrt(MU_EARTH / R_ORBIT_500KM**3), rel=1e-15)
    assert orbit.omega == pytest.approx(1.1067834463e-3, rel=1e-9)
    assert orbit.period == pytest.approx(5676.97, abs=0.05)


@pytest.mark.parametrize("kw", [dict(r_o=0.0), dict(mu=-1.0)])
def test_orbit_rejects_bad_values(kw):
    with pytest.raises(ConfigError):
        OrbitParams(**kw)


@pytest.mark.parametrize("kw", [dict(R=0.0), dict(phi=-0.1), dict(lam=0.0)])
def test_cro_params_validation(kw):
    with pytest.raises(ConfigError):
        CroParams(**kw)


def test_noise_interpretations():
    assert noise_std(1e-2, "variance") == pytest.approx(0.1)
    assert noise_std(1e-2, "std") == 1e-2
    with pytest.raises(ConfigError):
        noise_std(-1.0, "std")
    with pytest.raises(ConfigError):
        noise_std(1.0, "sigma")
    assert SensorModel().std == pytest.approx(0.1)
    assert DisturbanceModel(interpretation="std").std == 1e-8


def test_relative_state_shape_checks():
    with pytest.raises(ConfigError):
        RelativeState([1.0, 2.0], [0.0, 0.0, 0.0])
    with pytest.raises(ConfigError):
        RelativeState([1.0, np.nan, 0.0], [0.0, 0.0, 0.0])
    s = RelativeState.from_vector(np.arange(6.0))
    np.testing.assert_array_equal(s.as_vector(), np.arange(6.0))


def test_cw_matrices_match_component_derivative(omega, rng):
    A, B = cw_matrices(omega)
    orbit = OrbitParams()
    for _ in range(20):
        x = rng.normal(size=6) * [100, 100, 100, 0.1, 0.1, 0.1]
        u = rng.normal(size=3) * 1e-5
        v, a = cw_derivative(RelativeState.from_vector(x), u, np.zeros(3), orbit)
        np.testing.assert_allclose(np.concatenate([v, a]), A @ x + B @ u, rtol=1e-13, atol=1e-20)


def test_cro_reference_has_constant_radius():
    orbit, cro = OrbitParams(), CroParams(R=100.0, phi=0.3)
    for t in np.linspace(0.0, orbit.period, 37):
        s = cro_reference(t, orbit, cro)
        assert np.linalg.norm(s.p) == pytest.approx(100.0, rel=1e-14)
        # speed omega R along the circle
        assert np.linalg.norm(s.v) == pytest.approx(orbit.omega * 100.0, rel=1e-14)


def test_cro_reference_solves_unforced_cw():
    # velocity is the time derivative of position, acceleration matches the CW field
    orbit, cro = OrbitParams(), CroParams(R=250.0, phi=1.0)
    h = 1e-2
    for t in (0.0, 777.0, 3210.5):
        s = cro_reference(t, orbit, cro)
        sp = cro_reference(t + h, orbit, cro)
        sm = cro_reference(t - h, orbit, cro)
        np.testing.assert_allclose((sp.p - sm.p) / (2 * h), s.v, rtol=1e-8)
        _, a = cw_derivative(s, np.zeros(3), np.zeros(3), orbit)
        np.testing.assert_allclose((sp.v - sm.v) / (2 * h), a, rtol=1e-7, atol=1e-12)


def test_rk4_transition_against_matrix_exponential(omega):
    A, B = cw_matrices(omega)
    dt = 0.1
    Phi, Psi = rk4_transition(A, dt)
    # fifth-order local error of RK4 on a linear system
    np.testing.assert_allclose(Phi, expm(A * dt), atol=(omega * dt) ** 5)
    # forced response: integral of expm(A s) ds B
    M = np.zeros((9, 9))
    M[:6, :6] = A
    M[:6, 6:] = B
    G = expm(M * dt)[:6, 6:]
    np.testing.assert_allclose(Psi @ B, G, atol=1e-12)


def test_rk4_transition_matches_generic_rk4(rng):
    A = rng.normal(size=(4, 4))
    f = rng.normal(size=4)
    x = rng.normal(size=4)
    dt = 0.05

    def rhs(z):
        return A @ z + f

    k1 = rhs(x)
    k2 = rhs(x + dt / 2 * k1)
    k3 = rhs(x + dt / 2 * k2)
    k4 = rhs(x + dt * k3)
    expected = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    Phi, Psi = rk4_transition(A, dt)
    np.testing.assert_allclose(Phi @ x + Psi @ f, expected, rtol=1e-13, atol=1e-14)


def test_step_truth_matches_adaptive_ode_solver():
    orbit = OrbitParams()
    dist = DisturbanceModel(d_ex=-1e-7, sigma_pn=0.0)
    act = ActuatorState(tau=1e-9)  # immediate actuation
    u = np.array([3e-6, -2e-6, 1e-6])
    x0 = cro_reference(0.0, orbit, CroParams()).as_vector() + [1, -2, 0.5, 1e-3, 0, -1e-3]
    state = RelativeState.from_vector(x0)
    dt, n = 1.0, 600
    for _ in range(n):
        state, act = step_truth(state, u, act, dist, orbit, dt, None)
    A, B = cw_matrices(orbit.omega)
    w = np.array([dist.d_ex, 0, 0])
    sol = solve_ivp(lambda t, x: A @ x + B @ (u + w), (0, n * dt), x0, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(state.as_vector(), sol.y[:, -1], rtol=1e-8, atol=1e-8)


def test_actuator_lag_and_clamp():
    act = ActuatorState(tau=1.0, u_max=1e-5)
    for _ in range(50):
        act.advance([1.0, -1.0, 5e-6], 0.1)
    assert np.all(np.abs(act.u_applied) <= 1e-5)
    assert act.u_applied[0] == pytest.approx(1e-5 * (1 - 0.9**50))
    # a step longer than tau lands on the target
    act2 = ActuatorState(tau=1.0)
    np.testing.assert_allclose(act2.advance([2e-6, 0, 0], 5.0), [2e-6, 0, 0])
    with pytest.raises(ConfigError):
        ActuatorState(tau=0.0)


def test_streams_are_independent_and_reproducible():
    a = make_streams(7)
    b = make_streams(7)
    x1 = a["sensor"].normal(size=5)
    b["process"].normal(size=1000)  # drawing from another stream leaves sensor untouched
    np.testing.assert_array_equal(x1, b["sensor"].normal(size=5))
    assert not np.array_equal(make_streams(8)["sensor"].normal(size=5), x1)


def test_measure_position_noise_level():
    rng = np.random.default_rng(0)
    s = RelativeState([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
    sensor = SensorModel(sigma_y=1e-2, interpretation="std")
    ys = np.array([measure_position(s, sensor, rng) for _ in range(4000)])
    assert np.std(ys - s.p) == pytest.approx(1e-2, rel=0.05)
    np.testing.assert_array_equal(measure_position(s, sensor, None), s.p)


def test_process_noise_sample_variance():
    from cronav.dynamics import sample_process_noise

    w = sample_process_noise(DisturbanceModel(sigma_pn=1e-8), np.random.default_rng(3), size=100_000)
    assert np.var(w) == pytest.approx(1e-8, rel=0.05)
