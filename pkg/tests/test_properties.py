"""Property tests of the invariants (hypothesis)."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cronav.control import ControllerConfig, control_input, gain_condition_sides, min_feedback_gain
from cronav.dynamics import CroParams, OrbitParams, cro_reference, cw_matrices, rk4_transition
from cronav.guidance import lgvf_velocity
from cronav.observers.adaptive import AdaptiveState, adaptive_update, raw_rate, tracking_error
from cronav.observers.design import C_POS, is_hurwitz, place_luenberger
from cronav.observers.levant import injection

OMEGA = OrbitParams().omega

finite = dict(allow_nan=False, allow_infinity=False)
vec3 = st.lists(st.floats(-1e-2, 1e-2, **finite), min_size=3, max_size=3).map(np.array)
pos3 = st.lists(st.floats(-200.0, 200.0, **finite), min_size=3, max_size=3).map(np.array)


@st.composite
def adaptive_setups(draw):
    delta_min = draw(st.floats(1e-4, 0.5))
    Gamma = draw(st.floats(1e-5, 1e-2))
    G = draw(st.floats(1e-1, 1e3))
    gamma = G * Gamma
    cap = gamma * draw(st.floats(1.0, 10.0))
    delta = draw(st.floats(delta_min, 1.0))
    return AdaptiveState(delta=delta, G=G, Gamma=Gamma, Delta_cap=cap, delta_min=delta_min)


@settings(max_examples=10_000, deadline=None)
@given(
    a=adaptive_setups(),
    traj=st.lists(st.tuples(vec3, pos3), min_size=1, max_size=12),
    dt=st.floats(1e-3, 10.0),
)
def test_adaptive_law_invariants(a, traj, dt):
    for v_hat, p_hat in traj:
        if a.delta == 1.0:
            e = tracking_error(v_hat, p_hat, OMEGA)
            r = raw_rate(a, v_hat, p_hat, OMEGA)
            assert np.sign(r) == np.sign(a.G * e - a.G * a.Gamma)
        nxt = adaptive_update(a, v_hat, p_hat, OMEGA, dt)
        assert a.delta_min <= nxt.delta <= 1.0
        # round-off of the subtraction scales with delta, not with the cap
        assert nxt.delta >= a.delta - a.Delta_cap * dt - 4 * np.spacing(a.delta)
        a = nxt


@settings(max_examples=500, deadline=None)
@given(phase=st.floats(0.0, 2 * math.pi), R=st.floats(1.0, 1e4), t=st.floats(0.0, 1e5))
def test_lgvf_reproduces_cro_velocity(phase, R, t):
    orbit, cro = OrbitParams(), CroParams(R=R, phi=phase)
    s = cro_reference(t, orbit, cro)
    from cronav.guidance import Guidance

    np.testing.assert_allclose(Guidance(orbit.omega, cro)(s.p), s.v, atol=1e-9 * orbit.omega * R)


@settings(max_examples=500, deadline=None)
@given(th=st.floats(0.0, 2 * math.pi), R=st.floats(1.0, 1e4))
def test_planar_speed_on_circle(th, R):
    out = lgvf_velocity([R * math.cos(th), R * math.sin(th), 0.0], OMEGA, CroParams(R=R))
    assert math.isclose(np.linalg.norm(out.v_star), OMEGA * R, rel_tol=1e-12)


@settings(max_examples=300, deadline=None)
@given(r=st.floats(1.0, 1e3), R=st.floats(1.0, 1e3))
def test_lgvf_algebraic_identity(r, R):
    # (r^2 - R^2)^2 + 4 r^2 R^2 = (r^2 + R^2)^2 gives planar speed omega R everywhere in-plane
    out = lgvf_velocity([r, 0.0, 0.0], OMEGA, CroParams(R=R))
    assert math.isclose(np.linalg.norm(out.v_star), OMEGA * R, rel_tol=1e-12)


@settings(max_examples=300, deadline=None)
@given(v=vec3, p=pos3, K=st.floats(1e-3, 1e3))
def test_control_never_exceeds_bound(v, p, K):
    cfg = ControllerConfig(K=K)
    u = control_input(v, p, cfg, lambda q: np.zeros(3))
    assert np.all(np.abs(u) <= cfg.U)


@settings(max_examples=300, deadline=None)
@given(e=vec3, g=st.floats(1e-14, 1e-4))
def test_levant_injection_is_odd(e, g):
    np.testing.assert_array_equal(injection(-e, g), -injection(e, g))


@settings(max_examples=200, deadline=None)
@given(p1=st.floats(-2.0, -1e-3), p2=st.floats(-2.0, -1e-3))
def test_placement_is_hurwitz_and_exact(p1, p2):
    d = place_luenberger(OMEGA, (p1, p2))
    assert is_hurwitz(d, OMEGA)
    A, _ = cw_matrices(OMEGA)
    # each pole satisfies det(sI - (A - LC)) = 0 via the quadratic factor
    M = A - d.L @ C_POS
    a, b = -(p1 + p2), p1 * p2
    np.testing.assert_allclose(M @ M + a * M + b * np.eye(6), 0.0, atol=1e-9)


@settings(max_examples=300, deadline=None)
@given(D=st.floats(1e-4, 1e-1), ef=st.floats(0.0, 0.9), W=st.floats(0.0, 1e-5))
def test_min_gain_is_boundary(D, ef, W):
    E = ef * D
    k = min_feedback_gain(D, E, W, OMEGA)
    lhs, rhs = gain_condition_sides(k, D, E, W, OMEGA)
    assert math.isclose(lhs, rhs, rel_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(x=st.lists(st.floats(-1e3, 1e3, **finite), min_size=6, max_size=6), dt=st.floats(1e-3, 1.0))
def test_rk4_map_is_linear(x, dt):
    A, _ = cw_matrices(OMEGA)
    Phi, Psi = rk4_transition(A, dt)
    x = np.array(x)
    np.testing.assert_allclose(Phi @ (2 * x), 2 * (Phi @ x), rtol=1e-14, atol=1e-10)
