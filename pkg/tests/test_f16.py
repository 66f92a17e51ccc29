"""Flight model, FLCS, integrator and trim solver tests."""

import math
from dataclasses import replace

import pytest

from tunnelsim import f16


@pytest.fixture(scope="module")
def trim500():
    return f16.trim_solve(500.0, 1000.0)


def test_trim_residual_and_symmetry(trim500):
    assert trim500.residual < 1e-4
    assert trim500.state.beta == 0.0
    assert trim500.state.phi == 0.0
    assert trim500.surfaces.aileron == 0.0
    assert trim500.surfaces.rudder == 0.0
    assert 0.0 < trim500.request.throttle < 1.0


def test_trim_outside_envelope_errors():
    with pytest.raises(f16.TrimError) as err:
        f16.trim_solve(50.0, 1000.0)
    assert err.value.residual > 1e-4


def test_derivatives_small_at_trim(trim500):
    d = f16.derivatives(trim500.state, trim500.surfaces)
    for i, name in enumerate(f16._STATE_FIELDS):
        if name in ("pn", "pe", "h"):
            continue
        assert abs(d[i]) < 1e-4, f"{name} rate {d[i]}"
    # position rates equal the trim velocity components
    assert d[9] == pytest.approx(trim500.state.vt, rel=1e-3)   # pn rate
    assert abs(d[10]) < 1e-9                                    # pe rate
    assert abs(d[11]) < 1e-6                                    # climb rate


def test_derivatives_kinematic_identity():
    # wings level, zero rates, zero sideslip: pe rate 0, pn rate vt cos(gamma)
    state = f16.AircraftState(vt=480.0, alpha=0.05, beta=0.0, phi=0.0,
                              theta=0.12, psi=0.0, p=0.0, q=0.0, r=0.0,
                              pn=0.0, pe=0.0, h=2000.0, pow=10.0)
    d = f16.derivatives(state, f16.SurfaceDeflections(throttle=0.2))
    gamma = state.theta - state.alpha
    assert d[10] == pytest.approx(0.0, abs=1e-12)
    assert d[9] == pytest.approx(480.0 * math.cos(gamma), rel=1e-12)
    assert d[11] == pytest.approx(480.0 * math.sin(gamma), rel=1e-12)


def test_pow_derivative_lag_sign():
    state = f16.AircraftState(vt=500.0, alpha=0.03, beta=0.0, phi=0.0,
                              theta=0.03, psi=0.0, p=0.0, q=0.0, r=0.0,
                              pn=0.0, pe=0.0, h=1000.0, pow=20.0)
    # throttle such that commanded power is 80
    throttle = (80.0 + 117.38) / 217.38
    d = f16.derivatives(state, f16.SurfaceDeflections(throttle=throttle))
    assert d[12] > 0.0


def test_derivatives_rejects_nonfinite(trim500):
    bad = replace(trim500.state, alpha=float("nan"))
    with pytest.raises(f16.DynamicsError, match="alpha"):
        f16.derivatives(bad, trim500.surfaces)
    with pytest.raises(f16.DynamicsError, match="elevator"):
        f16.derivatives(trim500.state,
                        f16.SurfaceDeflections(elevator=float("inf")))


def test_flcs_trim_fixed_point(trim500):
    surfaces, state = f16.flcs(trim500.state, trim500.request, 1.0 / 90.0)
    assert surfaces == trim500.surfaces
    assert state.i_nz == trim500.state.i_nz
    assert state.i_ps == trim500.state.i_ps
    assert state.i_ny == trim500.state.i_ny


def test_flcs_pitch_up_sign(trim500):
    base, _ = f16.flcs(trim500.state, trim500.request, 1.0 / 90.0)
    up, _ = f16.flcs(trim500.state,
                     replace(trim500.request, nz_cmd=1.0), 1.0 / 90.0)
    # pitch-up means trailing-edge-up, i.e. more negative elevator
    assert up.elevator < base.elevator


def test_flcs_saturation_freezes_integrator(trim500):
    # drive the pitch channel well past the elevator limit
    state = replace(trim500.state, i_nz=-40.0)
    req = replace(trim500.request, nz_cmd=6.0)
    surfaces, new_state = f16.flcs(state, req, 1.0 / 90.0)
    assert surfaces.elevator == -f16.ELEVATOR_LIMIT
    assert new_state.i_nz == state.i_nz      # anti-windup freeze


def test_flcs_requires_positive_dt(trim500):
    with pytest.raises(f16.DynamicsError):
        f16.flcs(trim500.state, trim500.request, 0.0)


def test_step_rk4_deterministic(trim500):
    req = replace(trim500.request, nz_cmd=0.5, ps_cmd=0.2)
    a = f16.step_rk4(trim500.state, req, 1.0 / 30.0, 3)
    b = f16.step_rk4(trim500.state, req, 1.0 / 30.0, 3)
    assert a.as_tuple() == b.as_tuple()


def test_step_rk4_divergence_is_structured(trim500):
    bad = replace(trim500.state, vt=1e200)
    with pytest.raises(f16.DynamicsDivergedError):
        f16.step_rk4(bad, trim500.request, 1.0 / 30.0, 3)


def test_step_rk4_validates_args(trim500):
    with pytest.raises(f16.DynamicsError):
        f16.step_rk4(trim500.state, trim500.request, 0.0, 3)
    with pytest.raises(f16.DynamicsError):
        f16.step_rk4(trim500.state, trim500.request, 0.1, 0)


def test_rk4_fourth_order_ratio(trim500):
    # one halving at test scale; the acceptance suite runs the full study
    surf = replace(trim500.surfaces, elevator=trim500.surfaces.elevator + 2.0,
                   aileron=1.0)

    def endpoint(dt, total=0.5):
        x = trim500.state.as_tuple()[:13]
        for _ in range(round(total / dt)):
            k1 = f16._deriv13(x, surf)
            k2 = f16._deriv13(tuple(v + 0.5 * dt * k for v, k in zip(x, k1)), surf)
            k3 = f16._deriv13(tuple(v + 0.5 * dt * k for v, k in zip(x, k2)), surf)
            k4 = f16._deriv13(tuple(v + dt * k for v, k in zip(x, k3)), surf)
            x = tuple(v + (dt / 6.0) * (a + 2 * b + 2 * c + d)
                      for v, a, b, c, d in zip(x, k1, k2, k3, k4))
        return x

    ref = endpoint(1e-4)

    def err(dt):
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(endpoint(dt), ref)))

    ratio = err(0.05) / err(0.025)
    assert 8.0 < ratio < 32.0      # ~16 for a 4th-order method


def test_closed_loop_hold(trim500):
    state = trim500.state
    for _ in range(300):
        state = f16.step_rk4(state, trim500.request, 1.0 / 30.0, 3)
    assert abs(state.h - 1000.0) < 10.0
    assert abs(state.vt - 500.0) < 1.0


def test_full_left_stick_rolls_left(trim500):
    req = replace(trim500.request, ps_cmd=-math.pi)
    state = trim500.state
    for _ in range(15):
        state = f16.step_rk4(state, req, 1.0 / 30.0, 3)
    assert state.phi < -0.05


def test_lateral_mirror_symmetry(trim500):
    req = f16.ControlRequest(nz_cmd=0.4, ps_cmd=0.7, ny_r_cmd=0.3,
                             throttle=trim500.request.throttle)
    mirrored = f16.ControlRequest(nz_cmd=0.4, ps_cmd=-0.7, ny_r_cmd=-0.3,
                                  throttle=trim500.request.throttle)
    a = b = trim500.state
    for _ in range(60):
        a = f16.step_rk4(a, req, 1.0 / 30.0, 3)
        b = f16.step_rk4(b, mirrored, 1.0 / 30.0, 3)
    flipped = replace(b, beta=-b.beta, phi=-b.phi, psi=-b.psi, p=-b.p,
                      r=-b.r, pe=-b.pe, i_ps=-b.i_ps, i_ny=-b.i_ny)
    for va, vb in zip(a.as_tuple(), flipped.as_tuple()):
        assert va == pytest.approx(vb, abs=1e-9)


def test_thrust_lag_monotone_convergence(trim500):
    state = replace(trim500.state, pow=20.0)
    req = replace(trim500.request, throttle=0.9)
    target = f16.tgear(0.9)
    prev = state.pow
    for _ in range(900):
        state = f16.step_rk4(state, req, 1.0 / 30.0, 3)
        assert state.pow >= prev - 1e-12
        prev = state.pow
    assert state.pow == pytest.approx(target, abs=0.1)

    # and monotone downward from above
    state = replace(trim500.state, pow=90.0)
    req = replace(trim500.request, throttle=0.2)
    prev = state.pow
    for _ in range(900):
        state = f16.step_rk4(state, req, 1.0 / 30.0, 3)
        assert state.pow <= prev + 1e-12
        prev = state.pow


def test_constants_reference_is_markdown():
    text = f16.constants_reference()
    assert text.startswith("| constant |")
    assert "elevator limit" in text
