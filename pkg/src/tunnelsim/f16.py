"""Nonlinear 13-state F-16 flight model with an inner-loop flight control system.

The dynamic state is (vt, alpha, beta, phi, theta, psi, p, q, r, pn, pe, h, pow);
three FLCS integrator states (i_nz, i_ps, i_ny) ride along for a 16-element
state vector.  Equations of motion follow the classic body-axis wind-angle
formulation (Stevens & Lewis style); aerodynamic and engine coefficients are
smooth low-order polynomial fits valid in the subsonic, low-alpha envelope.
Engine gyroscopic momentum is set to zero so laterally mirrored flight is
exactly symmetric.

Units: ft, ft/s, rad, rad/s, seconds.  Surface deflections are in degrees
(aviation convention); accelerations commanded/measured in g.
Sign conventions: positive elevator pitches down (trailing edge down),
positive aileron rolls right, positive rudder yaws nose-left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

# --- mass properties and geometry (public F-16 planform figures) ---
WEIGHT = 20490.446          # lbf
GRAV = 32.17                # ft/s^2
MASS = WEIGHT / GRAV        # slug
S_REF = 300.0               # wing reference area, ft^2
B_REF = 30.0                # aero reference span, ft
CBAR = 11.32                # mean aerodynamic chord, ft
IXX = 9496.0                # slug ft^2
IYY = 55814.0
IZZ = 63100.0
IXZ = 982.0
ENGINE_ANG_MOMENTUM = 0.0   # gyroscopic coupling omitted: keeps mirrored flight exact

_GAM = IXX * IZZ - IXZ * IXZ
_C1 = ((IYY - IZZ) * IZZ - IXZ * IXZ) / _GAM
_C2 = (IXX - IYY + IZZ) * IXZ / _GAM
_C3 = IZZ / _GAM
_C4 = IXZ / _GAM
_C5 = (IZZ - IXX) / IYY
_C6 = IXZ / IYY
_C7 = 1.0 / IYY
_C8 = (IXX * (IXX - IYY) + IXZ * IXZ) / _GAM
_C9 = IXX / _GAM

# --- surface and request limits ---
ELEVATOR_LIMIT = 25.0       # deg
AILERON_LIMIT = 21.5        # deg
RUDDER_LIMIT = 30.0         # deg
NZ_CMD_MIN = -2.0           # g, about the 1-g trim point
NZ_CMD_MAX = 6.0
PS_CMD_LIMIT = math.pi      # rad/s
NY_R_CMD_LIMIT = 2.0

# --- aerodynamic polynomial coefficients (subsonic fit, alpha/beta in rad,
# deflections normalized by their limits) ---
CX_0 = -0.021
CX_A = 0.155
CX_A2 = 0.854
CX_DE2 = -0.057
CX_Q = 0.308

CY_B = -1.146
CY_DA = -0.023
CY_DR = 0.086
CY_P = -0.188
CY_R = 0.876

CZ_0 = -0.100
CZ_A = -4.30
CZ_A3 = 2.57
CZ_DE = -0.19
CZ_Q = -28.9

CL_B = -0.092
CL_DA = 0.056
CL_DR = 0.014
CL_P = -0.443
CL_R = 0.063

CM_0 = -0.009
CM_A = 0.115                # relaxed static stability: mildly unstable bare airframe
CM_DE = -0.183
CM_Q = -5.23

CN_B = 0.206
CN_DA = 0.0065
CN_DR = -0.047
CN_P = 0.052
CN_R = -0.378

# --- engine model: smooth thrust fits + first-order power lag ---
T_IDLE_SL = 1060.0          # lbf at sea level, Mach 0
T_IDLE_M1 = 1750.0          # ram-drag slope vs Mach
T_IDLE_M2 = 1875.0
T_MIL_SL = 12680.0
T_MAX_SL = 20000.0
T_MAX_M1 = 7000.0           # afterburner ram recovery vs Mach

# --- FLCS gains (hand-tuned proportional + integral tracking; the soft
# integral keeps the pitch channel from ringing in low-speed turns) ---
KP_NZ = -4.0                # deg elevator per g of nz error
KI_NZ = -1.0                # deg/s per g
KQ_DAMP = 18.0              # deg per rad/s pitch rate
KP_PS = 7.0                 # deg aileron per rad/s of ps error
KI_PS = 10.0
KP_NYR = -20.0              # deg rudder per unit of (ny + r) error
KI_NYR = -8.0
KR_DAMP = 15.0              # deg per rad/s yaw rate

# trim_solve search envelope
TRIM_VT_MIN = 250.0         # ft/s
TRIM_VT_MAX = 900.0
TRIM_H_MIN = 0.0
TRIM_H_MAX = 30000.0

_STATE_FIELDS = ("vt", "alpha", "beta", "phi", "theta", "psi",
                 "p", "q", "r", "pn", "pe", "h", "pow",
                 "i_nz", "i_ps", "i_ny")


class DynamicsError(ValueError):
    """Bad input handed to the dynamics (non-finite or out of contract)."""


class DynamicsDivergedError(RuntimeError):
    """Integration produced a non-finite state."""

    def __init__(self, substep: int):
        super().__init__(f"dynamics diverged at integration substep {substep}")
        self.substep = substep


class TrimError(RuntimeError):
    """Trim solve failed to reach tolerance; carries the best residual found."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual


@dataclass
class AircraftState:
    """16-element aircraft state: 13 dynamic states + 3 FLCS integrators."""

    vt: float       # true airspeed, ft/s
    alpha: float    # angle of attack, rad
    beta: float     # sideslip, rad
    phi: float      # roll, rad
    theta: float    # pitch, rad
    psi: float      # yaw, rad
    p: float        # body roll rate, rad/s
    q: float        # body pitch rate, rad/s
    r: float        # body yaw rate, rad/s
    pn: float       # north position, ft
    pe: float       # east position, ft
    h: float        # altitude, ft
    pow: float      # engine power state, percent 0..100
    i_nz: float = 0.0   # FLCS nz-channel integrator (holds elevator bias, deg)
    i_ps: float = 0.0   # FLCS roll-channel integrator (deg)
    i_ny: float = 0.0   # FLCS yaw-channel integrator (deg)

    def as_tuple(self) -> tuple:
        return (self.vt, self.alpha, self.beta, self.phi, self.theta, self.psi,
                self.p, self.q, self.r, self.pn, self.pe, self.h, self.pow,
                self.i_nz, self.i_ps, self.i_ny)

    @classmethod
    def from_tuple(cls, values) -> "AircraftState":
        return cls(*values)


@dataclass(frozen=True)
class ControlRequest:
    """Pilot-level request fed to the FLCS."""

    nz_cmd: float = 0.0     # normal acceleration about trim, g
    ps_cmd: float = 0.0     # stability-axis roll rate, rad/s
    ny_r_cmd: float = 0.0   # lateral acceleration + yaw rate blend
    throttle: float = 0.0   # commanded throttle fraction 0..1

    def clamped(self) -> "ControlRequest":
        return ControlRequest(
            nz_cmd=min(max(self.nz_cmd, NZ_CMD_MIN), NZ_CMD_MAX),
            ps_cmd=min(max(self.ps_cmd, -PS_CMD_LIMIT), PS_CMD_LIMIT),
            ny_r_cmd=min(max(self.ny_r_cmd, -NY_R_CMD_LIMIT), NY_R_CMD_LIMIT),
            throttle=min(max(self.throttle, 0.0), 1.0),
        )


@dataclass(frozen=True)
class SurfaceDeflections:
    """FLCS output.  Elevator/aileron/rudder in deg, throttle as a fraction."""

    elevator: float = 0.0
    aileron: float = 0.0
    rudder: float = 0.0
    throttle: float = 0.0


@dataclass(frozen=True)
class TrimResult:
    state: AircraftState
    request: ControlRequest
    surfaces: SurfaceDeflections
    residual: float         # L2 norm of the non-position derivative components


def _atmosphere(vt: float, h: float):
    """Density-ratio atmosphere: returns (mach, qbar).  tfac is floored so a
    diverging altitude yields zeros instead of complex powers."""
    tfac = max(1.0 - 0.703e-5 * h, 0.0)
    temp = 390.0 if h >= 35000.0 else 519.0 * tfac
    rho = 2.377e-3 * tfac ** 4.14
    mach = vt / math.sqrt(1.4 * 1716.3 * max(temp, 1.0))
    qbar = 0.5 * rho * vt * vt
    return mach, qbar


def tgear(throttle: float) -> float:
    """Throttle fraction to commanded engine power (percent)."""
    if throttle <= 0.77:
        return 64.94 * throttle
    return 217.38 * throttle - 117.38


def _rtau(dp: float) -> float:
    if dp <= 25.0:
        return 1.0
    if dp >= 50.0:
        return 0.1
    return 1.9 - 0.036 * dp


def _power_rate(pow_now: float, pow_cmd: float) -> float:
    """First-order engine lag with the mil-power transition logic."""
    if pow_cmd >= 50.0:
        if pow_now >= 50.0:
            return 5.0 * (pow_cmd - pow_now)
        target = 60.0
        return _rtau(target - pow_now) * (target - pow_now)
    if pow_now >= 50.0:
        return 5.0 * (40.0 - pow_now)
    return _rtau(pow_cmd - pow_now) * (pow_cmd - pow_now)


def _thrust(pow_now: float, mach: float, h: float) -> float:
    sigma = max(1.0 - 0.703e-5 * h, 0.0) ** 4.14
    t_idle = (T_IDLE_SL - T_IDLE_M1 * mach - T_IDLE_M2 * mach * mach) * sigma
    t_mil = T_MIL_SL * sigma
    t_max = (T_MAX_SL + T_MAX_M1 * mach) * sigma
    if pow_now <= 50.0:
        return t_idle + (t_mil - t_idle) * pow_now * 0.02
    return t_mil + (t_max - t_mil) * (pow_now - 50.0) * 0.02


def _aero_coefficients(alpha, beta, p, q, r, vt, elevator, aileron, rudder):
    """Body-axis force/moment coefficients from the polynomial fits."""
    den = elevator / ELEVATOR_LIMIT
    dan = aileron / AILERON_LIMIT
    drn = rudder / RUDDER_LIMIT
    b2v = B_REF / (2.0 * vt)
    cq = CBAR * q / (2.0 * vt)

    cx = CX_0 + CX_A * alpha + CX_A2 * alpha * alpha + CX_DE2 * den * den + CX_Q * cq
    cy = CY_B * beta + CY_DA * dan + CY_DR * drn + b2v * (CY_P * p + CY_R * r)
    cz = ((CZ_0 + CZ_A * alpha + CZ_A3 * alpha ** 3) * (1.0 - beta * beta)
          + CZ_DE * den + CZ_Q * cq)
    cl = CL_B * beta + CL_DA * dan + CL_DR * drn + b2v * (CL_P * p + CL_R * r)
    cm = CM_0 + CM_A * alpha + CM_DE * den + CM_Q * cq
    cn = CN_B * beta + CN_DA * dan + CN_DR * drn + b2v * (CN_P * p + CN_R * r)
    return cx, cy, cz, cl, cm, cn


def _deriv13(x: tuple, surfaces: SurfaceDeflections) -> tuple:
    """Time derivative of the 13 dynamic states; surfaces held fixed."""
    vt, alpha, beta, phi, theta, psi, p, q, r, pn, pe, h, pow_now = x

    mach, qbar = _atmosphere(vt, h)
    cx, cy, cz, cl, cm, cn = _aero_coefficients(
        alpha, beta, p, q, r, vt, surfaces.elevator, surfaces.aileron, surfaces.rudder)
    thrust = _thrust(pow_now, mach, h)

    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    sth, cth = math.sin(theta), math.cos(theta)
    sph, cph = math.sin(phi), math.cos(phi)
    sps, cps = math.sin(psi), math.cos(psi)

    u = vt * ca * cb
    v = vt * sb
    w = vt * sa * cb

    qs = qbar * S_REF
    ax = (qs * cx + thrust) / MASS
    ay = qs * cy / MASS
    az = qs * cz / MASS

    udot = r * v - q * w - GRAV * sth + ax
    vdot = p * w - r * u + GRAV * cth * sph + ay
    wdot = q * u - p * v + GRAV * cth * cph + az

    uw2 = u * u + w * w
    vt_dot = (u * udot + v * vdot + w * wdot) / vt
    alpha_dot = (u * wdot - w * udot) / uw2
    beta_dot = (vt * vdot - v * vt_dot) * cb / uw2

    phi_dot = p + (sth / cth) * (q * sph + r * cph)
    theta_dot = q * cph - r * sph
    psi_dot = (q * sph + r * cph) / cth

    qsb = qs * B_REF
    he = ENGINE_ANG_MOMENTUM
    p_dot = (_C2 * p + _C1 * r + _C4 * he) * q + qsb * (_C3 * cl + _C4 * cn)
    q_dot = (_C5 * p - _C7 * he) * r + _C6 * (r * r - p * p) + qs * CBAR * _C7 * cm
    r_dot = (_C8 * p - _C2 * r + _C9 * he) * q + qsb * (_C4 * cl + _C9 * cn)

    t1 = sph * cps
    t2 = cph * sth
    t3 = sph * sps
    pn_dot = u * cth * cps + v * (t1 * sth - cph * sps) + w * (t2 * cps + t3)
    pe_dot = u * cth * sps + v * (t3 * sth + cph * cps) + w * (t2 * sps - t1)
    h_dot = u * sth - v * sph * cth - w * cph * cth

    pow_dot = _power_rate(pow_now, tgear(surfaces.throttle))

    return (vt_dot, alpha_dot, beta_dot, phi_dot, theta_dot, psi_dot,
            p_dot, q_dot, r_dot, pn_dot, pe_dot, h_dot, pow_dot)


def _check_finite(state: AircraftState):
    for name in _STATE_FIELDS:
        if not math.isfinite(getattr(state, name)):
            raise DynamicsError(f"non-finite state field '{name}'")


def derivatives(state: AircraftState, surfaces: SurfaceDeflections) -> tuple:
    """Full 16-component state derivative with surfaces held fixed.

    The three FLCS integrator slots are controller states advanced discretely
    by flcs(), so their continuous-time rate is reported as zero.
    """
    _check_finite(state)
    for name in ("elevator", "aileron", "rudder", "throttle"):
        if not math.isfinite(getattr(surfaces, name)):
            raise DynamicsError(f"non-finite surface field '{name}'")
    return _deriv13(state.as_tuple()[:13], surfaces) + (0.0, 0.0, 0.0)


def _measurements(state: AircraftState):
    """FLCS feedback signals (nz, ps, ny + r) from accelerometer proxies.

    Aero accelerations are evaluated at the integrator-implied baseline
    surfaces, which makes a solved trim point an exact FLCS fixed point.
    nz is normal acceleration in excess of the local gravity relief
    (zero in steady level flight, positive pulling up).
    """
    _, qbar = _atmosphere(state.vt, state.h)
    de = min(max(state.i_nz, -ELEVATOR_LIMIT), ELEVATOR_LIMIT)
    da = min(max(state.i_ps, -AILERON_LIMIT), AILERON_LIMIT)
    dr = min(max(state.i_ny, -RUDDER_LIMIT), RUDDER_LIMIT)
    _, cy, cz, _, _, _ = _aero_coefficients(
        state.alpha, state.beta, state.p, state.q, state.r, state.vt, de, da, dr)
    qs = qbar * S_REF
    nz = -qs * cz / (MASS * GRAV) - math.cos(state.theta) * math.cos(state.phi)
    ny = qs * cy / (MASS * GRAV)
    ps = state.p * math.cos(state.alpha) + state.r * math.sin(state.alpha)
    return nz, ps, ny + state.r


def _pi_channel(err, kp, ki, integ, damp, limit, dt):
    """One P+I surface channel with integrator freeze at saturation."""
    raw = kp * err + integ + damp
    out = min(max(raw, -limit), limit)
    winding_up = (raw > limit and ki * err > 0.0) or (raw < -limit and ki * err < 0.0)
    if not winding_up:
        integ = integ + ki * err * dt
    return out, integ


def flcs(state: AircraftState, request: ControlRequest, dt: float):
    """Inner-loop control law: requests to surface deflections.

    Returns (surfaces, state') where state' carries the updated integrators.
    Proportional + integral tracking on each of (nz, ps, ny + r) plus rate
    damping; saturated channels freeze their integrator (anti-windup).
    """
    if dt <= 0.0:
        raise DynamicsError("flcs requires dt > 0")
    _check_finite(state)
    req = request.clamped()
    nz, ps, ny_r = _measurements(state)

    elevator, i_nz = _pi_channel(req.nz_cmd - nz, KP_NZ, KI_NZ, state.i_nz,
                                 KQ_DAMP * state.q, ELEVATOR_LIMIT, dt)
    aileron, i_ps = _pi_channel(req.ps_cmd - ps, KP_PS, KI_PS, state.i_ps,
                                0.0, AILERON_LIMIT, dt)
    rudder, i_ny = _pi_channel(req.ny_r_cmd - ny_r, KP_NYR, KI_NYR, state.i_ny,
                               KR_DAMP * state.r, RUDDER_LIMIT, dt)

    surfaces = SurfaceDeflections(elevator=elevator, aileron=aileron,
                                  rudder=rudder, throttle=req.throttle)
    return surfaces, replace(state, i_nz=i_nz, i_ps=i_ps, i_ny=i_ny)


def step_rk4(state: AircraftState, request: ControlRequest, dt: float,
             substeps: int = 1) -> AircraftState:
    """Advance the closed-loop aircraft by dt using classical RK4.

    The FLCS runs once per substep (a digital inner loop); the resulting
    surfaces are held fixed while the 13 dynamic states integrate across
    that substep.  Bit-identical for identical inputs.
    """
    if dt <= 0.0:
        raise DynamicsError("step_rk4 requires dt > 0")
    if substeps < 1:
        raise DynamicsError("step_rk4 requires substeps >= 1")
    sub = dt / substeps
    for k in range(substeps):
        try:
            surfaces, state = flcs(state, request, sub)
            x = state.as_tuple()[:13]
            k1 = _deriv13(x, surfaces)
            k2 = _deriv13(tuple(xi + 0.5 * sub * ki for xi, ki in zip(x, k1)), surfaces)
            k3 = _deriv13(tuple(xi + 0.5 * sub * ki for xi, ki in zip(x, k2)), surfaces)
            k4 = _deriv13(tuple(xi + sub * ki for xi, ki in zip(x, k3)), surfaces)
            x = tuple(xi + (sub / 6.0) * (a + 2.0 * b + 2.0 * c + d)
                      for xi, a, b, c, d in zip(x, k1, k2, k3, k4))
        except (OverflowError, ZeroDivisionError, ValueError) as exc:
            raise DynamicsDivergedError(k) from exc
        if not all(math.isfinite(v) for v in x):
            raise DynamicsDivergedError(k)
        pow_clamped = min(max(x[12], 0.0), 100.0)
        state = AircraftState.from_tuple(x[:12] + (pow_clamped,
                                                   state.i_nz, state.i_ps, state.i_ny))
    return state


def _trim_residual_vector(alpha, de, throttle, vt, h):
    state = AircraftState(vt=vt, alpha=alpha, beta=0.0, phi=0.0, theta=alpha,
                          psi=0.0, p=0.0, q=0.0, r=0.0, pn=0.0, pe=0.0, h=h,
                          pow=tgear(throttle), i_nz=de, i_ps=0.0, i_ny=0.0)
    surfaces = SurfaceDeflections(elevator=de, aileron=0.0, rudder=0.0,
                                  throttle=throttle)
    d = _deriv13(state.as_tuple()[:13], surfaces)
    return (d[0], d[1], d[7]), state, surfaces   # (vt_dot, alpha_dot, q_dot)


def trim_solve(vt_target: float, h_target: float) -> TrimResult:
    """Straight-and-level trim at the requested airspeed and altitude.

    Damped Newton over (alpha, elevator, throttle) driving the (vt, alpha, q)
    rates to zero; the lateral channel is zero by symmetry and theta = alpha
    keeps the climb rate zero.  Raises TrimError with the best residual if
    the tolerance is not reached (e.g. targets outside the valid envelope,
    roughly vt in [250, 900] ft/s below 30k ft).
    """
    if not (math.isfinite(vt_target) and math.isfinite(h_target)) or vt_target <= 0:
        raise DynamicsError("trim targets must be finite with vt > 0")

    _, qbar = _atmosphere(vt_target, h_target)
    alpha = (WEIGHT / (qbar * S_REF) + CZ_0) / -CZ_A     # linear-lift first guess
    alpha = min(max(alpha, -0.15), 0.7)
    de = -(CM_0 + CM_A * alpha) / CM_DE * ELEVATOR_LIMIT
    throttle = 0.15
    z = [alpha, de, throttle]
    lo = [-0.17, -ELEVATOR_LIMIT, 0.0]
    hi = [0.70, ELEVATOR_LIMIT, 1.0]

    def fvec(zz):
        return _trim_residual_vector(zz[0], zz[1], zz[2], vt_target, h_target)[0]

    def norm(f):
        return math.sqrt(sum(v * v for v in f))

    f = fvec(z)
    best = norm(f)
    for _ in range(60):
        if best < 1e-10:
            break
        # finite-difference Jacobian, forward differences
        jac = []
        eps = [1e-6, 1e-4, 1e-5]
        for j in range(3):
            zp = list(z)
            zp[j] += eps[j]
            fp = fvec(zp)
            jac.append([(fp[i] - f[i]) / eps[j] for i in range(3)])
        # solve J dz = -f (3x3 Cramer)
        a = [[jac[0][i], jac[1][i], jac[2][i]] for i in range(3)]
        det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
               - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
               + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
        if det == 0.0 or not math.isfinite(det):
            break
        rhs = [-v for v in f]

        def solve3(col):
            m = [row[:] for row in a]
            for i in range(3):
                m[i][col] = rhs[i]
            return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) / det

        dz = [solve3(j) for j in range(3)]
        step = 1.0
        improved = False
        while step > 1e-4:
            zn = [min(max(z[j] + step * dz[j], lo[j]), hi[j]) for j in range(3)]
            fn = fvec(zn)
            if norm(fn) < norm(f):
                z, f = zn, fn
                best = min(best, norm(f))
                improved = True
                break
            step *= 0.5
        if not improved:
            break

    _, state, surfaces = _trim_residual_vector(z[0], z[1], z[2],
                                               vt_target, h_target)
    d16 = derivatives(state, surfaces)
    residual = math.sqrt(sum(v * v for i, v in enumerate(d16)
                             if i not in (9, 10, 11)))
    if residual >= 1e-4:
        raise TrimError(
            f"trim did not converge at vt={vt_target:g} ft/s, h={h_target:g} ft",
            residual)
    request = ControlRequest(nz_cmd=0.0, ps_cmd=0.0, ny_r_cmd=0.0,
                             throttle=z[2])
    return TrimResult(state=state, request=request, surfaces=surfaces,
                      residual=residual)


def constants_reference() -> str:
    """Markdown table of the model's named constants (gains and limits)."""
    rows = [
        ("weight", WEIGHT, "lbf"),
        ("wing area", S_REF, "ft^2"),
        ("reference span", B_REF, "ft"),
        ("mean chord", CBAR, "ft"),
        ("elevator limit", ELEVATOR_LIMIT, "deg"),
        ("aileron limit", AILERON_LIMIT, "deg"),
        ("rudder limit", RUDDER_LIMIT, "deg"),
        ("nz command range", f"[{NZ_CMD_MIN}, {NZ_CMD_MAX}]", "g"),
        ("ps command limit", f"±{PS_CMD_LIMIT:.4f}", "rad/s"),
        ("ny+r command limit", f"±{NY_R_CMD_LIMIT}", ""),
        ("KP_NZ / KI_NZ / KQ_DAMP", f"{KP_NZ} / {KI_NZ} / {KQ_DAMP}", "elevator channel"),
        ("KP_PS / KI_PS", f"{KP_PS} / {KI_PS}", "aileron channel"),
        ("KP_NYR / KI_NYR / KR_DAMP", f"{KP_NYR} / {KI_NYR} / {KR_DAMP}", "rudder channel"),
        ("trim envelope vt", f"[{TRIM_VT_MIN}, {TRIM_VT_MAX}]", "ft/s"),
        ("trim envelope h", f"[{TRIM_H_MIN}, {TRIM_H_MAX}]", "ft"),
    ]
    lines = ["| constant | value | units/notes |", "| --- | --- | --- |"]
    lines += [f"| {n} | {v} | {u} |" for n, v, u in rows]
    return "\n".join(lines) + "\n"
