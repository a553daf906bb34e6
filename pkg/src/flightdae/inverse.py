"""Inverse simulation: recover control histories from a prescribed path.

Inputs are sampled ground coordinates (x_g, y_g, z_g)(t) plus one extra
constrained flight variable, either sideslip or bank angle.  The solution
proceeds in two sweeps.

1. Translational sweep.  Finite differences give the ground velocity and
   acceleration at each sample.  A damped Newton iteration then solves for
   (alpha, beta, phi, theta, psi, thrust) so that the three wind-axes
   momentum balances, the two path-angle identities and the extra
   constraint all hold.  Forces depend on attitude and thrust only, never on
   the control surfaces, so this subsystem closes on its own.  Each sample
   is warm-started from the previous ones.
2. Rotational sweep.  The attitude history is differentiated to Euler
   rates and mapped to body rates; those are differentiated again to body
   angular accelerations.  The angular-momentum balance then fixes the
   required moments, hence the moment coefficients, and the coefficient
   relations are solved for aileron, elevator and rudder.

Differentiation amplifies noise twice over (positions to accelerations,
attitude to angular accelerations).  No smoothing is applied; prescribed
paths must be smooth.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from flightdae import aero, atmosphere, axes
from flightdae.aero import DEFLECTION_LIMIT, ControlInputs, StallWarning
from flightdae.airframe import AirframeParams
from flightdae.atmosphere import G0
from flightdae.axes import V_MIN_DEFAULT, BodyRates, EulerAngles, FlightPathAngles, WindState
from flightdae.dynamics import STATE_NAMES, FlightState, auxiliary_moments, body_velocity_rates, evaluate, wind_axes_forces
from flightdae.errors import ConvergenceError, FlightDAEError, InverseError, ValidationError
from flightdae.sim import CONTROL_NAMES, ControlSchedule, trim_steady_level

log = logging.getLogger(__name__)

CONSTRAINTS = ("beta", "phi")
MIN_SAMPLES = 5
UNKNOWNS = ("alpha", "beta", "phi", "theta", "psi", "thrust")

# Newton iterates are kept inside this box; leaving it means no admissible solution.
_ALPHA_BOUND = 0.5 * math.pi - 1e-3
_BETA_BOUND = 0.5 * math.pi - 1e-2
_THETA_BOUND = 0.5 * math.pi - 1e-3
_FD_STEP = 1e-6
_MAX_HALVINGS = 10


@dataclass
class TrajectorySpec:
    """Uniformly sampled desired path plus the extra constrained variable."""

    t: np.ndarray
    x_g: np.ndarray
    y_g: np.ndarray
    z_g: np.ndarray
    constraint: str = "beta"
    constraint_values: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x_g = np.asarray(self.x_g, dtype=float)
        self.y_g = np.asarray(self.y_g, dtype=float)
        self.z_g = np.asarray(self.z_g, dtype=float)
        n = self.t.size
        if n < MIN_SAMPLES:
            raise ValidationError(f"trajectory needs at least {MIN_SAMPLES} samples, got {n}")
        if self.x_g.size != n or self.y_g.size != n or self.z_g.size != n:
            raise ValidationError("trajectory columns differ in length")
        if self.constraint not in CONSTRAINTS:
            raise ValidationError(f"constraint must be one of {CONSTRAINTS}, got {self.constraint!r}")
        if self.constraint_values is None:
            self.constraint_values = np.zeros(n)
        self.constraint_values = np.asarray(self.constraint_values, dtype=float)
        if self.constraint_values.size != n:
            raise ValidationError("constraint column differs in length")
        steps = np.diff(self.t)
        if np.any(steps <= 0.0):
            raise ValidationError("trajectory times must be strictly increasing")
        dt = (self.t[-1] - self.t[0]) / (n - 1)
        if np.max(np.abs(steps - dt)) > 1e-6 * dt:
            raise ValidationError("non-uniform sampling: finite-difference stencils need a constant step")
        for arr in (self.x_g, self.y_g, self.z_g, self.constraint_values):
            if not np.all(np.isfinite(arr)):
                raise ValidationError("non-finite trajectory value")

    @property
    def dt(self) -> float:
        return (self.t[-1] - self.t[0]) / (self.t.size - 1)

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.x_g, self.y_g, self.z_g])


@dataclass(frozen=True)
class InverseOptions:
    tol: float = 1e-8
    max_iter: int = 50
    literal: bool = False
    v_min: float = V_MIN_DEFAULT
    deflection_limit: float = DEFLECTION_LIMIT
    thrust_max: float | None = None


class KinematicTargets(NamedTuple):
    velocity: tuple[float, float, float]
    acceleration: tuple[float, float, float]
    V: float
    V_dot: float
    theta_w: float
    psi_w: float
    climb_rate: float
    h: float
    constraint_value: float


class StepSolution(NamedTuple):
    alpha: float
    beta: float
    phi: float
    theta: float
    psi: float
    thrust: float
    residual: float
    iterations: int


@dataclass
class InverseSolution:
    """Per-sample controls, reconstructed states and solver diagnostics."""

    t: np.ndarray
    controls: np.ndarray  # (n, 4): delta_l, delta_m, delta_n, thrust
    states: np.ndarray  # (n, 12) in FlightState order
    residual: np.ndarray
    iterations: np.ndarray
    saturation: np.ndarray  # (n, 4) bool, same column order as controls
    moment_coefficients: np.ndarray  # (n, 3): C_l, C_m, C_n
    angular_acceleration: np.ndarray  # (n, 3): p_dot, q_dot, r_dot
    targets: list = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return self.t.size

    def column(self, name: str) -> np.ndarray:
        if name in CONTROL_NAMES:
            return self.controls[:, CONTROL_NAMES.index(name)]
        if name in STATE_NAMES:
            return self.states[:, STATE_NAMES.index(name)]
        raise KeyError(name)

    def state_at(self, i: int) -> FlightState:
        return FlightState.from_array(self.states[i])

    def control_at(self, i: int) -> ControlInputs:
        return ControlInputs(*self.controls[i])

    def schedule(self, mode: str = "linear") -> ControlSchedule:
        return ControlSchedule(self.t - self.t[0], self.controls, mode)


# --- kinematics ----------------------------------------------------------------


def _second_derivative(x: np.ndarray, dt: float) -> np.ndarray:
    """Three-point second difference inside, second-order one-sided at the ends."""
    out = np.empty_like(x)
    out[1:-1] = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / dt**2
    out[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / dt**2
    out[-1] = (2.0 * x[-1] - 5.0 * x[-2] + 4.0 * x[-3] - x[-4]) / dt**2
    return out


def differentiate_trajectory(spec: TrajectorySpec) -> tuple[np.ndarray, np.ndarray]:
    """Ground velocity and acceleration, both (n, 3), second-order accurate."""
    pos = spec.positions
    dt = spec.dt
    vel = np.gradient(pos, dt, axis=0, edge_order=2)
    acc = _second_derivative(pos, dt)
    return vel, acc


def kinematic_inversion(
    velocity,
    acceleration,
    h: float,
    constraint_value: float = 0.0,
    v_min: float = V_MIN_DEFAULT,
) -> KinematicTargets:
    """Airspeed, path angles and climb rate implied by the ground velocity."""
    vel = tuple(float(v) for v in velocity)
    acc = tuple(float(a) for a in acceleration)
    V = math.sqrt(vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2)
    fpa = axes.flight_path_angles(vel, V, v_min)
    V_dot = (vel[0] * acc[0] + vel[1] * acc[1] + vel[2] * acc[2]) / V
    return KinematicTargets(vel, acc, V, V_dot, fpa.theta_w, fpa.psi_w, fpa.climb_rate, h, constraint_value)


# --- translational Newton solve ------------------------------------------------


def step_residual(
    z,
    targets: KinematicTargets,
    params: AirframeParams,
    constraint: str = "beta",
    literal: bool = False,
) -> np.ndarray:
    """Scaled residuals for unknowns z = (alpha, beta, phi, theta, psi, thrust / (m g0)).

    Rows: momentum balance along x_w, y_w and the stability z axis (scaled
    by weight), the lateral and vertical path-angle identities, and the
    extra constraint.
    """
    alpha, beta, phi, theta, psi, thrust_scaled = (float(v) for v in z)
    m = params.m
    mg = m * G0
    euler = EulerAngles(phi, theta, psi)
    a_x, a_y, a_z = axes.earth_to_body(euler, targets.acceleration)
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    acc_xw = a_x * ca * cb + a_y * sb + a_z * sa * cb
    acc_yw = -a_x * ca * sb + a_y * cb - a_z * sa * sb
    acc_zs = -a_x * sa + a_z * ca

    V = targets.V
    qbar = aero.dynamic_pressure(atmosphere.density(targets.h), V)
    # stall is reported once per converged sample, not per residual evaluation
    C_L, C_D, C_C = aero.lift_drag_side(alpha, beta, params.force_constants, math.inf)
    C_x, C_y, C_z = aero.body_force_coefficients(C_L, C_D, C_C, alpha, beta)
    f_x, f_y, f_z = wind_axes_forces(
        alpha, beta, phi, theta, qbar, C_x, C_y, C_z, thrust_scaled * mg, m, params.S, G0, literal
    )
    r_lat, r_vert = axes.path_angle_residuals(
        WindState(V, alpha, beta), euler, FlightPathAngles(targets.theta_w, targets.psi_w)
    )
    fixed = beta if constraint == "beta" else phi
    return np.array(
        [
            (f_x - m * acc_xw) / mg,
            (f_y - m * acc_yw) / mg,
            (f_z - m * acc_zs) / mg,
            r_lat,
            r_vert,
            fixed - targets.constraint_value,
        ]
    )


def residual_jacobian(fun, z: np.ndarray, step: float = _FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of ``fun`` at ``z``."""
    n = z.size
    cols = []
    for j in range(n):
        dz = np.zeros(n)
        dz[j] = step
        cols.append((fun(z + dz) - fun(z - dz)) / (2.0 * step))
    return np.column_stack(cols)


def _project(z: np.ndarray, thrust_cap: float | None) -> np.ndarray:
    z[0] = min(max(z[0], -_ALPHA_BOUND), _ALPHA_BOUND)
    z[1] = min(max(z[1], -_BETA_BOUND), _BETA_BOUND)
    z[3] = min(max(z[3], -_THETA_BOUND), _THETA_BOUND)
    if thrust_cap is not None:
        z[5] = min(z[5], thrust_cap)
    return z


def inverse_step(
    guess,
    targets: KinematicTargets,
    params: AirframeParams,
    *,
    constraint: str = "beta",
    tol: float = 1e-8,
    max_iter: int = 50,
    literal: bool = False,
    thrust_max: float | None = None,
) -> StepSolution:
    """Damped Newton solve of the translational subsystem at one sample.

    ``guess`` is a previous :class:`StepSolution` or any sequence
    (alpha, beta, phi, theta, psi, thrust).  The step is halved (at most ten
    times) whenever the residual norm would grow.
    """
    mg = params.m * G0
    z = np.array([float(v) for v in tuple(guess)[:6]])
    z[5] /= mg
    thrust_cap = None if thrust_max is None else thrust_max / mg
    z = _project(z, thrust_cap)

    def fun(v):
        return step_residual(v, targets, params, constraint, literal)

    r = fun(z)
    norm = float(np.max(np.abs(r)))
    it = 0
    while norm > tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"no convergence after {max_iter} iterations: residual {norm:.3e} "
                f"(alpha = {z[0]:.4f} rad, thrust = {z[5] * mg:.1f} N)",
                residual=norm,
                iterations=it,
            )
        it += 1
        J = residual_jacobian(fun, z)
        try:
            dz = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian: {exc}", residual=norm, iterations=it) from exc
        lam = 1.0
        for _ in range(_MAX_HALVINGS + 1):
            z_try = _project(z + lam * dz, thrust_cap)
            r_try = fun(z_try)
            norm_try = float(np.max(np.abs(r_try)))
            if norm_try < norm:
                break
            lam *= 0.5
        z, r, norm = z_try, r_try, norm_try
    return StepSolution(z[0], z[1], z[2], z[3], z[4], z[5] * mg, norm, it)


def initial_guess(targets: KinematicTargets, params: AirframeParams, constraint: str) -> tuple:
    """Level-trim attitude rotated onto the path, with the bank or sideslip imposed."""
    trim = trim_steady_level(targets.V, targets.h, params)
    beta = targets.constraint_value if constraint == "beta" else 0.0
    phi = targets.constraint_value if constraint == "phi" else 0.0
    psi = axes.wrap_pi(targets.psi_w)
    return (trim.alpha, beta, phi, targets.theta_w + trim.alpha, psi, trim.thrust)


# --- rotational sweep ------------------------------------------------------------


def _unwrap(angle: float, reference: float) -> float:
    return reference + axes.wrap_pi(angle - reference)


def inverse_simulate(
    spec: TrajectorySpec,
    params: AirframeParams,
    options: InverseOptions | None = None,
) -> InverseSolution:
    """Recover the four control histories that fly ``spec``."""
    opts = options or InverseOptions()
    n = spec.t.size
    dt = spec.dt
    vel, acc = differentiate_trajectory(spec)
    steps: list[StepSolution] = []
    targets: list[KinematicTargets] = []

    for k in range(n):
        try:
            h = axes.altitude_from_position(spec.z_g[k], params.h_ini)
            tgt = kinematic_inversion(vel[k], acc[k], h, spec.constraint_values[k], opts.v_min)
            if k == 0:
                guess = initial_guess(tgt, params, spec.constraint)
            elif k == 1:
                guess = steps[0][:6]
            else:
                a, b = np.array(steps[-1][:6]), np.array(steps[-2][:6])
                guess = tuple(2.0 * a - b)
            sol = inverse_step(
                guess, tgt, params,
                constraint=spec.constraint, tol=opts.tol, max_iter=opts.max_iter,
                literal=opts.literal, thrust_max=opts.thrust_max,
            )
        except FlightDAEError as exc:
            raise InverseError(
                f"inverse simulation failed at sample {k} (t = {spec.t[k]:.6g} s): {exc}",
                index=k, t=float(spec.t[k]), cause=exc,
            ) from exc
        if k > 0:
            # keep roll and heading continuous so they can be differentiated
            sol = sol._replace(
                phi=_unwrap(sol.phi, steps[-1].phi),
                psi=_unwrap(sol.psi, steps[-1].psi),
            )
        if sol.alpha > params.alpha_warn:
            warnings.warn(
                f"sample {k}: required angle of attack {sol.alpha:.4f} rad exceeds stall threshold",
                StallWarning,
                stacklevel=2,
            )
        steps.append(sol)
        targets.append(tgt)

    alpha = np.array([s.alpha for s in steps])
    beta = np.array([s.beta for s in steps])
    phi = np.array([s.phi for s in steps])
    theta = np.array([s.theta for s in steps])
    psi = np.array([s.psi for s in steps])
    thrust = np.array([s.thrust for s in steps])
    V = np.array([tg.V for tg in targets])

    phi_dot = np.gradient(phi, dt, edge_order=2)
    theta_dot = np.gradient(theta, dt, edge_order=2)
    psi_dot = np.gradient(psi, dt, edge_order=2)
    rates = np.array(
        [
            _rates_tuple(axes.body_rates_from_euler_rates(EulerAngles(phi[k], theta[k], psi[k]), (phi_dot[k], theta_dot[k], psi_dot[k])))
            for k in range(n)
        ]
    )
    omega_dot = np.gradient(rates, dt, axis=0, edge_order=2)

    inertia = params.inertia
    I = inertia.matrix()
    sd = params.derivatives
    controls = np.empty((n, 4))
    coeffs = np.empty((n, 3))
    for k in range(n):
        p, q, r = rates[k]
        T1, T2, T3 = I @ omega_dot[k]
        gyro = auxiliary_moments(BodyRates(p, q, r), inertia, (0.0, 0.0, 0.0))
        M_x, M_y, M_z = T1 - gyro.T1, T2 - gyro.T2, T3 - gyro.T3
        qS = aero.dynamic_pressure(atmosphere.density(targets[k].h), V[k]) * params.S
        C_l, C_m, C_n = M_x / (qS * params.b), M_y / (qS * params.c), M_z / (qS * params.b)
        delta_m = aero.elevator_from_pitch_coefficient(C_m, alpha[k], q, V[k], sd, params.c, opts.v_min)
        delta_l, delta_n = aero.aileron_rudder_from_roll_yaw(C_l, C_n, beta[k], p, r, V[k], sd, params.b, opts.v_min)
        controls[k] = (delta_l, delta_m, delta_n, thrust[k])
        coeffs[k] = (C_l, C_m, C_n)

    lim = opts.deflection_limit
    saturation = np.column_stack(
        [np.abs(controls[:, 0]) > lim, np.abs(controls[:, 1]) > lim, np.abs(controls[:, 2]) > lim, controls[:, 3] < 0.0]
    )
    if saturation.any():
        log.warning("control limits exceeded at %d samples", int(saturation.any(axis=1).sum()))

    wrapped_phi = np.array([axes.wrap_pi(v) for v in phi])
    wrapped_psi = np.array([axes.wrap_pi(v) for v in psi])
    states = np.column_stack(
        [V, beta, alpha, rates[:, 0], rates[:, 1], rates[:, 2], wrapped_phi, theta, wrapped_psi, spec.x_g, spec.y_g, spec.z_g]
    )
    return InverseSolution(
        t=spec.t.copy(),
        controls=controls,
        states=states,
        residual=np.array([s.residual for s in steps]),
        iterations=np.array([s.iterations for s in steps]),
        saturation=saturation,
        moment_coefficients=coeffs,
        angular_acceleration=omega_dot,
        targets=targets,
    )


def _rates_tuple(rates: BodyRates) -> tuple[float, float, float]:
    return rates.p, rates.q, rates.r


def recheck(solution: InverseSolution, params: AirframeParams, options: InverseOptions | None = None) -> np.ndarray:
    """Re-evaluate every sample through the forward dynamics.

    Returns an (n, 2) array: column 0 is the mismatch between the inertial
    acceleration implied by the forward equations and the prescribed one
    (in units of g0); column 1 is the mismatch between forward and
    prescribed angular accelerations [rad/s^2].
    """
    opts = options or InverseOptions()
    out = np.empty((len(solution), 2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StallWarning)
        for k in range(len(solution)):
            state = solution.state_at(k)
            deriv, _ = evaluate(state, solution.control_at(k), params, literal=opts.literal, v_min=opts.v_min)
            u, v, w = axes.body_velocity_from_wind(state.wind)
            u_dot, v_dot, w_dot = body_velocity_rates(state, deriv.V_dot, deriv.beta_dot, deriv.alpha_dot)
            p, q, r = state.p, state.q, state.r
            a_body = (u_dot + q * w - r * v, v_dot + r * u - p * w, w_dot + p * v - q * u)
            a_earth = axes.body_to_earth(state.euler, a_body)
            target = solution.targets[k].acceleration
            out[k, 0] = max(abs(a - b) for a, b in zip(a_earth, target)) / G0
            out[k, 1] = float(np.max(np.abs(np.array([deriv.p_dot, deriv.q_dot, deriv.r_dot]) - solution.angular_acceleration[k])))
    return out
