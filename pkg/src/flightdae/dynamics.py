"""Rigid-body equations of motion and the full state-derivative closure.

Translational motion is written in wind axes, so the integrated variables
are airspeed, sideslip and angle of attack rather than body velocity
components.  Rotational motion stays in body axes with the general
(asymmetric) inertia tensor; the angular accelerations use the adjugate
of the inertia matrix so no matrix inverse is formed at run time.

Thrust sign in the sideslip equation
------------------------------------
Projecting the body-axes momentum balance onto the side wind axis gives a
thrust term ``-T cos(alpha) sin(beta)``.  Some published statements of the
wind-axes equations carry ``+T cos(alpha) sin(beta)``.  The default here is
the projection-consistent sign; ``literal=True`` reproduces the ``+`` form
for comparison.  Only that one term differs between the two modes.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from flightdae import aero, atmosphere, axes
from flightdae.aero import AeroCoefficients, ControlInputs, ForcesMoments
from flightdae.airframe import AirframeParams, InertiaTensor
from flightdae.atmosphere import G0
from flightdae.axes import V_MIN_DEFAULT, BodyRates, EulerAngles, GroundPosition, WindState
from flightdae.errors import (
    FlightDAEError,
    HoverSingularity,
    NotSymmetric,
    SideslipSingularity,
    SingularInertia,
    UndefinedFlankAngle,
    annotate,
)

SIDESLIP_GUARD = 1e-6

STATE_NAMES = ("V", "beta", "alpha", "p", "q", "r", "phi", "theta", "psi", "x_g", "y_g", "z_g")


@dataclass(frozen=True, slots=True)
class FlightState:
    """The twelve integrated flight variables."""

    V: float
    beta: float
    alpha: float
    p: float
    q: float
    r: float
    phi: float
    theta: float
    psi: float
    x_g: float = 0.0
    y_g: float = 0.0
    z_g: float = 0.0

    @property
    def wind(self) -> WindState:
        return WindState(self.V, self.alpha, self.beta)

    @property
    def rates(self) -> BodyRates:
        return BodyRates(self.p, self.q, self.r)

    @property
    def euler(self) -> EulerAngles:
        return EulerAngles(self.phi, self.theta, self.psi)

    @property
    def position(self) -> GroundPosition:
        return GroundPosition(self.x_g, self.y_g, self.z_g)

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, x) -> "FlightState":
        return cls(*(float(v) for v in x))

    @classmethod
    def compose(cls, wind: WindState, rates: BodyRates, euler: EulerAngles, position: GroundPosition | None = None):
        position = position or GroundPosition(0.0, 0.0, 0.0)
        return cls(
            wind.V, wind.beta, wind.alpha,
            rates.p, rates.q, rates.r,
            euler.phi, euler.theta, euler.psi,
            position.x_g, position.y_g, position.z_g,
        )


@dataclass(frozen=True, slots=True)
class StateDerivative:
    V_dot: float
    beta_dot: float
    alpha_dot: float
    p_dot: float
    q_dot: float
    r_dot: float
    phi_dot: float
    theta_dot: float
    psi_dot: float
    x_g_dot: float
    y_g_dot: float
    z_g_dot: float

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


@dataclass(frozen=True, slots=True)
class AuxiliaryMoments:
    T1: float
    T2: float
    T3: float


@dataclass(frozen=True, slots=True)
class DerivedOutputs:
    """Algebraic variables produced while evaluating one state derivative."""

    qbar: float
    C_L: float
    C_D: float
    C_C: float
    C_x: float
    C_y: float
    C_z: float
    C_l: float
    C_m: float
    C_n: float
    F_x: float
    F_y: float
    F_z: float
    M_x: float
    M_y: float
    M_z: float
    T1: float
    T2: float
    T3: float
    h: float
    rho: float
    theta_w: float
    psi_w: float
    alpha_f: float
    climb_rate: float


DERIVED_NAMES = tuple(f.name for f in fields(DerivedOutputs))


# --- angular momentum --------------------------------------------------------


def auxiliary_moments(rates: BodyRates, inertia: InertiaTensor, moments) -> AuxiliaryMoments:
    """Applied moments plus the gyroscopic coupling terms."""
    p, q, r = rates.p, rates.q, rates.r
    A, B, C, D, E, F = inertia.A, inertia.B, inertia.C, inertia.D, inertia.E, inertia.F
    M_x, M_y, M_z = moments
    return AuxiliaryMoments(
        T1=(B - C) * q * r + (E * q - F * r) * p + (q * q - r * r) * D + M_x,
        T2=(C - A) * r * p + (F * r - D * p) * q + (r * r - p * p) * E + M_y,
        T3=(A - B) * p * q + (D * p - E * q) * r + (p * p - q * q) * F + M_z,
    )


def angular_accelerations(T0: float, inertia: InertiaTensor, aux: AuxiliaryMoments) -> tuple[float, float, float]:
    """Body angular accelerations from the adjugate of the inertia matrix."""
    if not T0 > 0.0:
        raise SingularInertia(f"singular inertia: determinant {T0!r}")
    A, B, C, D, E, F = inertia.A, inertia.B, inertia.C, inertia.D, inertia.E, inertia.F
    T1, T2, T3 = aux.T1, aux.T2, aux.T3
    c_xy = F * C + E * D
    c_xz = F * D + E * B
    c_yz = A * D + E * F
    p_dot = ((B * C - D * D) * T1 + c_xy * T2 + c_xz * T3) / T0
    q_dot = ((A * C - E * E) * T2 + c_yz * T3 + c_xy * T1) / T0
    r_dot = ((A * B - F * F) * T3 + c_xz * T1 + c_yz * T2) / T0
    return p_dot, q_dot, r_dot


def angular_accelerations_symmetric(inertia: InertiaTensor, rates: BodyRates, moments) -> tuple[float, float, float]:
    """Reduced form for an airframe with x_b-z_b as a plane of symmetry."""
    if inertia.D != 0.0 or inertia.F != 0.0:
        raise NotSymmetric(f"not symmetric: D = {inertia.D!r}, F = {inertia.F!r}")
    A, B, C, E = inertia.A, inertia.B, inertia.C, inertia.E
    p, q, r = rates.p, rates.q, rates.r
    L, M, N = moments
    lateral = A * C - E * E
    p_dot = ((B * C - E * E - C * C) * q * r + (A - B + C) * E * p * q + C * L + E * N) / lateral
    q_dot = (E * r * r - E * p * p + (C - A) * p * r + M) / B
    r_dot = ((A * A + E * E - A * B) * p * q + (B - A - C) * E * q * r + A * N + E * L) / lateral
    return p_dot, q_dot, r_dot


# --- linear momentum ---------------------------------------------------------


def wind_axes_forces(
    alpha: float,
    beta: float,
    phi: float,
    theta: float,
    qbar: float,
    C_x: float,
    C_y: float,
    C_z: float,
    thrust: float,
    m: float,
    S: float,
    g0: float = G0,
    literal: bool = False,
) -> tuple[float, float, float]:
    """Aerodynamic + gravity + thrust force along the wind axes.

    Returns the components along x_w, y_w and the stability z axis (body z
    rotated by alpha about body y).  These equal mass times the inertial
    acceleration along the same directions.
    """
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    sphi, cphi = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    qS = qbar * S
    mg = m * g0
    thrust_side = thrust * ca * sb if literal else -thrust * ca * sb
    f_x = (
        qS * (C_x * ca * cb + C_y * sb + C_z * sa * cb)
        + mg * (cth * sphi * sb - sth * ca * cb + cth * cphi * sa * cb)
        + thrust * ca * cb
    )
    f_y = (
        qS * (C_y * cb - C_x * ca * sb - C_z * sa * sb)
        + mg * (cth * sphi * cb + sth * ca * sb - cth * cphi * sa * sb)
        + thrust_side
    )
    f_z = qS * (C_z * ca - C_x * sa) + mg * (sth * sa + cth * cphi * ca) - thrust * sa
    return f_x, f_y, f_z


def linear_accelerations(
    state: FlightState,
    params: AirframeParams,
    qbar: float,
    coeffs: AeroCoefficients,
    controls: ControlInputs,
    *,
    literal: bool = False,
    v_min: float = V_MIN_DEFAULT,
    g0: float = G0,
) -> tuple[float, float, float]:
    """Rates of airspeed, sideslip and angle of attack."""
    V, alpha, beta = state.V, state.alpha, state.beta
    if V < v_min:
        raise HoverSingularity(f"hover singularity: V = {V:.6g} m/s below {v_min} m/s")
    cb = math.cos(beta)
    if abs(cb) < SIDESLIP_GUARD:
        raise SideslipSingularity(f"sideslip singularity: beta = {beta!r} rad")
    m = params.m
    f_x, f_y, f_z = wind_axes_forces(
        alpha, beta, state.phi, state.theta, qbar,
        coeffs.C_x, coeffs.C_y, coeffs.C_z, controls.thrust,
        m, params.S, g0, literal,
    )
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb = math.sin(beta)
    p, q, r = state.p, state.q, state.r
    V_dot = f_x / m
    beta_dot = f_y / (m * V) + (-r * ca + p * sa)
    alpha_dot = (f_z / (m * V) + (q * cb - r * sa * sb - p * ca * sb)) / cb
    return V_dot, beta_dot, alpha_dot


def body_velocity_rates(state: FlightState, V_dot: float, beta_dot: float, alpha_dot: float):
    """(u_dot, v_dot, w_dot) from differentiating the wind-to-body velocity map."""
    V, alpha, beta = state.V, state.alpha, state.beta
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    u_dot = V_dot * ca * cb - V * sa * cb * alpha_dot - V * ca * sb * beta_dot
    v_dot = V_dot * sb + V * cb * beta_dot
    w_dot = V_dot * sa * cb + V * ca * cb * alpha_dot - V * sa * sb * beta_dot
    return u_dot, v_dot, w_dot


def body_axes_residual(
    state: FlightState,
    derivative: StateDerivative,
    forces: ForcesMoments,
    controls: ControlInputs,
    m: float,
    g0: float = G0,
) -> tuple[float, float, float]:
    """Residual of the body-axes momentum balance for a candidate derivative.

    Zero (to rounding) whenever ``derivative`` is consistent with the forces.
    """
    u, v, w = axes.body_velocity_from_wind(state.wind)
    u_dot, v_dot, w_dot = body_velocity_rates(state, derivative.V_dot, derivative.beta_dot, derivative.alpha_dot)
    p, q, r = state.p, state.q, state.r
    sphi, cphi = math.sin(state.phi), math.cos(state.phi)
    sth, cth = math.sin(state.theta), math.cos(state.theta)
    res_x = m * (u_dot - v * r + w * q) - forces.F_x + m * g0 * sth - controls.thrust
    res_y = m * (v_dot - w * p + u * r) - forces.F_y - m * g0 * cth * sphi
    res_z = m * (w_dot - u * q + v * p) - forces.F_z - m * g0 * cth * cphi
    return res_x, res_y, res_z


# --- full closure ------------------------------------------------------------


def evaluate(
    state: FlightState,
    controls: ControlInputs,
    params: AirframeParams,
    *,
    literal: bool = False,
    v_min: float = V_MIN_DEFAULT,
) -> tuple[StateDerivative, DerivedOutputs]:
    """Evaluate every algebraic variable once, in dependency order, then the rates.

    Errors are tagged with the equation group that raised them.
    """
    group = "altitude"
    try:
        h = axes.altitude_from_position(state.z_g, params.h_ini)
        group = "air density"
        rho = atmosphere.density(h)
        group = "dynamic pressure"
        if state.V < v_min:
            raise HoverSingularity(f"hover singularity: V = {state.V:.6g} m/s below {v_min} m/s")
        qbar = aero.dynamic_pressure(rho, state.V)
        group = "force coefficients"
        C_L, C_D, C_C = aero.lift_drag_side(state.alpha, state.beta, params.force_constants, params.alpha_warn)
        C_x, C_y, C_z = aero.body_force_coefficients(C_L, C_D, C_C, state.alpha, state.beta)
        group = "moment coefficients"
        rates = state.rates
        C_l, C_m, C_n = aero.moment_coefficients(
            state.alpha, state.beta, rates, state.V, controls, params.derivatives, params.b, params.c, v_min
        )
        coeffs = AeroCoefficients(C_L, C_D, C_C, C_x, C_y, C_z, C_l, C_m, C_n)
        group = "forces and moments"
        fm = aero.forces_and_moments(qbar, coeffs, params.S, params.b, params.c)
        group = "angular momentum"
        aux = auxiliary_moments(rates, params.inertia, (fm.M_x, fm.M_y, fm.M_z))
        p_dot, q_dot, r_dot = angular_accelerations(params.T0, params.inertia, aux)
        group = "linear momentum"
        V_dot, beta_dot, alpha_dot = linear_accelerations(
            state, params, qbar, coeffs, controls, literal=literal, v_min=v_min
        )
        group = "euler kinematics"
        euler = state.euler
        phi_dot, theta_dot, psi_dot = axes.euler_rates_from_body_rates(euler, rates)
        group = "trajectory kinematics"
        wind = state.wind
        u, v, w = axes.body_velocity_from_wind(wind)
        x_dot, y_dot, z_dot = axes.body_to_earth(euler, (u, v, w))
        fpa = axes.flight_path_angles((x_dot, y_dot, z_dot), state.V, v_min)
        try:
            alpha_f = axes.flank_angle(u, v)
        except UndefinedFlankAngle:
            alpha_f = math.nan
    except FlightDAEError as exc:
        raise annotate(exc, group)

    derivative = StateDerivative(
        V_dot, beta_dot, alpha_dot, p_dot, q_dot, r_dot,
        phi_dot, theta_dot, psi_dot, x_dot, y_dot, z_dot,
    )
    derived = DerivedOutputs(
        qbar, C_L, C_D, C_C, C_x, C_y, C_z, C_l, C_m, C_n,
        fm.F_x, fm.F_y, fm.F_z, fm.M_x, fm.M_y, fm.M_z,
        aux.T1, aux.T2, aux.T3,
        h, rho, fpa.theta_w, fpa.psi_w, alpha_f, fpa.climb_rate,
    )
    return derivative, derived


def state_derivative(
    state: FlightState,
    controls: ControlInputs,
    params: AirframeParams,
    *,
    literal: bool = False,
    v_min: float = V_MIN_DEFAULT,
) -> StateDerivative:
    return evaluate(state, controls, params, literal=literal, v_min=v_min)[0]
