"""Angle systems and the conversions between them.

Frames
------
earth : x north, y east, z down (toward the earth's centre), origin at take-off.
body  : x out the nose, y out the right wing, z out the floor.
wind  : x along the air-relative velocity.

Euler angles are the yaw-pitch-roll sequence (psi about z, theta about the
new y, phi about the final x).  Two-argument arctangents are used wherever
a quadrant matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from flightdae.errors import (
    GimbalSingularity,
    HoverSingularity,
    PureSideslip,
    UndefinedFlankAngle,
)

TWO_PI = 2.0 * math.pi
V_MIN_DEFAULT = 1.0  # m/s
GIMBAL_GUARD = 1e-6  # |cos(theta)| below this is treated as gimbal lock


@dataclass(frozen=True, slots=True)
class EulerAngles:
    phi: float
    theta: float
    psi: float


@dataclass(frozen=True, slots=True)
class BodyRates:
    p: float
    q: float
    r: float


@dataclass(frozen=True, slots=True)
class WindState:
    V: float
    alpha: float
    beta: float


@dataclass(frozen=True, slots=True)
class FlightPathAngles:
    theta_w: float
    psi_w: float
    climb_rate: float = 0.0


@dataclass(frozen=True, slots=True)
class GroundPosition:
    x_g: float
    y_g: float
    z_g: float


def wrap_pi(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped == -math.pi:
        return math.pi
    return wrapped


def wrap_two_pi(angle: float) -> float:
    """Wrap to [0, 2 pi)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


# --- Euler kinematics -------------------------------------------------------


def body_rates_from_euler_rates(euler: EulerAngles, euler_rates) -> BodyRates:
    """Body angular rates (p, q, r) from Euler-angle rates (phi_dot, theta_dot, psi_dot)."""
    phi_dot, theta_dot, psi_dot = euler_rates
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    sth, cth = math.sin(euler.theta), math.cos(euler.theta)
    return BodyRates(
        p=phi_dot - sth * psi_dot,
        q=cphi * theta_dot + cth * sphi * psi_dot,
        r=cth * cphi * psi_dot - sphi * theta_dot,
    )


def euler_rates_from_body_rates(euler: EulerAngles, rates: BodyRates) -> tuple[float, float, float]:
    """Solve the body-rate relations for the Euler-angle rates.

    The coefficient matrix has determinant cos(theta); the solve is refused
    when ``|cos(theta)| < 1e-6``.
    """
    cth = math.cos(euler.theta)
    if abs(cth) < GIMBAL_GUARD:
        raise GimbalSingularity(f"gimbal singularity: theta = {euler.theta!r} rad")
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    qs_rc = rates.q * sphi + rates.r * cphi
    psi_dot = qs_rc / cth
    theta_dot = rates.q * cphi - rates.r * sphi
    phi_dot = rates.p + math.sin(euler.theta) * psi_dot
    return phi_dot, theta_dot, psi_dot


def body_to_earth_dcm(euler: EulerAngles) -> np.ndarray:
    """Direction-cosine matrix taking body-axes components to earth-axes components."""
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    sth, cth = math.sin(euler.theta), math.cos(euler.theta)
    spsi, cpsi = math.sin(euler.psi), math.cos(euler.psi)
    return np.array(
        [
            [cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi],
            [cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi],
            [-sth, sphi * cth, cphi * cth],
        ]
    )


def body_to_earth(euler: EulerAngles, vec) -> tuple[float, float, float]:
    """Rotate a body-axes vector into earth axes without building an array."""
    x, y, z = vec
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    sth, cth = math.sin(euler.theta), math.cos(euler.theta)
    spsi, cpsi = math.sin(euler.psi), math.cos(euler.psi)
    # roll, then pitch, then yaw
    y1 = cphi * y - sphi * z
    z1 = sphi * y + cphi * z
    x2 = cth * x + sth * z1
    z2 = -sth * x + cth * z1
    return cpsi * x2 - spsi * y1, spsi * x2 + cpsi * y1, z2


def earth_to_body(euler: EulerAngles, vec) -> tuple[float, float, float]:
    x, y, z = vec
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    sth, cth = math.sin(euler.theta), math.cos(euler.theta)
    spsi, cpsi = math.sin(euler.psi), math.cos(euler.psi)
    x1 = cpsi * x + spsi * y
    y1 = -spsi * x + cpsi * y
    x2 = cth * x1 - sth * z
    z2 = sth * x1 + cth * z
    return x2, cphi * y1 + sphi * z2, -sphi * y1 + cphi * z2


# --- wind angles -------------------------------------------------------------


def body_velocity_from_wind(w: WindState) -> tuple[float, float, float]:
    """Body-axes velocity (u, v, w) from airspeed, angle of attack and sideslip."""
    cb = math.cos(w.beta)
    return (
        w.V * math.cos(w.alpha) * cb,
        w.V * math.sin(w.beta),
        w.V * math.sin(w.alpha) * cb,
    )


def wind_from_body_velocity(u: float, v: float, w: float, v_min: float = V_MIN_DEFAULT) -> WindState:
    V = math.sqrt(u * u + v * v + w * w)
    if V < v_min:
        raise HoverSingularity(f"hover singularity: V = {V:.6g} m/s below {v_min} m/s")
    if u == 0.0 and w == 0.0:
        raise PureSideslip("pure sideslip: angle of attack undefined for u = w = 0")
    # clamp guards |v/V| creeping past 1 by rounding
    beta = math.asin(max(-1.0, min(1.0, v / V)))
    return WindState(V=V, alpha=math.atan2(w, u), beta=beta)


def flank_angle(u: float, v: float) -> float:
    """Flank angle of attack: the sideslip projected into the body x-y plane."""
    if u == 0.0:
        raise UndefinedFlankAngle("flank angle undefined for u = 0")
    return math.atan2(v, u)


# --- trajectory kinematics ---------------------------------------------------


def earth_velocity(wind: WindState, euler: EulerAngles) -> tuple[float, float, float]:
    """Ground-axes velocity (x_dot, y_dot, z_dot) for still air."""
    return body_to_earth(euler, body_velocity_from_wind(wind))


def flight_path_angles(earth_vel, V: float, v_min: float = V_MIN_DEFAULT) -> FlightPathAngles:
    """Elevation and azimuth of the velocity vector, plus the climb rate.

    ``psi_w`` comes from the full-quadrant arctangent of the horizontal
    velocity and is wrapped to [0, 2 pi).
    """
    if V < v_min:
        raise HoverSingularity(f"hover singularity: V = {V:.6g} m/s below {v_min} m/s")
    xd, yd, zd = earth_vel
    s = max(-1.0, min(1.0, -zd / V))
    theta_w = math.asin(s)
    psi_w = wrap_two_pi(math.atan2(yd, xd))
    return FlightPathAngles(theta_w=theta_w, psi_w=psi_w, climb_rate=V * s)


def path_angle_residuals(wind: WindState, euler: EulerAngles, fpa: FlightPathAngles) -> tuple[float, float]:
    """Residuals of the two algebraic identities tying path angles to attitude.

    The first concerns the lateral (heading-relative) velocity component,
    the second the vertical one.  Both vanish for a consistent state.
    """
    sa, ca = math.sin(wind.alpha), math.cos(wind.alpha)
    sb, cb = math.sin(wind.beta), math.cos(wind.beta)
    sphi, cphi = math.sin(euler.phi), math.cos(euler.phi)
    sth, cth = math.sin(euler.theta), math.cos(euler.theta)
    r_lateral = math.cos(fpa.theta_w) * math.sin(fpa.psi_w - euler.psi) - (cphi * sb - sphi * sa * cb)
    r_vertical = math.sin(fpa.theta_w) - (sth * ca * cb - cth * sphi * sb - cth * cphi * sa * cb)
    return r_lateral, r_vertical


def altitude_from_position(z_g: float, h_ini: float) -> float:
    """Geometric altitude; z_g grows downward, so climbing makes it negative."""
    return h_ini - z_g
