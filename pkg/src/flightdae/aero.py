"""Aerodynamic coefficients, forces and moments.

Lift is linear in angle of attack, drag follows a parabolic polar and side
force is linear in sideslip.  The wind-axes coefficients are rotated into
body axes, and the three moment coefficients are linear in sideslip, angle
of attack, nondimensional body rates (scaled by b/V or c/V) and control
deflections.  The moment relations can be solved back for the deflections,
which is what inverse simulation needs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from flightdae.airframe import DEFAULT_ALPHA_WARN, AeroForceConstants, StabilityDerivatives
from flightdae.axes import V_MIN_DEFAULT, BodyRates
from flightdae.errors import HoverSingularity, SingularControlEffectiveness

DEFLECTION_LIMIT = 0.5  # rad


class StallWarning(UserWarning):
    """Angle of attack beyond the range where linear lift is credible."""


@dataclass(frozen=True, slots=True)
class ControlInputs:
    delta_l: float = 0.0  # aileron [rad]
    delta_m: float = 0.0  # elevator [rad]
    delta_n: float = 0.0  # rudder [rad]
    thrust: float = 0.0  # [N]

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.delta_l, self.delta_m, self.delta_n, self.thrust)

    def saturation(self, limit: float = DEFLECTION_LIMIT) -> dict[str, bool]:
        """Which limits this control set violates (nothing is clamped)."""
        return {
            "delta_l": abs(self.delta_l) > limit,
            "delta_m": abs(self.delta_m) > limit,
            "delta_n": abs(self.delta_n) > limit,
            "thrust": self.thrust < 0.0,
        }


@dataclass(frozen=True, slots=True)
class AeroCoefficients:
    C_L: float
    C_D: float
    C_C: float
    C_x: float
    C_y: float
    C_z: float
    C_l: float
    C_m: float
    C_n: float


@dataclass(frozen=True, slots=True)
class ForcesMoments:
    qbar: float
    F_x: float
    F_y: float
    F_z: float
    M_x: float
    M_y: float
    M_z: float


def dynamic_pressure(rho: float, V: float) -> float:
    return 0.5 * rho * V * V


def lift_drag_side(
    alpha: float,
    beta: float,
    fc: AeroForceConstants,
    alpha_warn: float = DEFAULT_ALPHA_WARN,
) -> tuple[float, float, float]:
    """Wind-axes coefficients (C_L, C_D, C_C).

    Emits :class:`StallWarning` when ``alpha`` exceeds ``alpha_warn``; the
    linear lift law is still used.
    """
    if alpha > alpha_warn:
        warnings.warn(
            f"angle of attack {alpha:.4f} rad exceeds stall threshold {alpha_warn:.4f} rad",
            StallWarning,
            stacklevel=2,
        )
    C_L = fc.C_L0 + fc.C_L_alpha * alpha
    C_D = fc.C_D0 + fc.K_CD * C_L * C_L
    C_C = fc.C_C_beta * beta
    return C_L, C_D, C_C


def body_force_coefficients(
    C_L: float, C_D: float, C_C: float, alpha: float, beta: float
) -> tuple[float, float, float]:
    """Rotate (drag, side, lift) coefficients into body axes."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    C_x = -C_D * ca * cb - C_C * ca * sb + C_L * sa
    C_y = -C_D * sb + C_C * cb
    C_z = -C_D * sa * cb - C_C * sa * sb - C_L * ca
    return C_x, C_y, C_z


def _check_speed(V: float, v_min: float) -> None:
    if V < v_min:
        raise HoverSingularity(f"hover singularity: V = {V:.6g} m/s below {v_min} m/s")


def moment_coefficients(
    alpha: float,
    beta: float,
    rates: BodyRates,
    V: float,
    controls: ControlInputs,
    sd: StabilityDerivatives,
    b: float,
    c: float,
    v_min: float = V_MIN_DEFAULT,
) -> tuple[float, float, float]:
    """Rolling, pitching and yawing moment coefficients (C_l, C_m, C_n)."""
    _check_speed(V, v_min)
    pb = rates.p * b / V
    rb = rates.r * b / V
    qc = rates.q * c / V
    C_l = (
        sd.C_l_beta * beta
        + sd.C_l_p * pb
        + sd.C_l_r * rb
        + sd.C_l_delta_l * controls.delta_l
        + sd.C_l_delta_n * controls.delta_n
    )
    C_m = sd.C_m0 + sd.C_m_alpha * alpha + sd.C_m_q * qc + sd.C_m_delta_m * controls.delta_m
    C_n = (
        sd.C_n_beta * beta
        + sd.C_n_p * pb
        + sd.C_n_r * rb
        + sd.C_n_delta_l * controls.delta_l
        + sd.C_n_delta_n * controls.delta_n
    )
    return C_l, C_m, C_n


def elevator_from_pitch_coefficient(
    C_m: float,
    alpha: float,
    q: float,
    V: float,
    sd: StabilityDerivatives,
    c: float,
    v_min: float = V_MIN_DEFAULT,
) -> float:
    """Elevator deflection that produces pitching-moment coefficient ``C_m``."""
    if sd.C_m_delta_m == 0.0:
        raise SingularControlEffectiveness("singular elevator: C_m_delta_m = 0")
    _check_speed(V, v_min)
    return (C_m - sd.C_m0 - sd.C_m_alpha * alpha - sd.C_m_q * q * c / V) / sd.C_m_delta_m


def aileron_rudder_from_roll_yaw(
    C_l: float,
    C_n: float,
    beta: float,
    p: float,
    r: float,
    V: float,
    sd: StabilityDerivatives,
    b: float,
    v_min: float = V_MIN_DEFAULT,
) -> tuple[float, float]:
    """Aileron and rudder deflections producing (C_l, C_n).

    Roll and yaw are coupled through both surfaces, so the two deflections
    come from a 2x2 solve (written out via Cramer's rule).
    """
    det = sd.lateral_determinant
    if det == 0.0:
        raise SingularControlEffectiveness("singular control effectiveness")
    _check_speed(V, v_min)
    roll_needed = C_l - sd.C_l_beta * beta - sd.C_l_p * p * b / V - sd.C_l_r * r * b / V
    yaw_needed = C_n - sd.C_n_beta * beta - sd.C_n_p * p * b / V - sd.C_n_r * r * b / V
    delta_l = (sd.C_n_delta_n * roll_needed - sd.C_l_delta_n * yaw_needed) / det
    delta_n = (sd.C_l_delta_l * yaw_needed - sd.C_n_delta_l * roll_needed) / det
    return delta_l, delta_n


def forces_and_moments(qbar: float, coeffs: AeroCoefficients, S: float, b: float, c: float) -> ForcesMoments:
    qS = qbar * S
    return ForcesMoments(
        qbar=qbar,
        F_x=qS * coeffs.C_x,
        F_y=qS * coeffs.C_y,
        F_z=qS * coeffs.C_z,
        M_x=qS * b * coeffs.C_l,
        M_y=qS * c * coeffs.C_m,
        M_z=qS * b * coeffs.C_n,
    )
