"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from flightdae.aero import ControlInputs
from flightdae.airframe import AeroForceConstants, AirframeParams, InertiaTensor, StabilityDerivatives
from flightdae.atmosphere import G0
from flightdae.cli import load_airframe
from flightdae.dynamics import FlightState
from flightdae.sim import ControlSchedule, SimulationConfig, simulate, trim_state

SYNTHETIC = load_airframe()


def symmetric_airframe() -> AirframeParams:
    """Synthetic airframe with x-z mirror symmetry (D = F = 0)."""
    inertia = replace(SYNTHETIC.inertia, D=0.0, F=0.0)
    return AirframeParams(
        m=SYNTHETIC.m, S=SYNTHETIC.S, c=SYNTHETIC.c, b=SYNTHETIC.b,
        inertia=inertia,
        force_constants=SYNTHETIC.force_constants,
        derivatives=SYNTHETIC.derivatives,
        h_ini=SYNTHETIC.h_ini,
    )


def inert_airframe(m: float = 1000.0) -> AirframeParams:
    """No aerodynamics at all (S = 0), diagonal inertia; built without validation."""
    return AirframeParams(
        m=m, S=0.0, c=1.0, b=1.0,
        inertia=InertiaTensor(1000.0, 1500.0, 2000.0),
        force_constants=AeroForceConstants(0.0, 0.0, 0.0, 0.0, 0.0),
        derivatives=StabilityDerivatives(*([0.0] * 8), 1.0, *([0.0] * 5)),
    )


def random_airframe(rng: np.random.Generator) -> AirframeParams:
    """Random but physically admissible airframe for property checks."""
    inertia = random_inertia(rng)
    fc = AeroForceConstants(
        C_L0=rng.uniform(-0.1, 0.4), C_L_alpha=rng.uniform(3.0, 6.5), C_D0=rng.uniform(0.01, 0.05),
        K_CD=rng.uniform(0.02, 0.1), C_C_beta=rng.uniform(-0.8, -0.1),
    )
    sd = StabilityDerivatives(*rng.uniform(-1.0, 1.0, 14))
    return AirframeParams(
        m=rng.uniform(300.0, 5000.0), S=rng.uniform(8.0, 40.0), c=rng.uniform(0.8, 3.0), b=rng.uniform(6.0, 20.0),
        inertia=inertia, force_constants=fc, derivatives=sd, h_ini=rng.uniform(0.0, 2000.0),
    )


def random_inertia(rng: np.random.Generator, symmetric: bool = False) -> InertiaTensor:
    """Positive-definite tensor from a random rotation of random principal moments."""
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    principal = rng.uniform(500.0, 5000.0, 3)
    # triangle inequality keeps it a physical rigid-body tensor
    principal[2] = min(principal[2], principal[0] + principal[1] - 1.0)
    J = q @ np.diag(principal) @ q.T
    if symmetric:
        J[0, 1] = J[1, 0] = J[1, 2] = J[2, 1] = 0.0
    return InertiaTensor(A=J[0, 0], B=J[1, 1], C=J[2, 2], D=-J[1, 2], E=-J[0, 2], F=-J[0, 1])


def random_state(rng: np.random.Generator, h_ini: float = 0.0) -> FlightState:
    """Random admissible state away from every guard band."""
    return FlightState(
        V=rng.uniform(20.0, 120.0),
        beta=rng.uniform(-0.4, 0.4),
        alpha=rng.uniform(-0.2, 0.25),
        p=rng.uniform(-1.0, 1.0),
        q=rng.uniform(-1.0, 1.0),
        r=rng.uniform(-1.0, 1.0),
        phi=rng.uniform(-math.pi, math.pi),
        theta=rng.uniform(-1.3, 1.3),
        psi=rng.uniform(-math.pi, math.pi),
        x_g=rng.uniform(-1e4, 1e4),
        y_g=rng.uniform(-1e4, 1e4),
        z_g=h_ini - rng.uniform(0.0, 8000.0),
    )


def random_controls(rng: np.random.Generator) -> ControlInputs:
    return ControlInputs(*rng.uniform(-0.3, 0.3, 3), rng.uniform(0.0, 5000.0))


def body_axes_wind_rates(state: FlightState, F_body, thrust: float, m: float, g0: float = G0):
    """(V_dot, beta_dot, alpha_dot) by way of the body-axes momentum equations.

    Solves the body-axes balance for (u_dot, v_dot, w_dot) and converts the
    result with the definitions of V, beta and alpha.
    """
    u = state.V * math.cos(state.alpha) * math.cos(state.beta)
    v = state.V * math.sin(state.beta)
    w = state.V * math.sin(state.alpha) * math.cos(state.beta)
    p, q, r = state.p, state.q, state.r
    X, Y, Z = F_body
    sphi, cphi = math.sin(state.phi), math.cos(state.phi)
    sth, cth = math.sin(state.theta), math.cos(state.theta)
    u_dot = (X - m * g0 * sth + thrust) / m + v * r - w * q
    v_dot = (Y + m * g0 * cth * sphi) / m + w * p - u * r
    w_dot = (Z + m * g0 * cth * cphi) / m + u * q - v * p
    V = state.V
    V_dot = (u * u_dot + v * v_dot + w * w_dot) / V
    beta_dot = (v_dot / V - v * V_dot / V**2) / math.cos(state.beta)
    alpha_dot = (u * w_dot - w * u_dot) / (u * u + w * w)
    return V_dot, beta_dot, alpha_dot


def maneuver_schedule(trim, t_end: float, knot: float = 0.04) -> ControlSchedule:
    """Smooth excitation of all three surfaces around a trim point."""

    def controls(t):
        return ControlInputs(
            0.03 * math.sin(2.0 * math.pi * t / 10.0),
            trim.delta_m + 0.03 * math.sin(2.0 * math.pi * t / 8.0),
            0.02 * math.sin(2.0 * math.pi * t / 12.0),
            trim.thrust,
        )

    return ControlSchedule.from_function(controls, t_end, knot)


def run_maneuver(dt: float, t_end: float = 60.0, params: AirframeParams = SYNTHETIC):
    trim, state, _ = trim_state(50.0, 1000.0, params)
    schedule = maneuver_schedule(trim, t_end)
    return simulate(SimulationConfig(state, t_end, dt), schedule, params)


def rotation_x(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def rotation_y(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def rotation_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
