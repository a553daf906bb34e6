import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flightdae import axes
from flightdae.axes import BodyRates, EulerAngles, FlightPathAngles, WindState
from flightdae.errors import GimbalSingularity, HoverSingularity, PureSideslip, UndefinedFlankAngle
from helpers import rotation_x, rotation_y, rotation_z

angle = st.floats(-math.pi, math.pi)
pitch = st.floats(-1.5, 1.5)
rate = st.floats(-3.0, 3.0)


@given(angle, pitch, angle)
def test_dcm_is_yaw_pitch_roll_composition(phi, theta, psi):
    R = axes.body_to_earth_dcm(EulerAngles(phi, theta, psi))
    expected = rotation_z(psi) @ rotation_y(theta) @ rotation_x(phi)
    np.testing.assert_allclose(R, expected, atol=1e-14)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-14)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-13)


@given(angle, pitch, angle, st.tuples(rate, rate, rate))
def test_scalar_rotations_match_matrix(phi, theta, psi, vec):
    e = EulerAngles(phi, theta, psi)
    R = axes.body_to_earth_dcm(e)
    np.testing.assert_allclose(axes.body_to_earth(e, vec), R @ np.array(vec), atol=1e-13)
    np.testing.assert_allclose(axes.earth_to_body(e, vec), R.T @ np.array(vec), atol=1e-13)


def test_third_row_gives_vertical_components():
    e = EulerAngles(0.3, -0.2, 1.1)
    R = axes.body_to_earth_dcm(e)
    np.testing.assert_allclose(
        R[2], [-math.sin(e.theta), math.sin(e.phi) * math.cos(e.theta), math.cos(e.phi) * math.cos(e.theta)]
    )


@given(angle, pitch, angle, rate, rate, rate)
def test_euler_rate_roundtrip(phi, theta, psi, p, q, r):
    e = EulerAngles(phi, theta, psi)
    euler_rates = axes.euler_rates_from_body_rates(e, BodyRates(p, q, r))
    back = axes.body_rates_from_euler_rates(e, euler_rates)
    scale = 1.0 / math.cos(theta)
    assert back.p == pytest.approx(p, abs=1e-10 * scale)
    assert back.q == pytest.approx(q, abs=1e-10 * scale)
    assert back.r == pytest.approx(r, abs=1e-10 * scale)


def test_euler_rates_match_angular_velocity_oracle():
    # omega_body = R^T * (psi_dot z + theta_dot y' + phi_dot x'')
    e = EulerAngles(0.4, 0.3, -1.0)
    rates = (0.1, -0.25, 0.6)
    phi_dot, theta_dot, psi_dot = rates
    z_axis = np.array([0.0, 0.0, 1.0])
    y_axis = rotation_z(e.psi) @ np.array([0.0, 1.0, 0.0])
    x_axis = rotation_z(e.psi) @ rotation_y(e.theta) @ np.array([1.0, 0.0, 0.0])
    omega_earth = psi_dot * z_axis + theta_dot * y_axis + phi_dot * x_axis
    omega_body = axes.body_to_earth_dcm(e).T @ omega_earth
    got = axes.body_rates_from_euler_rates(e, rates)
    np.testing.assert_allclose([got.p, got.q, got.r], omega_body, atol=1e-15)


def test_gimbal_guard():
    with pytest.raises(GimbalSingularity, match="gimbal"):
        axes.euler_rates_from_body_rates(EulerAngles(0.0, math.pi / 2, 0.0), BodyRates(0.1, 0.1, 0.1))
    # just outside the guard band still solves
    axes.euler_rates_from_body_rates(EulerAngles(0.0, math.pi / 2 - 1e-5, 0.0), BodyRates(0.1, 0.1, 0.1))


@given(st.floats(1.5, 300.0), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_wind_angle_roundtrip(V, alpha, beta):
    w = axes.wind_from_body_velocity(*axes.body_velocity_from_wind(WindState(V, alpha, beta)))
    assert w.V == pytest.approx(V, rel=1e-12)
    assert w.alpha == pytest.approx(alpha, abs=1e-10)
    assert w.beta == pytest.approx(beta, abs=1e-10)


def test_wind_angles_of_simple_velocities():
    w = axes.wind_from_body_velocity(50.0, 0.0, 0.0)
    assert (w.V, w.alpha, w.beta) == (50.0, 0.0, 0.0)
    w = axes.wind_from_body_velocity(-10.0, 0.0, 0.0)
    assert w.alpha == pytest.approx(math.pi)
    w = axes.wind_from_body_velocity(10.0, 0.0, 10.0)
    assert w.alpha == pytest.approx(math.pi / 4)


def test_wind_angle_guards():
    with pytest.raises(HoverSingularity, match="hover"):
        axes.wind_from_body_velocity(0.5, 0.0, 0.0)
    with pytest.raises(PureSideslip, match="pure sideslip"):
        axes.wind_from_body_velocity(0.0, 30.0, 0.0)
    # guard threshold is configurable
    axes.wind_from_body_velocity(0.5, 0.0, 0.0, v_min=0.1)


def test_flank_angle():
    assert axes.flank_angle(10.0, 10.0) == pytest.approx(math.pi / 4)
    assert axes.flank_angle(-1.0, 0.0) == pytest.approx(math.pi)
    with pytest.raises(UndefinedFlankAngle):
        axes.flank_angle(0.0, 1.0)


def test_path_angles_of_straight_flight():
    fpa = axes.flight_path_angles((0.0, 50.0, 0.0), 50.0)
    assert fpa.theta_w == 0.0
    assert fpa.psi_w == pytest.approx(math.pi / 2)
    gamma = 0.2
    fpa = axes.flight_path_angles((50.0 * math.cos(gamma), 0.0, -50.0 * math.sin(gamma)), 50.0)
    assert fpa.theta_w == pytest.approx(gamma, abs=1e-15)
    assert fpa.climb_rate == pytest.approx(50.0 * math.sin(gamma))
    # westbound heading lands in [0, 2 pi)
    assert axes.flight_path_angles((0.0, -1.0, 0.0), 1.0).psi_w == pytest.approx(1.5 * math.pi)
    with pytest.raises(HoverSingularity):
        axes.flight_path_angles((0.1, 0.0, 0.0), 0.1)


@given(st.floats(5.0, 200.0), st.floats(-1.2, 1.2), st.floats(-1.2, 1.2), angle, pitch, angle)
def test_path_angle_identities_hold_for_consistent_state(V, alpha, beta, phi, theta, psi):
    wind = WindState(V, alpha, beta)
    euler = EulerAngles(phi, theta, psi)
    fpa = axes.flight_path_angles(axes.earth_velocity(wind, euler), V)
    r_lat, r_vert = axes.path_angle_residuals(wind, euler, fpa)
    assert abs(r_lat) <= 1e-12
    assert abs(r_vert) <= 1e-12


def test_path_angle_residuals_detect_inconsistency():
    r = axes.path_angle_residuals(WindState(50.0, 0.1, 0.0), EulerAngles(0.0, 0.1, 0.0), FlightPathAngles(0.3, 0.0))
    assert abs(r[1]) > 0.1


@given(st.floats(-100.0, 100.0))
def test_wrapping_ranges(a):
    w = axes.wrap_pi(a)
    assert -math.pi < w <= math.pi
    assert math.sin(w) == pytest.approx(math.sin(a), abs=1e-12)
    w2 = axes.wrap_two_pi(a)
    assert 0.0 <= w2 < 2.0 * math.pi
    assert math.cos(w2) == pytest.approx(math.cos(a), abs=1e-12)


def test_wrap_endpoints():
    assert axes.wrap_pi(-math.pi) == math.pi
    assert axes.wrap_pi(math.pi) == math.pi
    assert axes.wrap_two_pi(2.0 * math.pi) == 0.0
    assert axes.wrap_two_pi(-1e-20) < 2.0 * math.pi


def test_altitude_from_position():
    assert axes.altitude_from_position(-250.0, 100.0) == 350.0
