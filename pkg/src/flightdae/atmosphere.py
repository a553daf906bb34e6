"""International Standard Atmosphere, troposphere and tropopause (0-20 km).

Density uses the two-branch closed form with the rounded constants
``m0``, ``n0``, ``m1`` and ``rho1``; temperature follows the standard lapse
rate up to 11 km and is constant above.  Negative altitudes fall on the
troposphere branch.  Everything else (pressure, speed of sound, density
ratio) is derived from density and temperature.

Altitudes are geometric.  ``geopotential_altitude`` is provided for
diagnostics only and is not used by the dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from flightdae.errors import AltitudeOutOfRange

RHO0 = 1.225  # kg/m^3
THETA0 = 288.15  # K
LAPSE_RATE = 0.0065  # K/m
R_GAS = 287.05  # J/(kg K)
G0 = 9.80665  # m/s^2
M0 = 2.25577e-5  # 1/m, lapse rate over sea-level temperature
N0 = 4.25593  # g0/(R lambda) - 1
H1 = 11000.0  # m, tropopause base
THETA1 = 216.65  # K
RHO1 = 0.36391  # kg/m^3
M1 = 1.57690e-4  # 1/m, g0/(R theta1)
GAMMA = 1.40
R_EARTH = 6371000.0  # m
H_MAX = 20000.0


@dataclass(frozen=True, slots=True)
class AtmosphereSample:
    h: float
    rho: float
    theta: float
    P: float
    a: float
    sigma: float


def _check(h: float) -> None:
    if h > H_MAX or math.isnan(h):
        raise AltitudeOutOfRange(h, H_MAX)


def density(h: float) -> float:
    """Air density [kg/m^3] at geometric altitude ``h`` [m]."""
    _check(h)
    if h <= H1:
        return RHO0 * (1.0 - M0 * h) ** N0
    return RHO1 * math.exp(-M1 * (h - H1))


def temperature(h: float) -> float:
    _check(h)
    if h <= H1:
        return THETA0 - LAPSE_RATE * h
    return THETA1


def pressure(h: float) -> float:
    """Ideal-gas pressure from the model density and temperature."""
    return density(h) * R_GAS * temperature(h)


def speed_of_sound(h: float) -> float:
    return math.sqrt(GAMMA * R_GAS * temperature(h))


def density_ratio(h: float) -> float:
    return density(h) / RHO0


def geopotential_altitude(h: float) -> float:
    """Geopotential altitude for geometric altitude ``h`` (inverse-square gravity)."""
    return R_EARTH * h / (R_EARTH + h)


def gravity_reduction_fraction(h: float) -> float:
    """Fractional drop of gravitational acceleration at altitude ``h``."""
    ratio = R_EARTH / (R_EARTH + h)
    return 1.0 - ratio * ratio


def sample(h: float) -> AtmosphereSample:
    rho = density(h)
    theta = temperature(h)
    return AtmosphereSample(
        h=h,
        rho=rho,
        theta=theta,
        P=rho * R_GAS * theta,
        a=math.sqrt(GAMMA * R_GAS * theta),
        sigma=rho / RHO0,
    )


def table(altitudes) -> list[AtmosphereSample]:
    return [sample(float(h)) for h in altitudes]
