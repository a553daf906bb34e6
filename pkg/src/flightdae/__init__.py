"""Six-degree-of-freedom flight dynamics for asymmetric fixed-wing aircraft.

Direct simulation integrates control histories into a trajectory; inverse
simulation recovers the control histories that fly a prescribed path; trim
finds steady level flight.  The standard atmosphere up to 20 km is built in.
"""

from flightdae.aero import ControlInputs, StallWarning
from flightdae.airframe import (
    AeroForceConstants,
    AirframeParams,
    InertiaTensor,
    StabilityDerivatives,
    validate,
)
from flightdae.cli import load_airframe
from flightdae.dynamics import FlightState, evaluate, state_derivative
from flightdae.inverse import InverseOptions, InverseSolution, TrajectorySpec, inverse_simulate
from flightdae.sim import (
    ControlSchedule,
    SimulationConfig,
    TrajectoryRecord,
    simulate,
    trim_state,
    trim_steady_level,
)

__version__ = "0.1.0"

__all__ = [
    "AeroForceConstants",
    "AirframeParams",
    "ControlInputs",
    "ControlSchedule",
    "FlightState",
    "InertiaTensor",
    "InverseOptions",
    "InverseSolution",
    "SimulationConfig",
    "StabilityDerivatives",
    "StallWarning",
    "TrajectoryRecord",
    "TrajectorySpec",
    "evaluate",
    "inverse_simulate",
    "load_airframe",
    "simulate",
    "state_derivative",
    "trim_state",
    "trim_steady_level",
    "validate",
]
