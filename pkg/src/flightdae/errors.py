"""Exception hierarchy shared by every flightdae module.

Validation problems (bad parameters, malformed input files) derive from
``ValidationError``; failures that arise while evaluating or integrating
the equations derive from ``NumericalError``.  The command-line frontend
maps the two families onto distinct exit codes.
"""

from __future__ import annotations


class FlightDAEError(Exception):
    """Base class for all errors raised by this package."""

    #: Name of the equation group that was being evaluated, when known.
    group: str | None = None


class ValidationError(FlightDAEError, ValueError):
    """An input violates a documented invariant."""


class AltitudeOutOfRange(FlightDAEError, ValueError):
    """Altitude outside the range covered by the atmosphere model."""

    def __init__(self, h: float, limit: float = 20000.0):
        super().__init__(f"altitude out of range: h = {h:.3f} m exceeds {limit:.0f} m")
        self.h = h


class NumericalError(FlightDAEError, ArithmeticError):
    """The equations cannot be evaluated or solved at the requested point."""


class SingularityError(NumericalError):
    pass


class HoverSingularity(SingularityError):
    """Airspeed below the hover guard; sideslip rate and scaled rates undefined."""


class SideslipSingularity(SingularityError):
    """|cos(beta)| too small; angle-of-attack rate undefined."""


class PureSideslip(SingularityError):
    """u = w = 0, so the angle of attack is undefined."""


class GimbalSingularity(SingularityError):
    """Pitch at +/- 90 degrees; Euler rates cannot be recovered from body rates."""


class UndefinedFlankAngle(SingularityError):
    pass


class SingularInertia(SingularityError):
    pass


class SingularControlEffectiveness(SingularityError):
    """The control-effectiveness matrix cannot be inverted."""


class NotSymmetric(FlightDAEError, ValueError):
    """The reduced angular-momentum form needs D = F = 0."""


class TrimError(NumericalError):
    """No steady level trim exists within the linear aerodynamic model."""


class ConvergenceError(NumericalError):
    """Newton iteration failed to reach the residual tolerance."""

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SimulationError(NumericalError):
    """A direct simulation aborted; carries the last valid state and time."""

    def __init__(self, message: str, *, t: float, step: int, state=None, record=None, cause=None):
        super().__init__(message)
        self.t = t
        self.step = step
        self.state = state
        self.record = record
        self.__cause__ = cause


class InverseError(NumericalError):
    """An inverse simulation failed at a particular sample."""

    def __init__(self, message: str, *, index: int, t: float, cause=None):
        super().__init__(message)
        self.index = index
        self.t = t
        self.__cause__ = cause


def annotate(exc: FlightDAEError, group: str) -> FlightDAEError:
    """Tag ``exc`` with the equation group that failed (first tag wins)."""
    if exc.group is None:
        exc.group = group
        if exc.args:
            exc.args = (f"[{group}] {exc.args[0]}",) + exc.args[1:]
        else:
            exc.args = (f"[{group}]",)
    return exc
