"""Direct simulation and steady level trim.

``simulate`` integrates the twelve-state closure with classical fixed-step
Runge-Kutta, sampling the control schedule at the stage times.  The
algebraic variables are evaluated explicitly inside every derivative call,
so no DAE machinery is needed.

``trim_steady_level`` finds the wings-level, constant-altitude equilibrium.
By default the solve keeps the thrust component normal to the flight path
(thrust acts along the body axis, which sits at angle of attack to the
velocity), so the result is an exact fixed point of the equations.  With
``closed_form=True`` it uses the small-angle balances thrust = drag and
lift = weight instead.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import astuple, dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import optimize

from flightdae import aero, atmosphere, axes
from flightdae.aero import ControlInputs, StallWarning
from flightdae.airframe import AirframeParams
from flightdae.atmosphere import G0
from flightdae.axes import V_MIN_DEFAULT
from flightdae.dynamics import DERIVED_NAMES, STATE_NAMES, FlightState, evaluate
from flightdae.errors import (
    AltitudeOutOfRange,
    FlightDAEError,
    HoverSingularity,
    SimulationError,
    TrimError,
    ValidationError,
)


H_MIN_SIM = -500.0
CONTROL_NAMES = ("delta_l", "delta_m", "delta_n", "thrust")
INTERPOLATION_MODES = ("linear", "zoh")
TRIM_ALPHA_LIMIT = math.pi / 4


class ControlSchedule:
    """Sampled control history with piecewise-linear or zero-order-hold lookup."""

    def __init__(self, t, controls, mode: str = "linear"):
        t = np.asarray(t, dtype=float)
        values = np.asarray(controls, dtype=float)
        if values.ndim != 2 or values.shape[1] != 4 or values.shape[0] != t.size:
            raise ValidationError("control schedule needs one (delta_l, delta_m, delta_n, thrust) row per time")
        if t.size == 0 or t[0] != 0.0:
            raise ValidationError("control schedule must start at t = 0")
        if np.any(np.diff(t) <= 0.0):
            raise ValidationError("control schedule times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("non-finite control value")
        if mode not in INTERPOLATION_MODES:
            raise ValidationError(f"unknown interpolation mode {mode!r}")
        self.t = t
        self.values = values
        self.mode = mode
        self._t = t.tolist()
        self._rows = values.tolist()

    @classmethod
    def constant(cls, controls: ControlInputs, t_end: float) -> "ControlSchedule":
        row = list(controls.as_tuple())
        if t_end <= 0.0:
            return cls([0.0], [row])
        return cls([0.0, t_end], [row, row])

    @classmethod
    def from_function(cls, func: Callable[[float], ControlInputs], t_end: float, dt: float, mode: str = "linear"):
        n = int(math.floor(t_end / dt + 1e-9))
        times = [i * dt for i in range(n + 1)]
        if times[-1] < t_end:
            times.append(t_end)
        return cls(times, [func(t).as_tuple() for t in times], mode)

    @property
    def t_end(self) -> float:
        return self._t[-1]

    def with_mode(self, mode: str) -> "ControlSchedule":
        return ControlSchedule(self.t, self.values, mode)

    def at(self, t: float) -> ControlInputs:
        ts = self._t
        i = bisect.bisect_right(ts, t) - 1
        if i < 0:
            i = 0
        if i >= len(ts) - 1 or self.mode == "zoh":
            return ControlInputs(*self._rows[min(i, len(ts) - 1)])
        t0, t1 = ts[i], ts[i + 1]
        w = (t - t0) / (t1 - t0)
        a, b = self._rows[i], self._rows[i + 1]
        return ControlInputs(*(x + w * (y - x) for x, y in zip(a, b)))

    __call__ = at


@dataclass(frozen=True)
class SimulationConfig:
    initial: FlightState
    t_end: float
    dt: float = 0.01
    interpolation: str | None = None
    literal: bool = False
    v_min: float = V_MIN_DEFAULT
    decimation: int = 1

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValidationError("dt must be positive")
        if not self.t_end >= self.dt * (1.0 - 1e-12):
            raise ValidationError("t_end must be at least one step (t_end >= dt)")
        if self.decimation < 1:
            raise ValidationError("decimation must be >= 1")
        if self.interpolation is not None and self.interpolation not in INTERPOLATION_MODES:
            raise ValidationError(f"unknown interpolation mode {self.interpolation!r}")


@dataclass
class TrajectoryRecord:
    """Output rows of a simulation: time, states, derived outputs, controls."""

    t: np.ndarray
    states: np.ndarray
    derived: np.ndarray
    controls: np.ndarray
    extrema: dict = field(default_factory=dict)

    columns = ("t",) + STATE_NAMES + DERIVED_NAMES + CONTROL_NAMES

    def __len__(self) -> int:
        return self.t.size

    def column(self, name: str) -> np.ndarray:
        if name == "t":
            return self.t
        if name in STATE_NAMES:
            return self.states[:, STATE_NAMES.index(name)]
        if name in DERIVED_NAMES:
            return self.derived[:, DERIVED_NAMES.index(name)]
        if name in CONTROL_NAMES:
            return self.controls[:, CONTROL_NAMES.index(name)]
        raise KeyError(name)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.states, self.derived, self.controls])

    def state_at(self, i: int) -> FlightState:
        return FlightState.from_array(self.states[i])


def _wrap_state(x: np.ndarray) -> np.ndarray:
    x[6] = axes.wrap_pi(x[6])
    x[8] = axes.wrap_pi(x[8])
    return x


def _derivative(x, controls, params, literal, v_min):
    d, derived = evaluate(FlightState(*x.tolist()), controls, params, literal=literal, v_min=v_min)
    return np.array(astuple(d)), derived


def rk4_step(
    state: FlightState,
    controls_at: Callable[[float], ControlInputs],
    params: AirframeParams,
    dt: float,
    t: float = 0.0,
    *,
    literal: bool = False,
    v_min: float = V_MIN_DEFAULT,
) -> FlightState:
    """Advance one classical Runge-Kutta step; roll and heading are re-wrapped."""
    x = state.to_array()
    k1, _ = _derivative(x, controls_at(t), params, literal, v_min)
    return FlightState(*_rk4_finish(x, k1, controls_at, params, dt, t, literal, v_min).tolist())


def _rk4_finish(x, k1, controls_at, params, dt, t, literal, v_min):
    half = 0.5 * dt
    mid = controls_at(t + half)
    k2, _ = _derivative(x + half * k1, mid, params, literal, v_min)
    k3, _ = _derivative(x + half * k2, mid, params, literal, v_min)
    k4, _ = _derivative(x + dt * k3, controls_at(t + dt), params, literal, v_min)
    return _wrap_state(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def _extrema(record: TrajectoryRecord, m: float) -> dict:
    out = {}
    for name in ("alpha",) + CONTROL_NAMES:
        col = record.column(name)
        out[name] = (float(col.min()), float(col.max()))
    out["load_factor"] = float(np.max(np.abs(record.column("F_z")))) / (m * G0)
    return out


def simulate(config: SimulationConfig, schedule: ControlSchedule, params: AirframeParams) -> TrajectoryRecord:
    """Integrate from ``config.initial`` to ``config.t_end``.

    The record holds every ``config.decimation``-th step including t = 0,
    so it has ``floor(t_end / dt / decimation) + 1`` rows.  Any failure
    raises :class:`SimulationError` carrying the last valid state, its
    time and the rows recorded so far.
    """
    if config.interpolation is not None and config.interpolation != schedule.mode:
        schedule = schedule.with_mode(config.interpolation)
    dt = config.dt
    n_steps = int(math.floor(config.t_end / dt + 1e-9))
    if schedule.t_end < n_steps * dt - 1e-9:
        raise ValidationError(f"control schedule ends at {schedule.t_end} s, before t_end = {n_steps * dt} s")
    dec = config.decimation
    n_rows = n_steps // dec + 1
    times = np.empty(n_rows)
    states = np.empty((n_rows, len(STATE_NAMES)))
    derived = np.empty((n_rows, len(DERIVED_NAMES)))
    controls = np.empty((n_rows, len(CONTROL_NAMES)))
    literal, v_min = config.literal, config.v_min

    x = config.initial.to_array()
    row = 0
    step = 0
    try:
        for step in range(n_steps + 1):
            t = step * dt
            u = schedule.at(t)
            k1, out = _derivative(x, u, params, literal, v_min)
            if step % dec == 0:
                times[row] = t
                states[row] = x
                derived[row] = astuple(out)
                controls[row] = u.as_tuple()
                row += 1
            if step == n_steps:
                break
            x_new = _rk4_finish(x, k1, schedule.at, params, dt, t, literal, v_min)
            if not np.all(np.isfinite(x_new)):
                raise FloatingPointError("non-finite state")
            h = params.h_ini - x_new[11]
            if h < H_MIN_SIM:
                raise AltitudeOutOfRange(h, H_MIN_SIM)
            x = x_new
    except (FlightDAEError, FloatingPointError) as exc:
        partial = TrajectoryRecord(times[:row], states[:row], derived[:row], controls[:row])
        t_fail = step * dt
        raise SimulationError(
            f"simulation aborted at step {step} (t = {t_fail:.6g} s): {exc}",
            t=t_fail,
            step=step,
            state=FlightState(*x.tolist()),
            record=partial,
            cause=exc,
        ) from exc

    record = TrajectoryRecord(times, states, derived, controls)
    record.extrema = _extrema(record, params.m)
    return record


# --- trim ---------------------------------------------------------------------


class TrimSolution(NamedTuple):
    alpha: float
    delta_m: float
    thrust: float
    theta: float

    def state(self, V: float, h: float, params: AirframeParams, psi: float = 0.0) -> FlightState:
        return FlightState(
            V=V, beta=0.0, alpha=self.alpha, p=0.0, q=0.0, r=0.0,
            phi=0.0, theta=self.theta, psi=psi,
            x_g=0.0, y_g=0.0, z_g=params.h_ini - h,
        )

    def controls(self) -> ControlInputs:
        return ControlInputs(delta_l=0.0, delta_m=self.delta_m, delta_n=0.0, thrust=self.thrust)


def trim_steady_level(
    V: float,
    h: float,
    params: AirframeParams,
    *,
    closed_form: bool = False,
    v_min: float = V_MIN_DEFAULT,
) -> TrimSolution:
    """Wings-level, constant-altitude trim at airspeed ``V`` and altitude ``h``.

    Returns ``(alpha, delta_m, thrust, theta)``; the pitch angle equals the
    angle of attack because the flight path is horizontal.
    """
    if V < v_min:
        raise HoverSingularity(f"hover singularity: V = {V:.6g} m/s below {v_min} m/s")
    fc = params.force_constants
    if fc.C_L_alpha == 0.0:
        raise TrimError("unattainable trim: zero lift-curve slope")
    qS = aero.dynamic_pressure(atmosphere.density(h), V) * params.S
    weight_coeff = params.m * G0 / qS
    alpha_closed = (weight_coeff - fc.C_L0) / fc.C_L_alpha

    if closed_form:
        alpha = alpha_closed
    else:
        def residual(a):
            C_L = fc.C_L0 + fc.C_L_alpha * a
            C_D = fc.C_D0 + fc.K_CD * C_L * C_L
            return C_L + C_D * math.tan(a) - weight_coeff

        def slope(a):
            C_L = fc.C_L0 + fc.C_L_alpha * a
            C_D = fc.C_D0 + fc.K_CD * C_L * C_L
            return fc.C_L_alpha + 2.0 * fc.K_CD * C_L * fc.C_L_alpha * math.tan(a) + C_D / math.cos(a) ** 2

        start = max(-TRIM_ALPHA_LIMIT, min(TRIM_ALPHA_LIMIT, alpha_closed))
        try:
            alpha = float(optimize.newton(residual, start, fprime=slope, tol=1e-15, maxiter=100))
        except (RuntimeError, OverflowError, ZeroDivisionError) as exc:
            raise TrimError(f"unattainable trim at V = {V} m/s, h = {h} m: {exc}") from exc
        if not math.isfinite(alpha) or abs(residual(alpha)) > 1e-10 * max(1.0, weight_coeff):
            raise TrimError(f"unattainable trim at V = {V} m/s, h = {h} m")

    if abs(alpha) >= TRIM_ALPHA_LIMIT:
        raise TrimError(
            f"unattainable trim: required angle of attack {alpha:.3f} rad is beyond the linear lift model"
        )
    if alpha > params.alpha_warn:
        warnings.warn(f"trim angle of attack {alpha:.4f} rad exceeds stall threshold", StallWarning, stacklevel=2)

    C_L = fc.C_L0 + fc.C_L_alpha * alpha
    C_D = fc.C_D0 + fc.K_CD * C_L * C_L
    thrust = qS * C_D if closed_form else qS * C_D / math.cos(alpha)
    delta_m = aero.elevator_from_pitch_coefficient(0.0, alpha, 0.0, V, params.derivatives, params.c, v_min)
    return TrimSolution(alpha=alpha, delta_m=delta_m, thrust=thrust, theta=alpha)


def trim_state(V: float, h: float, params: AirframeParams, psi: float = 0.0, **kwargs):
    """Convenience: trim solution plus the matching state and controls."""
    sol = trim_steady_level(V, h, params, **kwargs)
    return sol, sol.state(V, h, params, psi), sol.controls()
