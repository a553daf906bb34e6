"""Command-line front end.

Subcommands::

    flightdae simulate   --controls schedule.csv --t-end 60 --output run.csv
    flightdae inverse    --trajectory path.csv --constraint beta --output controls.csv
    flightdae trim       --V 50 --h 1000
    flightdae atmosphere --h-max 20000 --step 1000

Angles cross the command-line boundary in degrees unless ``--units rad`` is
given; every angle column in an output file carries its unit in the header.
Exit status is 0 on success, 1 for usage errors, 2 for invalid input and 3
for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from flightdae import atmosphere
from flightdae.aero import StallWarning
from flightdae.airframe import (
    AeroForceConstants,
    AirframeParams,
    InertiaTensor,
    StabilityDerivatives,
    validate,
)
from flightdae.dynamics import STATE_NAMES, FlightState
from flightdae.errors import FlightDAEError, NumericalError, ValidationError
from flightdae.inverse import InverseOptions, TrajectorySpec, inverse_simulate
from flightdae.sim import CONTROL_NAMES, ControlSchedule, SimulationConfig, simulate, trim_state, trim_steady_level

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

DERIVATIVE_KEYS = (
    "C_l_beta", "C_l_p", "C_l_r", "C_l_delta_l", "C_l_delta_n",
    "C_m0", "C_m_alpha", "C_m_q", "C_m_delta_m",
    "C_n_beta", "C_n_p", "C_n_r", "C_n_delta_l", "C_n_delta_n",
)  # fmt: skip
AIRFRAME_KEYS = (
    "mass", "S", "c", "b",
    "I_xx", "I_yy", "I_zz", "I_yz", "I_xz", "I_xy",
    "C_L0", "C_L_alpha", "C_D0", "K_CD", "C_C_beta",
    *DERIVATIVE_KEYS,
    "h_ini",
)  # fmt: skip
OPTIONAL_KEYS = ("alpha_warn",)

ANGLE_COLUMNS = frozenset(
    {"beta", "alpha", "phi", "theta", "psi", "theta_w", "psi_w", "alpha_f", "delta_l", "delta_m", "delta_n"}
)
RATE_COLUMNS = frozenset({"p", "q", "r"})


def default_airframe_path() -> Path:
    return Path(str(resources.files("flightdae") / "data" / "synthetic_airframe.cfg"))


# --- airframe file -----------------------------------------------------------


def parse_airframe(text: str, source: str = "<airframe>") -> dict[str, float]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, float] = {}
    known = set(AIRFRAME_KEYS) | set(OPTIONAL_KEYS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise ValidationError(f"{source}:{lineno}: parse error: expected 'key = value'")
        if key not in known:
            raise ValidationError(f"{source}:{lineno}: unknown key: {key}")
        if key in values:
            raise ValidationError(f"{source}:{lineno}: duplicate key: {key}")
        try:
            number = float(value)
        except ValueError:
            raise ValidationError(f"{source}:{lineno}: parse error: {key} = {value!r} is not a number") from None
        if not math.isfinite(number):
            raise ValidationError(f"{source}:{lineno}: parse error: {key} is not finite")
        values[key] = number
    for key in AIRFRAME_KEYS:
        if key not in values:
            raise ValidationError(f"missing key: {key}")
    return values


def airframe_from_values(v: dict[str, float]) -> AirframeParams:
    extra = {"alpha_warn": v["alpha_warn"]} if "alpha_warn" in v else {}
    params = AirframeParams(
        m=v["mass"],
        S=v["S"],
        c=v["c"],
        b=v["b"],
        inertia=InertiaTensor(v["I_xx"], v["I_yy"], v["I_zz"], v["I_yz"], v["I_xz"], v["I_xy"]),
        force_constants=AeroForceConstants(v["C_L0"], v["C_L_alpha"], v["C_D0"], v["K_CD"], v["C_C_beta"]),
        derivatives=StabilityDerivatives(*(v[k] for k in DERIVATIVE_KEYS)),
        h_ini=v["h_ini"],
        **extra,
    )
    return validate(params)


def load_airframe(path: str | Path | None = None) -> AirframeParams:
    """Read and validate an airframe file (the bundled synthetic one by default)."""
    path = Path(path) if path is not None else default_airframe_path()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read airframe file {path}: {exc.strerror}") from exc
    return airframe_from_values(parse_airframe(text, str(path)))


# --- delimited files ----------------------------------------------------------


def read_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Header names and an (n, k) float array from a comma-separated file."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValidationError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            data.append([float(x) for x in row])
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: non-numeric field") from None
    return header, np.array(data, dtype=float).reshape(len(data), len(header))


def _unit_scale(units: str) -> float:
    return math.degrees(1.0) if units == "deg" else 1.0


def labelled(name: str, units: str) -> str:
    if name in ANGLE_COLUMNS:
        return f"{name}_{units}"
    if name in RATE_COLUMNS:
        return f"{name}_{units}_s"
    return name


def write_table(path: str | Path | None, names, data: np.ndarray, units: str) -> None:
    """Write columns with unit-labelled headers; angles converted to ``units``."""
    scale = _unit_scale(units)
    out = np.array(data, dtype=float, copy=True) + 0.0  # no negative zeros in the output
    for j, name in enumerate(names):
        if name in ANGLE_COLUMNS or name in RATE_COLUMNS:
            out[:, j] *= scale
    header = [labelled(n, units) for n in names]
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in out:
            writer.writerow([f"{x:.12g}" for x in row])
    finally:
        if path:
            fh.close()


def load_schedule(path, units: str, mode: str) -> ControlSchedule:
    header, data = read_table(path)
    expected = ["t", *CONTROL_NAMES]
    if header != expected:
        raise ValidationError(f"{path}: header must be {','.join(expected)}")
    controls = data[:, 1:].copy()
    controls[:, :3] /= _unit_scale(units)
    return ControlSchedule(data[:, 0], controls, mode)


def load_trajectory(path, units: str, constraint: str) -> TrajectorySpec:
    header, data = read_table(path)
    if header[:4] != ["t", "x_g", "y_g", "z_g"] or len(header) > 5:
        raise ValidationError(f"{path}: header must be t,x_g,y_g,z_g[,beta|phi]")
    values = None
    if len(header) == 5:
        if header[4] != constraint:
            raise ValidationError(f"{path}: constraint column {header[4]!r} does not match --constraint {constraint}")
        values = data[:, 4] / _unit_scale(units)
    return TrajectorySpec(data[:, 0], data[:, 1], data[:, 2], data[:, 3], constraint, values)


# --- run configuration ----------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    airframe: str | None = None
    input: str | None = None
    output: str | None = None
    dt: float = 0.01
    t_end: float | None = None
    literal: bool = False
    units: str = "deg"
    v_min: float = 1.0
    constraint: str = "beta"
    tol: float = 1e-8
    interpolation: str = "linear"
    V: float = 50.0
    h: float | None = None
    h_max: float = 20000.0
    step: float = 1000.0
    state: dict[str, float] = field(default_factory=dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flightdae", description="Six-degree-of-freedom flight simulation, inverse simulation and trim.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--airframe", help="airframe key = value file (default: bundled synthetic airframe)")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--units", choices=("deg", "rad"), default="deg", help="angle unit at the boundary")
    common.add_argument("--paper-literal", dest="literal", action="store_true",
                        help="use +T cos(alpha) sin(beta) in the sideslip equation and closed-form trim")
    common.add_argument("--v-min", type=float, default=1.0, help="hover guard speed [m/s]")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="integrate a control schedule forward in time")
    p.add_argument("--controls", help="schedule file t,delta_l,delta_m,delta_n,thrust (default: hold trim)")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, help="end time [s] (default: end of schedule)")
    p.add_argument("--interpolation", choices=("linear", "zoh"), default="linear")
    p.add_argument("--V", type=float, default=50.0, help="trim airspeed for the initial state [m/s]")
    p.add_argument("--h", type=float, help="trim altitude for the initial state [m] (default: h_ini)")
    p.add_argument("--state", action="append", default=[], metavar="NAME=VALUE",
                   help="override one initial state entry (angles in --units)")

    p = sub.add_parser("inverse", parents=[common], help="recover controls for a prescribed path")
    p.add_argument("--trajectory", required=True, help="path file t,x_g,y_g,z_g[,beta|phi]")
    p.add_argument("--constraint", choices=("beta", "phi"), default="beta")
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("trim", parents=[common], help="steady level-flight trim")
    p.add_argument("--V", type=float, default=50.0)
    p.add_argument("--h", type=float, default=0.0)

    p = sub.add_parser("atmosphere", parents=[common], help="tabulate the standard atmosphere")
    p.add_argument("--h-max", type=float, default=20000.0)
    p.add_argument("--step", type=float, default=1000.0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        airframe=args.airframe,
        output=args.output,
        units=args.units,
        literal=args.literal,
        v_min=args.v_min,
    )
    if args.command == "simulate":
        if args.dt <= 0.0:
            raise UsageError("--dt must be positive")
        if args.t_end is not None and args.t_end < args.dt:
            raise UsageError("--t-end must be at least one step (--dt)")
        if args.t_end is None and args.controls is None:
            raise UsageError("--t-end is required without --controls")
        cfg.input, cfg.dt, cfg.t_end = args.controls, args.dt, args.t_end
        cfg.interpolation, cfg.V, cfg.h = args.interpolation, args.V, args.h
        for item in args.state:
            name, sep, value = item.partition("=")
            if not sep or name.strip() not in STATE_NAMES:
                raise UsageError(f"--state expects NAME=VALUE with NAME in {', '.join(STATE_NAMES)}")
            try:
                cfg.state[name.strip()] = float(value)
            except ValueError:
                raise UsageError(f"--state {item!r}: value is not a number") from None
    elif args.command == "inverse":
        cfg.input, cfg.constraint, cfg.tol = args.trajectory, args.constraint, args.tol
    elif args.command == "trim":
        cfg.V, cfg.h = args.V, args.h
    elif args.command == "atmosphere":
        if args.step <= 0.0 or args.h_max < 0.0:
            raise UsageError("--step must be positive and --h-max non-negative")
        cfg.h_max, cfg.step = args.h_max, args.step
    return cfg


# --- subcommands -----------------------------------------------------------------


def _initial_state(cfg: RunConfig, params: AirframeParams, controls0) -> FlightState:
    h = params.h_ini if cfg.h is None else cfg.h
    _, state, _ = trim_state(cfg.V, h, params, closed_form=cfg.literal, v_min=cfg.v_min)
    if cfg.state:
        x = state.to_array()
        scale = _unit_scale(cfg.units)
        for name, value in cfg.state.items():
            if name in ANGLE_COLUMNS or name in RATE_COLUMNS:
                value /= scale
            x[STATE_NAMES.index(name)] = value
        state = FlightState.from_array(x)
    return state


def run_simulate(cfg: RunConfig, params: AirframeParams, out) -> int:
    h = params.h_ini if cfg.h is None else cfg.h
    if cfg.input:
        schedule = load_schedule(cfg.input, cfg.units, cfg.interpolation)
    else:
        trim = trim_steady_level(cfg.V, h, params, closed_form=cfg.literal, v_min=cfg.v_min)
        schedule = ControlSchedule.constant(trim.controls(), cfg.t_end)
    t_end = cfg.t_end if cfg.t_end is not None else schedule.t_end
    if t_end < cfg.dt:
        raise UsageError("simulation must cover at least one step")
    state = _initial_state(cfg, params, schedule.at(0.0))
    config = SimulationConfig(
        initial=state, t_end=t_end, dt=cfg.dt, interpolation=cfg.interpolation,
        literal=cfg.literal, v_min=cfg.v_min,
    )
    record = simulate(config, schedule, params)
    write_table(cfg.output, record.columns, record.table(), cfg.units)
    scale = _unit_scale(cfg.units)
    print(f"# {len(record.t)} rows, t_end = {record.t[-1]:.6g} s", file=out)
    for name, extent in record.extrema.items():
        if name in ANGLE_COLUMNS:
            lo, hi = extent[0] * scale, extent[1] * scale
            print(f"# {labelled(name, cfg.units)}: min {lo:.6g}, max {hi:.6g}", file=out)
        elif isinstance(extent, tuple):
            print(f"# {name}: min {extent[0]:.6g}, max {extent[1]:.6g}", file=out)
        else:
            print(f"# {name}: {extent:.6g}", file=out)
    return EXIT_OK


def run_inverse(cfg: RunConfig, params: AirframeParams, out) -> int:
    spec = load_trajectory(cfg.input, cfg.units, cfg.constraint)
    opts = InverseOptions(tol=cfg.tol, literal=cfg.literal, v_min=cfg.v_min)
    sol = inverse_simulate(spec, params, opts)
    names = ["t", *CONTROL_NAMES, "alpha", "beta", "phi", "theta", "psi", "p", "q", "r", "V",
             "residual", "iterations", "sat_delta_l", "sat_delta_m", "sat_delta_n", "sat_thrust"]  # fmt: skip
    state_cols = [sol.column(n) for n in ("alpha", "beta", "phi", "theta", "psi", "p", "q", "r", "V")]
    data = np.column_stack([sol.t, sol.controls, *state_cols, sol.residual, sol.iterations, sol.saturation.astype(float)])
    write_table(cfg.output, names, data, cfg.units)
    print(f"# {len(sol)} samples, max residual {sol.residual.max():.3e}, "
          f"max iterations {int(sol.iterations.max())}", file=out)  # fmt: skip
    for j, name in enumerate(CONTROL_NAMES):
        count = int(sol.saturation[:, j].sum())
        if count:
            print(f"# {name}: limit exceeded at {count} samples", file=out)
    return EXIT_OK


def run_trim(cfg: RunConfig, params: AirframeParams, out) -> int:
    sol = trim_steady_level(cfg.V, cfg.h, params, closed_form=cfg.literal, v_min=cfg.v_min)
    s = _unit_scale(cfg.units)
    u = cfg.units
    line = (
        f"alpha_{u}={sol.alpha * s:.8g} delta_m_{u}={sol.delta_m * s:.8g} "
        f"thrust={sol.thrust:.8g} theta_{u}={sol.theta * s:.8g}"
    )
    if cfg.output:
        Path(cfg.output).write_text(line + "\n")
    print(line, file=out)
    return EXIT_OK


def run_atmosphere(cfg: RunConfig, out) -> int:
    n = int(math.floor(cfg.h_max / cfg.step + 1e-9)) + 1
    heights = [k * cfg.step for k in range(n)]
    rows = [atmosphere.sample(h) for h in heights]
    names = ["h", "rho", "sigma", "temperature", "pressure", "speed_of_sound", "geopotential_altitude"]
    data = np.array(
        [[s.h, s.rho, s.sigma, s.theta, s.P, s.a, atmosphere.geopotential_altitude(s.h)] for s in rows]
    )
    write_table(cfg.output, names, data, cfg.units)
    return EXIT_OK


def run(cfg: RunConfig, out=None) -> int:
    """Dispatch one subcommand and return its exit status."""
    out = out or sys.stdout
    if cfg.command == "atmosphere":
        return run_atmosphere(cfg, out)
    params = load_airframe(cfg.airframe)
    if cfg.command == "simulate":
        return run_simulate(cfg, params, sys.stderr if cfg.output is None else out)
    if cfg.command == "inverse":
        return run_inverse(cfg, params, sys.stderr if cfg.output is None else out)
    if cfg.command == "trim":
        return run_trim(cfg, params, out)
    raise UsageError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default", StallWarning)
            return run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"flightdae: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"flightdae: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FlightDAEError, ValueError) as exc:
        print(f"flightdae: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
