"""Aircraft design constants and their validation.

The model needs 29 airframe constants plus the take-off altitude.  They are
grouped into an inertia tensor, five aerodynamic-force constants and
fourteen stability derivatives.  All values are SI, angles in radians.

Inertia sign convention: ``A, B, C`` are the moments of inertia about the
body x, y and z axes; ``D, E, F`` are the products of inertia in the y-z,
x-z and x-y planes.  The inertia matrix is::

    [[ A, -F, -E],
     [-F,  B, -D],
     [-E, -D,  C]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from flightdae.errors import ValidationError

H_MAX = 20000.0
DEFAULT_ALPHA_WARN = 0.26  # rad, onset of stall on a typical wing


@dataclass(frozen=True, slots=True)
class InertiaTensor:
    A: float
    B: float
    C: float
    D: float = 0.0
    E: float = 0.0
    F: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.A, -self.F, -self.E],
                [-self.F, self.B, -self.D],
                [-self.E, -self.D, self.C],
            ]
        )

    @property
    def is_symmetric(self) -> bool:
        """True when x_b-z_b is a plane of symmetry (D = F = 0)."""
        return self.D == 0.0 and self.F == 0.0


@dataclass(frozen=True, slots=True)
class AeroForceConstants:
    C_L0: float
    C_L_alpha: float
    C_D0: float
    K_CD: float
    C_C_beta: float


@dataclass(frozen=True, slots=True)
class StabilityDerivatives:
    C_l_beta: float
    C_l_p: float
    C_l_r: float
    C_l_delta_l: float
    C_l_delta_n: float
    C_m0: float
    C_m_alpha: float
    C_m_q: float
    C_m_delta_m: float
    C_n_beta: float
    C_n_p: float
    C_n_r: float
    C_n_delta_l: float
    C_n_delta_n: float

    @property
    def lateral_determinant(self) -> float:
        """Determinant of the aileron/rudder effectiveness matrix."""
        return self.C_l_delta_l * self.C_n_delta_n - self.C_l_delta_n * self.C_n_delta_l


@dataclass(frozen=True, slots=True)
class AirframeParams:
    m: float
    S: float
    c: float
    b: float
    inertia: InertiaTensor
    force_constants: AeroForceConstants
    derivatives: StabilityDerivatives
    h_ini: float = 0.0
    alpha_warn: float = DEFAULT_ALPHA_WARN
    T0: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "T0", inertia_determinant(self.inertia))


def inertia_determinant(inertia: InertiaTensor) -> float:
    """Determinant of the inertia matrix, expanded in the six tensor entries."""
    A, B, C, D, E, F = inertia.A, inertia.B, inertia.C, inertia.D, inertia.E, inertia.F
    return A * B * C - A * D * D - B * E * E - C * F * F - 2.0 * D * E * F


def _check_inertia(inertia: InertiaTensor) -> None:
    values = (inertia.A, inertia.B, inertia.C, inertia.D, inertia.E, inertia.F)
    if not all(math.isfinite(v) for v in values):
        raise ValidationError("non-finite inertia entry")
    if inertia.A <= 0.0 or inertia.B <= 0.0 or inertia.C <= 0.0:
        raise ValidationError("non-positive moment of inertia")
    # leading principal minors of the inertia matrix
    minor2 = inertia.A * inertia.B - inertia.F * inertia.F
    if minor2 <= 0.0 or inertia_determinant(inertia) <= 0.0:
        raise ValidationError("inertia tensor is not positive definite")


def validate(params: AirframeParams) -> AirframeParams:
    """Check every airframe invariant and return ``params`` unchanged.

    Raises :class:`~flightdae.errors.ValidationError` naming the first
    violated invariant.
    """
    for name in ("m", "S", "c", "b", "h_ini", "alpha_warn"):
        if not math.isfinite(getattr(params, name)):
            raise ValidationError(f"non-finite value for {name}")
    if params.m <= 0.0:
        raise ValidationError("non-positive mass")
    if params.S <= 0.0:
        raise ValidationError("non-positive wing area")
    if params.c <= 0.0 or params.b <= 0.0:
        raise ValidationError("non-positive reference length")
    _check_inertia(params.inertia)

    fc = params.force_constants
    for name in fc.__slots__:
        if not math.isfinite(getattr(fc, name)):
            raise ValidationError(f"non-finite value for {name}")
    if fc.C_L_alpha <= 0.0:
        raise ValidationError("non-positive lift-curve slope")
    if fc.C_D0 < 0.0:
        raise ValidationError("negative zero-lift drag coefficient")
    if fc.K_CD < 0.0:
        raise ValidationError("negative induced-drag factor")

    sd = params.derivatives
    for name in sd.__slots__:
        if not math.isfinite(getattr(sd, name)):
            raise ValidationError(f"non-finite value for {name}")
    if sd.lateral_determinant == 0.0:
        raise ValidationError("singular control effectiveness")
    if sd.C_m_delta_m == 0.0:
        raise ValidationError("zero elevator effectiveness (C_m_delta_m)")

    if not 0.0 <= params.h_ini <= H_MAX:
        raise ValidationError(f"h_ini = {params.h_ini} m outside [0, {H_MAX:.0f}] m")
    if params.alpha_warn <= 0.0:
        raise ValidationError("alpha_warn must be positive")
    return params
