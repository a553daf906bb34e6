from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flightdae.airframe import InertiaTensor, inertia_determinant, validate
from flightdae.errors import ValidationError
from helpers import SYNTHETIC, random_inertia


def test_synthetic_airframe_is_valid():
    assert validate(SYNTHETIC) is SYNTHETIC
    assert SYNTHETIC.m == 1000.0
    assert not SYNTHETIC.inertia.is_symmetric


def test_inertia_matrix_layout():
    J = InertiaTensor(1.0, 2.0, 3.0, D=0.1, E=0.2, F=0.3).matrix()
    np.testing.assert_array_equal(J, [[1.0, -0.3, -0.2], [-0.3, 2.0, -0.1], [-0.2, -0.1, 3.0]])
    np.testing.assert_array_equal(J, J.T)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_determinant_matches_numpy(seed):
    inertia = random_inertia(np.random.default_rng(seed))
    assert inertia_determinant(inertia) == pytest.approx(np.linalg.det(inertia.matrix()), rel=1e-10)


def test_determinant_cached_on_params():
    assert SYNTHETIC.T0 == pytest.approx(np.linalg.det(SYNTHETIC.inertia.matrix()), rel=1e-12)


@pytest.mark.parametrize(
    "change, message",
    [
        ({"m": 0.0}, "non-positive mass"),
        ({"S": -1.0}, "non-positive wing area"),
        ({"b": 0.0}, "non-positive reference length"),
        ({"h_ini": 25000.0}, "h_ini"),
        ({"alpha_warn": 0.0}, "alpha_warn"),
        ({"m": float("nan")}, "non-finite"),
    ],
)
def test_rejects_bad_scalars(change, message):
    with pytest.raises(ValidationError, match=message):
        validate(replace(SYNTHETIC, **change))


@pytest.mark.parametrize(
    "inertia, message",
    [
        (InertiaTensor(0.0, 1.0, 1.0), "non-positive moment of inertia"),
        (InertiaTensor(1.0, 1.0, 1.0, F=2.0), "not positive definite"),
        (InertiaTensor(1.0, 1.0, 1.0, D=0.9, E=0.9, F=0.9), "not positive definite"),
    ],
)
def test_rejects_bad_inertia(inertia, message):
    with pytest.raises(ValidationError, match=message):
        validate(replace(SYNTHETIC, inertia=inertia))


@pytest.mark.parametrize(
    "field, value, message",
    [
        ("C_L_alpha", 0.0, "lift-curve slope"),
        ("C_D0", -0.01, "zero-lift drag"),
        ("K_CD", -0.1, "induced-drag"),
    ],
)
def test_rejects_bad_force_constants(field, value, message):
    fc = replace(SYNTHETIC.force_constants, **{field: value})
    with pytest.raises(ValidationError, match=message):
        validate(replace(SYNTHETIC, force_constants=fc))


def test_rejects_singular_control_effectiveness():
    sd = replace(SYNTHETIC.derivatives, C_l_delta_l=0.1, C_l_delta_n=0.2, C_n_delta_l=0.05, C_n_delta_n=0.1)
    with pytest.raises(ValidationError, match="singular control effectiveness"):
        validate(replace(SYNTHETIC, derivatives=sd))
    sd = replace(SYNTHETIC.derivatives, C_m_delta_m=0.0)
    with pytest.raises(ValidationError, match="C_m_delta_m"):
        validate(replace(SYNTHETIC, derivatives=sd))


def test_symmetry_flag():
    assert InertiaTensor(1.0, 2.0, 3.0, E=0.4).is_symmetric
    assert not InertiaTensor(1.0, 2.0, 3.0, D=0.1).is_symmetric
