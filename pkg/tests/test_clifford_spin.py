import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy import linalg

from clifford_spin import (
    Multivector,
    SpinElement,
    bivector_exp,
    bivector_exp_factors,
    bivector_from_so,
    lambda_map,
    plane_rotation,
    random_rotor,
    so_from_bivector,
    so_log_small,
    spin_left_multiply,
)
from spin_errors import DimensionCeilingError, DimensionMismatchError, InvalidSpinElementError, StepTooLargeError


def test_generators_square_to_minus_one():
    for k in range(1, 5):
        e = Multivector.blade(4, [k])
        assert e * e == Multivector.scalar(4, -1.0)


def test_generators_anticommute():
    e12 = Multivector.blade(3, [1, 2])
    assert Multivector.blade(3, [2, 1]) == -e12
    assert e12 * e12 == Multivector.scalar(3, -1.0)


def test_blade_bitmasks():
    assert Multivector.blade(5, [1, 3]).terms == {0b101: 1.0}
    assert Multivector.vector(3, [1.0, 2.0, 0.0]).terms == {1: 1.0, 2: 2.0}


@pytest.mark.parametrize("dim", [3, 7, 11])
def test_double_cover_calibration(dim):
    for k in range(0, 64, 7):
        theta = k * np.pi / 32
        rotor = bivector_exp(Multivector.blade(dim, [1, 2], 0.5 * theta))
        assert np.abs(lambda_map(rotor) - plane_rotation(dim, 0, 1, theta)).max() < 1e-9


@seed(11)
@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_lambda_is_a_homomorphism(state):
    rng = np.random.default_rng(state)
    s, t = random_rotor(5, rng), random_rotor(5, rng)
    assert np.allclose(lambda_map(s * t), lambda_map(s) @ lambda_map(t), atol=1e-10)
    assert np.allclose(lambda_map(-s), lambda_map(s), atol=1e-12)


def test_lambda_of_exponential_is_matrix_exponential():
    rng = np.random.default_rng(12)
    a = rng.uniform(-1.0, 1.0, size=(6, 6))
    omega = a - a.T
    assert np.allclose(lambda_map(bivector_exp(bivector_from_so(omega))), linalg.expm(omega), atol=1e-10)
    assert np.allclose(so_from_bivector(bivector_from_so(omega)), omega)


def test_strict_lambda_agrees():
    s = random_rotor(5, np.random.default_rng(13))
    assert np.allclose(lambda_map(s), lambda_map(s, strict=True), atol=1e-10)


def test_plane_and_series_exponentials_agree():
    rng = np.random.default_rng(14)
    a = rng.uniform(-0.5, 0.5, size=(5, 5))
    beta = bivector_from_so(a - a.T)
    planes, series = bivector_exp(beta), bivector_exp(beta, method="series")
    assert planes.mv.allclose(series.mv, atol=1e-10)


def test_spin_left_multiply_matches_product():
    rng = np.random.default_rng(15)
    a = rng.uniform(-0.3, 0.3, size=(6, 6))
    beta = bivector_from_so(a - a.T)
    s = random_rotor(6, rng)
    assert spin_left_multiply(bivector_exp_factors(beta), s).mv.allclose((bivector_exp(beta) * s).mv, atol=1e-10)


def test_spin_inverse():
    s = random_rotor(4, np.random.default_rng(16))
    assert (s * s.inverse()).distance_to_scalar(1.0) < 1e-12


def test_full_turn_lifts_to_minus_one():
    rotor = bivector_exp(Multivector.blade(4, [2, 3], np.pi))
    assert rotor.distance_to_scalar(-1.0) < 1e-12
    assert np.allclose(lambda_map(rotor), np.eye(4))


def test_log_rejects_large_steps():
    with pytest.raises(StepTooLargeError):
        so_log_small(plane_rotation(3, 0, 1, 1.0))
    omega = so_log_small(plane_rotation(3, 0, 1, 0.1))
    assert omega[1, 0] == pytest.approx(0.1)


def test_errors():
    with pytest.raises(DimensionCeilingError):
        Multivector.scalar(16)
    with pytest.raises(DimensionMismatchError):
        Multivector.scalar(3) * Multivector.scalar(4)
    with pytest.raises(InvalidSpinElementError):
        SpinElement(Multivector.vector(3, [1.0, 0.0, 0.0]))
    with pytest.raises(InvalidSpinElementError):
        SpinElement(Multivector.scalar(3, 2.0))
