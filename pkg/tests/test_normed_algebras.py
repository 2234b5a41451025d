import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from normed_algebras import (
    FANO_LINES,
    OCT_TABLE,
    Octonion,
    Quaternion,
    complex_from_realized,
    dequaternionify,
    iota_embed,
    oct_commutator,
    oct_conj_parts,
    oct_from_quaternion,
    oct_inner,
    oct_left_matrix,
    oct_mul,
    oct_mul_batch,
    oct_right_matrix,
    qmat_mul,
    quat_inverse,
    quat_mul,
    quaternionic_complex_form,
    realize_complex,
    realize_quaternionic,
    right_scalar_action,
)
from spin_errors import DimensionMismatchError, NotUnitError

coefficient = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
octonions = arrays(np.float64, (8,), elements=coefficient)
quaternions = arrays(np.float64, (4,), elements=coefficient)


def test_fano_relations_in_table():
    for a, b, c in FANO_LINES:
        assert OCT_TABLE[a, b, c] == 1.0
        assert OCT_TABLE[b, a, c] == -1.0
        assert OCT_TABLE[b, c, a] == 1.0
    assert OCT_TABLE[1, 2, 4] == 1.0


def test_quaternion_units_multiply_like_hamilton():
    i, j, k = (Quaternion.basis(n) for n in (1, 2, 3))
    assert i * j == k
    assert j * k == i
    assert k * i == j
    assert i * i == -Quaternion.one()


def test_octonions_are_not_associative():
    i1, i2, i3 = (Octonion.basis(n) for n in (1, 2, 3))
    assert not ((i1 * i2) * i3).allclose((i1 * (i2 * i3)).coeffs)


@seed(1)
@settings(max_examples=60, deadline=None)
@given(x=octonions, y=octonions)
def test_octonion_norm_is_multiplicative(x, y):
    product = Octonion(x) * Octonion(y)
    assert product.norm() == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y), rel=1e-9, abs=1e-9)


@seed(2)
@settings(max_examples=60, deadline=None)
@given(x=octonions, y=octonions)
def test_octonions_are_alternative(x, y):
    x, y = Octonion(x), Octonion(y)
    assert (x * (x * y)).allclose(((x * x) * y).coeffs, atol=1e-8)
    assert ((y * x) * x).allclose((y * (x * x)).coeffs, atol=1e-8)


@seed(3)
@settings(max_examples=40, deadline=None)
@given(z=octonions, w=octonions)
def test_left_and_right_matrices(z, w):
    assert np.allclose(oct_left_matrix(z) @ w, (Octonion(z) * Octonion(w)).coeffs, atol=1e-9)
    assert np.allclose(oct_right_matrix(z) @ w, (Octonion(w) * Octonion(z)).coeffs, atol=1e-9)


def test_batch_product_matches_scalar_product():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=(20, 8)), rng.normal(size=(20, 8))
    batch = oct_mul_batch(x, y)
    for row in range(20):
        assert np.allclose(batch[row], oct_mul(Octonion(x[row]), Octonion(y[row])).coeffs)


def test_commutator_of_units():
    i1, i2, i4 = (Octonion.basis(n) for n in (1, 2, 4))
    assert oct_commutator(i1, i2) == i4 * 2.0


def test_conjugate_parts():
    x = Octonion([3.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    conj, re, im, norm = oct_conj_parts(x)
    assert conj.allclose([3.0, 0.0, -4.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert (re, norm) == (3.0, 5.0)
    assert im.allclose([0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert oct_mul(x, conj).allclose(Octonion.basis(0).coeffs * 25.0)


@seed(4)
@settings(max_examples=40, deadline=None)
@given(q=quaternions)
def test_quaternion_inverse(q):
    if np.linalg.norm(q) < 1e-3:
        return
    assert np.allclose(quat_mul(q, quat_inverse(q)), [1.0, 0.0, 0.0, 0.0], atol=1e-9)


@seed(5)
@settings(max_examples=40, deadline=None)
@given(p=quaternions, q=quaternions)
def test_quaternions_sit_inside_the_octonions(p, q):
    x, y = oct_from_quaternion(p), oct_from_quaternion(q)
    assert (x * y).allclose(oct_from_quaternion(quat_mul(p, q)).coeffs, atol=1e-8)
    assert oct_inner(x, y) == pytest.approx(float(p @ q), abs=1e-8)
    assert np.flatnonzero(oct_from_quaternion([0.0, 0.0, 0.0, 1.0]).coeffs).tolist() == [4]


def test_realizations_are_multiplicative():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert np.allclose(realize_complex(a @ b).entries, (realize_complex(a) @ realize_complex(b)).entries)
    assert np.allclose(complex_from_realized(realize_complex(a)), a)

    p, q = rng.normal(size=(2, 2, 4)), rng.normal(size=(2, 2, 4))
    assert np.allclose(realize_quaternionic(qmat_mul(p, q)).entries,
                       realize_quaternionic(p).entries @ realize_quaternionic(q).entries)
    assert np.allclose(dequaternionify(realize_quaternionic(p)), p)
    assert np.allclose(quaternionic_complex_form(qmat_mul(p, q)),
                       quaternionic_complex_form(p) @ quaternionic_complex_form(q))


def test_realized_matrices_commute_with_their_structure():
    rng = np.random.default_rng(6)
    assert realize_complex(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))).structure_residual() < 1e-12
    assert realize_quaternionic(rng.normal(size=(2, 2, 4))).structure_residual() < 1e-12


def test_right_scalars_commute_with_left_matrices():
    rng = np.random.default_rng(7)
    a = realize_quaternionic(rng.normal(size=(3, 3, 4))).entries
    q = rng.normal(size=4)
    r = right_scalar_action(q / np.linalg.norm(q), 3)
    assert np.allclose(a @ r, r @ a)


def test_iota_embed():
    assert iota_embed(1j) == Quaternion.basis(1)
    with pytest.raises(NotUnitError):
        iota_embed(2.0)


def test_wrong_coefficient_count():
    with pytest.raises(DimensionMismatchError):
        Octonion([1.0, 2.0, 3.0])
