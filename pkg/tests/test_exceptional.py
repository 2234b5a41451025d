from itertools import combinations

import numpy as np
import pytest

import exceptional
from clifford_spin import lambda_map, random_rotor
from exceptional import (
    SU3_REAL_BASIS,
    OctPairVector,
    automorphism_residual,
    complex_coordinates,
    cover_element,
    cover_loop_check,
    cover_name,
    fano_lines,
    g2_isotropy_matrix,
    is_cayley_triple,
    isotropy_phi,
    metaunitary_check,
    so7_orbit_span_dim,
    spin7_clifford_check,
    spin7_equivariance_residual,
    spin7_module_matrix,
    spin7_stabilizer_sample,
    spin9_commutator_identity,
    spin9_isotropy_checks,
    spin9_isotropy_sample,
    spin9_spin_summand_check,
    spin9_tangent_dim,
    spin9_tangent_report,
    spin9_wedge,
    spin9_wedge_blocks,
    su3_extend_to_g2,
    z4_lift_order,
)
from normed_algebras import Octonion, oct_from_quaternion, qmat_scalar
from sphere_actions import ActionSpec, Family, random_group_element, realize_element
from spin_errors import NotUnitError, UnsupportedFamilyError

UNITS = {k: Octonion.basis(k) for k in range(8)}


def test_cayley_triples():
    assert is_cayley_triple(UNITS[1], UNITS[2], UNITS[3])
    assert not is_cayley_triple(UNITS[1], UNITS[2], UNITS[4])
    with pytest.raises(NotUnitError):
        is_cayley_triple(UNITS[0], UNITS[2], UNITS[3])


def test_su3_coordinates_come_from_the_complex_structure():
    assert SU3_REAL_BASIS == complex_coordinates(1, (2, 3, 5)) == (2, 4, 3, 7, 5, 6)
    for b, k in zip(SU3_REAL_BASIS[::2], SU3_REAL_BASIS[1::2]):
        assert UNITS[1] * UNITS[b] == UNITS[k]
    with pytest.raises(ValueError):
        complex_coordinates(1, (4,))
    with pytest.raises(ValueError):
        complex_coordinates(1, (1,))
    assert is_cayley_triple(UNITS[1], UNITS[2], oct_from_quaternion([0.0, 0.0, 0.0, 1.0])) is False


def test_fano_lines_cover_every_pair_once():
    lines = fano_lines()
    assert len(lines) == 7
    for a, b in combinations(range(1, 8), 2):
        assert sum(a in line and b in line for line in lines) == 1


def test_su3_extends_to_automorphisms():
    rng = np.random.default_rng(51)
    for _ in range(5):
        a = random_group_element("SU", 3, rng)
        phi = su3_extend_to_g2(a)
        assert automorphism_residual(phi, rng.normal(size=(50, 8)), rng.normal(size=(50, 8))) < 1e-8
        assert np.allclose(phi[:, 1], np.eye(8)[1])
        assert g2_isotropy_matrix(a).shape == (6, 6)


def test_su3_extension_needs_special_unitary():
    with pytest.raises(NotUnitError):
        su3_extend_to_g2(np.diag([1j, 1.0, 1.0]))


def test_spin7_module():
    assert spin7_clifford_check() < 1e-12
    assert spin7_clifford_check(np.random.default_rng(52), 20) < 1e-10
    assert so7_orbit_span_dim() == 7
    s = random_rotor(7, np.random.default_rng(53))
    rho = spin7_module_matrix(s)
    assert np.allclose(rho @ rho.T, np.eye(8), atol=1e-10)
    assert spin7_equivariance_residual(s) < 1e-9
    with pytest.raises(ValueError):
        spin7_module_matrix(random_rotor(5, np.random.default_rng(54)))


def test_spin7_stabilizer_fixes_one():
    rng = np.random.default_rng(59)
    for _ in range(5):
        a, s = spin7_stabilizer_sample(rng)
        phi = su3_extend_to_g2(a)
        rho = spin7_module_matrix(s)
        assert np.allclose(rho[:, 0], np.eye(8)[0], atol=1e-9)
        assert np.allclose(rho, phi, atol=1e-9)
        assert np.allclose(lambda_map(s), phi[1:, 1:], atol=1e-9)


def test_spin9_generator_brackets():
    rng = np.random.default_rng(55)
    for _ in range(10):
        u, v = Octonion(rng.normal(size=8)), Octonion(rng.normal(size=8))
        assert spin9_commutator_identity(u, v, float(rng.normal()), float(rng.normal())) < 1e-10
    w = spin9_wedge(1.0, Octonion(np.zeros(8)), 0.0, UNITS[3])
    assert np.allclose(w @ OctPairVector.base().array, np.concatenate([np.zeros(8), -2.0 * UNITS[3].conj().coeffs]))


def test_spin9_wedge_matches_its_block_form():
    for (a, b) in combinations(range(8), 2):
        for r, r2 in ((0.0, 0.0), (1.0, 0.0), (0.5, -2.0)):
            blocks = spin9_wedge_blocks(r, UNITS[a], r2, UNITS[b])
            assert np.abs(spin9_wedge(r, UNITS[a], r2, UNITS[b]) - blocks).max() < 1e-12
    # u = 1: the first factor at (1, 0) is conj(v) - v
    at_base = spin9_wedge(0.0, UNITS[0], 0.0, UNITS[5]) @ OctPairVector.base().array
    assert np.allclose(at_base[:8], (UNITS[5].conj() - UNITS[5]).coeffs)
    assert np.allclose(at_base[8:], 0.0)


def test_spin9_commutator_identity_sees_a_sign_error(monkeypatch):
    u, v = UNITS[1], UNITS[2]
    assert spin9_commutator_identity(u, v, 0.3, -0.7) < 1e-12
    monkeypatch.setattr(exceptional, "spin9_wedge_blocks", lambda r, u, r2, v: -spin9_wedge(r, u, r2, v))
    assert spin9_commutator_identity(u, v, 0.3, -0.7) > 1.0


def test_spin9_tangent_space():
    assert spin9_tangent_dim() == 15
    report = spin9_tangent_report()
    assert report["contains_second_factor"]
    assert report["contains_imaginary_first_factor"]


def test_spin9_isotropy_algebra():
    checks = spin9_isotropy_checks()
    assert checks["annihilation_residual"] < 1e-10
    assert checks["span_dim"] == 21
    assert checks["phi_rank"] == 21
    assert checks["phi_skew_residual"] < 1e-10
    assert checks["block_residual"] < 1e-10
    assert checks["fano_independence"]
    assert checks["table_residual"] < 1e-10


def test_phi_of_the_first_pair():
    phi = isotropy_phi(UNITS[1], UNITS[2])
    assert np.allclose(phi[:, 2], 4.0 * np.eye(7)[5])
    assert np.allclose(phi[:, 0], 0.0)


def test_spin9_isotropy_samples_fix_the_base_point():
    g, s = spin9_isotropy_sample(np.random.default_rng(56))
    assert np.allclose(g @ g.T, np.eye(16), atol=1e-10)
    assert np.allclose(g[:, 0], np.eye(16)[0], atol=1e-10)
    assert s.dim == 7
    assert spin9_spin_summand_check(np.random.default_rng(57), trials=5) < 1e-8


@pytest.mark.parametrize("n", range(2, 8))
def test_z4_lift(n):
    assert z4_lift_order(n) == 4


def test_z4_lift_needs_a_sphere_of_dimension_two():
    with pytest.raises(ValueError):
        z4_lift_order(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_metaunitary_double_cover(n):
    report = metaunitary_check(n, np.random.default_rng(58), trials=20)
    assert report["passed"] == 1.0


@pytest.mark.parametrize("family, n", [
    (Family.SO, 2), (Family.SO, 4), (Family.U, 1), (Family.U, 3),
    (Family.SpU1, 1), (Family.SpU1, 2), (Family.SpSp1, 1), (Family.SpSp1, 2),
])
def test_generating_loop_lifts_to_the_deck_element(family, n):
    spec = ActionSpec(family, n)
    report = cover_loop_check(spec, steps=128)
    assert report["passed"] == 1.0, report
    assert report["parity_twice"] == 0.0


def test_quotient_cover_elements():
    spec = ActionSpec(Family.SpSp1, 2)
    deck = cover_element(spec, 1.0)
    assert np.allclose(deck["Sp"], -qmat_scalar([1.0, 0.0, 0.0, 0.0], 3))
    assert np.allclose(deck["Sp1"], [-1.0, 0.0, 0.0, 0.0])
    assert np.allclose(realize_element(spec, deck), np.eye(12))
    assert cover_name(spec) == "Sp(3) x Sp(1)"
    u = ActionSpec(Family.U, 2)
    half = cover_element(u, 0.5)
    assert half["z"] ** 2 == pytest.approx(np.linalg.det(half["U"]))


def test_simply_connected_rows_have_nothing_to_lift():
    with pytest.raises(UnsupportedFamilyError):
        cover_loop_check(ActionSpec(Family.SU, 2))
    with pytest.raises(UnsupportedFamilyError):
        cover_element(ActionSpec(Family.SO, 3), 0.5)
