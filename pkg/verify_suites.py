# -*- coding: utf-8 -*-
"""
Verification suites run by `spin_invariance_report.py verify`.

  algebra     octonion norms, the double-cover calibration, rotor exponentials,
              the Z_4 lift, the metaunitary double cover and the generating
              loops lifted into the double covers
  characters  the character identities and the isotropy column of every row
  appendix    the G2 / Spin(7) / Spin(9) dimension counts and action tables
  all         the three above

Each suite returns a list of CheckResult; nothing is raised until a caller
asks for it with require_all().
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from characters import decomposition_identities, table1_isotropy_check, verify_decomposition
from clifford_spin import (
    Multivector,
    SpinElement,
    bivector_exp,
    bivector_from_so,
    lambda_map,
    plane_rotation,
    random_rotor,
)
from exceptional import (
    automorphism_residual,
    cover_loop_check,
    cover_name,
    fano_lines,
    is_cayley_triple,
    metaunitary_check,
    so7_orbit_span_dim,
    spin7_clifford_check,
    spin7_equivariance_residual,
    spin9_commutator_identity,
    spin9_isotropy_checks,
    spin9_spin_summand_check,
    spin9_tangent_report,
    su3_extend_to_g2,
    z4_lift_order,
)
from lie_adjoint import adjoint_character_residual, lie_basis
from lifting import loop_parity
from normed_algebras import Octonion, oct_from_quaternion, oct_mul_batch, quat_mul
from run_config import CHARACTER_TOL, CHARACTER_TRIALS, COVER_TOL, DEFAULT_SEED, ISOTROPY_TRIALS
from sphere_actions import (
    ActionSpec,
    Family,
    isotropy_path_differential,
    random_group_element,
    repeat_path,
    sample_stabilizer,
    stabilizer_loop,
    stabilizer_matrix,
)
from spin_errors import VerificationError

logger = logging.getLogger(__name__)

# Rows and parameters the characters suite checks.
ISOTROPY_ROWS = (
    (Family.SO, 4), (Family.SO, 6), (Family.U, 2), (Family.SU, 3), (Family.Sp, 2),
    (Family.SpSp1, 1), (Family.SpSp1, 2), (Family.SpU1, 1), (Family.SpU1, 2), (Family.SpU1, 3),
    (Family.G2, 0), (Family.Spin7, 0), (Family.Spin9, 0),
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    passed: bool
    criterion: str

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return f"[{status:>4}] {self.suite:<10} {self.name:<58} {self.value:.3e}  ({self.criterion})"


def residual_check(suite: str, name: str, value: float, tol: float) -> CheckResult:
    return CheckResult(suite, name, float(value), bool(value < tol), f"< {tol:g}")


def exact_check(suite: str, name: str, value, expected) -> CheckResult:
    return CheckResult(suite, name, float(value), bool(value == expected), f"== {expected}")


def require_all(results: List[CheckResult]) -> None:
    """Raise VerificationError naming the first failing identity."""
    for r in results:
        if not r.passed:
            raise VerificationError(f"{r.suite}: {r.name} = {r.value:.3e}, expected {r.criterion}",
                                    identity=r.name, residual=r.value)


def algebra_suite(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    out: List[CheckResult] = []

    x, y = rng.normal(size=(10_000, 8)), rng.normal(size=(10_000, 8))
    norms = np.linalg.norm(oct_mul_batch(x, y), axis=1) - np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    out.append(residual_check("algebra", "octonion norm multiplicativity (10^4 pairs)", np.abs(norms).max(), 1e-10))

    worst = 0.0
    for p, q in zip(rng.normal(size=(100, 4)), rng.normal(size=(100, 4))):
        product = oct_from_quaternion(p) * oct_from_quaternion(q)
        worst = max(worst, float(np.abs((product - oct_from_quaternion(quat_mul(p, q))).coeffs).max()))
    out.append(residual_check("algebra", "span{1, i1, i2, i4} is a copy of H (100 pairs)", worst, 1e-12))

    for dim in (3, 7, 11):
        worst = 0.0
        for k in range(64):
            theta = k * np.pi / 32
            rotor = bivector_exp(Multivector.blade(dim, [1, 2], 0.5 * theta))
            worst = max(worst, float(np.abs(lambda_map(rotor) - plane_rotation(dim, 0, 1, theta)).max()))
        out.append(residual_check("algebra", f"double-cover calibration in Cl_{dim}", worst, 1e-9))

    worst_strict = worst_series = 0.0
    for _ in range(10):
        s = random_rotor(6, rng, scale=0.5)
        worst_strict = max(worst_strict, float(np.abs(lambda_map(s) - lambda_map(s, strict=True)).max()))
        a = rng.uniform(-0.5, 0.5, size=(6, 6))
        beta = bivector_from_so(a - a.T)
        planes, series = bivector_exp(beta), bivector_exp(beta, method="series")
        worst_series = max(worst_series, float(np.abs(planes.mv.to_dense() - series.mv.to_dense()).max()))
    out.append(residual_check("algebra", "lambda fast path = grade-checked lambda", worst_strict, 1e-10))
    out.append(residual_check("algebra", "rotor exponential: planes = series", worst_series, 1e-10))

    for n in range(2, 8):
        out.append(exact_check("algebra", f"Z_4 lift order of e_{n} e_{n + 1}", z4_lift_order(n), 4))
        lift = Multivector.blade(n + 1, [n, n + 1])
        square = lift * lift
        out.append(exact_check("algebra", f"(e_{n} e_{n + 1})^2 = -1", float(square == Multivector.scalar(n + 1, -1.0)), 1.0))
        expected = np.diag([1.0] * (n - 1) + [-1.0, -1.0])
        out.append(residual_check("algebra", f"lambda(e_{n} e_{n + 1}) = diag(Id, -Id_2)",
                                  np.abs(lambda_map(SpinElement(lift)) - expected).max(), 1e-12))

    so3 = isotropy_path_differential(ActionSpec(Family.SO, 2), stabilizer_loop(ActionSpec(Family.SO, 2), 128))
    out.append(exact_check("algebra", "generator loop of SO(2) has parity 1", loop_parity(so3), 1))
    out.append(exact_check("algebra", "generator loop traversed twice has parity 0", loop_parity(repeat_path(so3, 2)), 0))

    for n in (1, 2, 3):
        report = metaunitary_check(n, rng, trials=100)
        worst = max(v for k, v in report.items() if k != "passed")
        out.append(residual_check("algebra", f"metaunitary MU({n + 1}) closure, inverses, fibres", worst, 1e-9))

    for family, n in ((Family.SO, 2), (Family.SO, 5), (Family.U, 2), (Family.SpU1, 1), (Family.SpU1, 2),
                      (Family.SpSp1, 1), (Family.SpSp1, 2)):
        spec = ActionSpec(family, n)
        report = cover_loop_check(spec, steps=128)
        worst = max(v for k, v in report.items() if k not in ("passed", "parity_twice"))
        out.append(residual_check("algebra", f"{spec.group_name} loop lifts to the deck element of {cover_name(spec)}",
                                  worst, COVER_TOL))
        out.append(exact_check("algebra", f"{spec.group_name} loop twice: closed in the cover, isotropy parity",
                               report["parity_twice"], 0.0))
    return out


def characters_suite(seed: int = DEFAULT_SEED, trials: int = CHARACTER_TRIALS,
                     isotropy_trials: int = ISOTROPY_TRIALS) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    out: List[CheckResult] = []
    for identity in decomposition_identities():
        residual = verify_decomposition(identity.lhs, identity.rhs, identity.sampler, trials, rng)
        out.append(residual_check("characters", identity.name, residual, CHARACTER_TOL))

    for family, n in ISOTROPY_ROWS:
        spec = ActionSpec(family, n)
        check = table1_isotropy_check(spec, isotropy_trials, rng)
        for label, residual in check.residuals.items():
            out.append(residual_check("characters", f"isotropy of {spec.group_name}: {label}", residual, check.tol))

    for family, n in ((Family.SO, 4), (Family.U, 2), (Family.SU, 2), (Family.Sp, 1), (Family.SpU1, 1), (Family.SpSp1, 2)):
        spec = ActionSpec(family, n)
        basis = lie_basis(spec)
        worst = 0.0
        for _ in range(20):
            h = stabilizer_matrix(spec, sample_stabilizer(spec, rng))
            worst = max(worst, abs(adjoint_character_residual(spec, basis, h)))
        out.append(residual_check("characters", f"Ad G | H = Ad H + sigma for {spec.group_name}", worst, CHARACTER_TOL))
    return out


def appendix_suite(seed: int = DEFAULT_SEED) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    out: List[CheckResult] = []
    units = {k: Octonion.basis(k) for k in range(8)}

    out.append(exact_check("appendix", "(i1, i2, i3) is a Cayley triple", is_cayley_triple(units[1], units[2], units[3]), True))
    out.append(exact_check("appendix", "(i1, i2, i4) is not a Cayley triple",
                           is_cayley_triple(units[1], units[2], units[4]), False))
    out.append(exact_check("appendix", "octonion multiplication has 7 quaternionic lines", len(fano_lines()), 7))

    worst = 0.0
    for _ in range(20):
        phi = su3_extend_to_g2(random_group_element("SU", 3, rng))
        worst = max(worst, automorphism_residual(phi, rng.normal(size=(100, 8)), rng.normal(size=(100, 8))))
    out.append(residual_check("appendix", "SU(3) extends to automorphisms of O (20 x 100)", worst, 1e-8))

    out.append(residual_check("appendix", "Cl_7 relations for L_u on O (all basis pairs)", spin7_clifford_check(), 1e-12))
    out.append(residual_check("appendix", "Cl_7 relations for random unit u, v", spin7_clifford_check(rng, 50), 1e-10))
    out.append(exact_check("appendix", "dim so(7) . 1", so7_orbit_span_dim(), 7))
    worst = 0.0
    for theta in np.linspace(0.1, 3.0, 5):
        for i, j in ((0, 1), (2, 5), (3, 6)):
            rotor = bivector_exp(Multivector.blade(7, [i + 1, j + 1], 0.5 * theta))
            worst = max(worst, spin7_equivariance_residual(rotor))
    out.append(residual_check("appendix", "Spin(7) on O is equivariant over lambda", worst, 1e-10))

    worst = 0.0
    for _ in range(50):
        u, v = Octonion(rng.normal(size=8)), Octonion(rng.normal(size=8))
        worst = max(worst, spin9_commutator_identity(u, v, float(rng.normal()), float(rng.normal())))
    out.append(residual_check("appendix", "Spin(9) generator bracket at (1, 0)", worst, 1e-10))

    tangent = spin9_tangent_report()
    out.append(exact_check("appendix", "dim spin(9) . (1, 0)", tangent["dim"], 15))
    out.append(exact_check("appendix", "spin(9) . (1, 0) contains (0, O)", tangent["contains_second_factor"], True))
    out.append(exact_check("appendix", "spin(9) . (1, 0) contains (Im O, 0)", tangent["contains_imaginary_first_factor"], True))

    iso = spin9_isotropy_checks()
    out.append(residual_check("appendix", "T_{u,v} (1, 0) = 0", iso["annihilation_residual"], 1e-10))
    out.append(exact_check("appendix", "dim span T_{u,v}", iso["span_dim"], 21))
    out.append(residual_check("appendix", "phi(T_{u,v}) is skew", iso["phi_skew_residual"], 1e-10))
    out.append(exact_check("appendix", "rank phi", iso["phi_rank"], 21))
    out.append(residual_check("appendix", "Im(O) block of T_{u,v} is -phi", iso["block_residual"], 1e-10))
    out.append(exact_check("appendix", "phi on the lines through each i_m is independent", iso["fano_independence"], True))
    out.append(residual_check("appendix", "phi(T_{i1,i2}): i3 -> -i6 -> i3, i5 -> i7 -> -i5", iso["table_residual"], 1e-10))
    out.append(residual_check("appendix", "(0, O) summand has the character of Delta_7",
                              spin9_spin_summand_check(rng, 20), 1e-8))
    return out


SUITES: Dict[str, Callable[[int], List[CheckResult]]] = {
    "algebra": algebra_suite,
    "characters": characters_suite,
    "appendix": appendix_suite,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> List[CheckResult]:
    if name == "all":
        return [r for suite in SUITES.values() for r in suite(seed)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    results = SUITES[name](seed)
    logger.info("%s suite: %d/%d checks passed", name, sum(r.passed for r in results), len(results))
    return results
