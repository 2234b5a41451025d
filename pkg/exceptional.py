# -*- coding: utf-8 -*-
"""
Explicit checks for the exceptional transitive actions: G2 on S^6, Spin(7)
on S^7 and Spin(9) on S^15, all built from octonion left multiplication,
plus the Z_4 lift example, the metaunitary double cover of U(n+1) and the
generating stabilizer loops lifted into the double covers of G.

Spin(9) is generated inside End(O^2) = R^{16x16} by the symmetric blocks
    M(r, u) = [[r, L_u], [L_conj(u), -r]]
and the wedge (r, u) ^ (r', v) is realized as the real commutator
[M(r, u), M(r', v)]. With this convention
    [M(1, 0), M(0, v)] (1, 0) = (0, -2 conj(v))
exactly.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy import linalg

from clifford_spin import Multivector, SpinElement, bivector_exp, bivector_from_so, lambda_map, mv_mul
from lifting import lift_path, loop_parity
from normed_algebras import (
    OCT_TABLE,
    Octonion,
    oct_commutator,
    oct_inner,
    oct_left_matrix,
    qmat_scalar,
    realize_complex,
)
from run_config import CLIFFORD_DIM_MAX, COVER_TOL, DEFAULT_STEPS, RANK_TOL, UNIT_TOL
from sphere_actions import (
    LOOP_FAMILIES,
    ActionSpec,
    Family,
    RotationPath,
    isotropy_path_differential,
    loop_element,
    realize_element,
    repeat_path,
    stabilizer_loop,
)
from spin_errors import DimensionCeilingError, NotUnitError, UnsupportedFamilyError

logger = logging.getLogger(__name__)

IMAGINARY_UNITS: Tuple[Octonion, ...] = tuple(Octonion.basis(k) for k in range(1, 8))


def complex_coordinates(structure: int, units: Tuple[int, ...]) -> Tuple[int, ...]:
    """Real coordinate slots (b, k) of C^m = span_C{i_b} under L_{i_structure}, where i_structure i_b = i_k."""
    i = Octonion.basis(structure)
    slots = []
    for b in units:
        image = i * Octonion.basis(b)
        partners = [k for k in range(1, 8) if abs(oct_inner(image, Octonion.basis(k)) - 1.0) <= UNIT_TOL]
        if len(partners) != 1:
            raise ValueError(f"i{structure} i{b} is not a positive imaginary unit")
        slots.extend((b, partners[0]))
    return tuple(slots)


# Real coordinates of C^3 = span_C{i2, i3, i5} under the complex structure L_{i1}.
SU3_REAL_BASIS = complex_coordinates(1, (2, 3, 5))


# ---------------------------------------------------------------------------
# Octonion operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OctPairVector:
    """An element (u, w) of O^2 = R^16."""

    u: Octonion
    w: Octonion

    @classmethod
    def base(cls) -> "OctPairVector":
        return cls(Octonion.one(), Octonion(np.zeros(8)))

    @classmethod
    def from_array(cls, x: np.ndarray) -> "OctPairVector":
        x = np.asarray(x, dtype=float)
        return cls(Octonion(x[:8]), Octonion(x[8:]))

    @property
    def array(self) -> np.ndarray:
        return np.concatenate([self.u.coeffs, self.w.coeffs])

    def norm(self) -> float:
        return float(np.sqrt(self.u.norm() ** 2 + self.w.norm() ** 2))


@dataclass(frozen=True)
class LeftMulOperator:
    """L_z: w -> z w on O."""

    z: Octonion

    @property
    def matrix(self) -> np.ndarray:
        return oct_left_matrix(self.z)

    def conj(self) -> "LeftMulOperator":
        return LeftMulOperator(self.z.conj())

    def __call__(self, w: Octonion) -> Octonion:
        return Octonion(self.matrix @ Octonion(w).coeffs)


def _require_unit_imaginary(x: Octonion, what: str) -> Octonion:
    x = Octonion(x)
    if abs(x.re) > UNIT_TOL:
        raise NotUnitError(f"{what} must be imaginary, got real part {x.re!r}")
    if abs(x.norm() - 1.0) > UNIT_TOL:
        raise NotUnitError(f"{what} must be a unit octonion, got norm {x.norm()!r}")
    return x


def is_cayley_triple(e1: Octonion, e2: Octonion, e3: Octonion, tol: float = 1e-9) -> bool:
    """Unit imaginary e1, e2, e3 with e2 _|_ e1 and e3 _|_ e1, e2, e1 e2."""
    e1 = _require_unit_imaginary(e1, "e1")
    e2 = _require_unit_imaginary(e2, "e2")
    e3 = _require_unit_imaginary(e3, "e3")
    products = (oct_inner(e2, e1), oct_inner(e3, e1), oct_inner(e3, e2), oct_inner(e3, e1 * e2))
    return all(abs(p) <= tol for p in products)


def fano_lines() -> Tuple[Tuple[int, int, int], ...]:
    """The seven triples {a, b, c} with i_a i_b = +-i_c, read off the multiplication table."""
    lines = set()
    for a, b in combinations(range(1, 8), 2):
        c = int(np.flatnonzero(OCT_TABLE[a, b])[0])
        lines.add(tuple(sorted((a, b, c))))
    return tuple(sorted(lines))


# ---------------------------------------------------------------------------
# G2 > SU(3)
# ---------------------------------------------------------------------------

def _require_special_unitary(a: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 complex matrix, got shape {a.shape}")
    unitary = float(np.abs(a.conj().T @ a - np.eye(3)).max())
    det = complex(np.linalg.det(a))
    if unitary > tol or abs(det - 1.0) > tol:
        raise NotUnitError(f"matrix is not special unitary (unitarity residual {unitary:.3e}, det {det:.6g})")
    return a


def su3_extend_to_g2(a: np.ndarray) -> np.ndarray:
    """The automorphism of O fixing 1 and i1 that acts by a on C^3 = span_C{i2, i3, i5}."""
    a = _require_special_unitary(a)
    out = np.eye(8)
    idx = list(SU3_REAL_BASIS)
    out[np.ix_(idx, idx)] = realize_complex(a).entries
    return out


def g2_isotropy_matrix(a: np.ndarray) -> np.ndarray:
    """Tangent action at i1 on S^6 = unit Im(O) of su3_extend_to_g2(a), basis i2..i7."""
    return su3_extend_to_g2(a)[2:, 2:]


def automorphism_residual(phi: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """max |phi(xy) - phi(x) phi(y)| over the rows of x and y."""
    xy = np.einsum("...i,...j,ijk->...k", x, y, OCT_TABLE)
    px, py = x @ phi.T, y @ phi.T
    return float(np.abs(xy @ phi.T - np.einsum("...i,...j,ijk->...k", px, py, OCT_TABLE)).max())


# ---------------------------------------------------------------------------
# Spin(7) on O
# ---------------------------------------------------------------------------

def spin7_clifford_check(rng: Optional[np.random.Generator] = None, trials: int = 0) -> float:
    """max ||L_u L_v + L_v L_u + 2<u, v> Id|| over all basis pairs, plus random unit pairs."""
    vectors = [u.coeffs for u in IMAGINARY_UNITS]
    if rng is not None and trials:
        raw = rng.normal(size=(trials, 7))
        for row in raw / np.linalg.norm(raw, axis=1, keepdims=True):
            vectors.append(np.concatenate([[0.0], row]))
    worst = 0.0
    for a in range(len(vectors)):
        la = oct_left_matrix(vectors[a])
        for b in range(a, len(vectors)):
            lb = oct_left_matrix(vectors[b])
            rel = la @ lb + lb @ la + 2.0 * float(vectors[a] @ vectors[b]) * np.eye(8)
            worst = max(worst, float(np.abs(rel).max()))
    return worst


def so7_orbit_vectors() -> np.ndarray:
    """(L_u L_v - L_v L_u)(1) for the 21 basis pairs of Im(O), one row each."""
    one = Octonion.one().coeffs
    rows = []
    for u, v in combinations(IMAGINARY_UNITS, 2):
        lu, lv = LeftMulOperator(u).matrix, LeftMulOperator(v).matrix
        rows.append((lu @ lv - lv @ lu) @ one)
    return np.array(rows)


def so7_orbit_span_dim() -> int:
    """Dimension of so(7) . 1 inside O."""
    return int(np.linalg.matrix_rank(so7_orbit_vectors(), tol=RANK_TOL))


def spin7_module_matrix(s: SpinElement) -> np.ndarray:
    """Image of s in End(O) under the Cl_7 module map e_k -> L_{i_k}."""
    if s.dim != 7:
        raise ValueError(f"the octonion module is a Cl_7 module, got a Cl_{s.dim} element")
    gens = [LeftMulOperator(u).matrix for u in IMAGINARY_UNITS]
    out = np.zeros((8, 8))
    for blade, c in zip(s.mv.blades.tolist(), s.mv.coeffs.tolist()):
        m = np.eye(8)
        for k in range(7):
            if blade >> k & 1:
                m = m @ gens[k]
        out += c * m
    return out


def spin7_equivariance_residual(s: SpinElement) -> float:
    """max ||rho(s) L_x rho(s)^-1 - L_{lambda(s) x}|| over the imaginary units x."""
    rho = spin7_module_matrix(s)
    lam = lambda_map(s)
    worst = 0.0
    for k, u in enumerate(IMAGINARY_UNITS):
        image = np.concatenate([[0.0], lam[:, k]])
        lhs = rho @ LeftMulOperator(u).matrix @ rho.T
        worst = max(worst, float(np.abs(lhs - oct_left_matrix(image)).max()))
    return worst


def spin7_stabilizer_sample(rng: np.random.Generator) -> Tuple[np.ndarray, SpinElement]:
    """a = exp(X) for a random X in su(3), and the Cl_7 rotor exp(X) over su3_extend_to_g2(a).

    The rotor fixes 1 under spin7_module_matrix and acts on Im(O) like the automorphism.
    """
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    x = 0.5 * (x - x.conj().T)
    x -= np.trace(x) / 3.0 * np.eye(3)
    derivation = np.zeros((8, 8))
    idx = list(SU3_REAL_BASIS)
    derivation[np.ix_(idx, idx)] = realize_complex(x).entries
    return linalg.expm(x), bivector_exp(bivector_from_so(derivation[1:, 1:]))


# ---------------------------------------------------------------------------
# Spin(9) on O^2
# ---------------------------------------------------------------------------

def spin9_generator(r: float, u: Octonion) -> np.ndarray:
    """M(r, u) = [[r, L_u], [L_conj(u), -r]], the image of (r, u) in R + O = R^9."""
    left = LeftMulOperator(Octonion(u))
    out = np.zeros((16, 16))
    out[:8, :8] = r * np.eye(8)
    out[8:, 8:] = -r * np.eye(8)
    out[:8, 8:] = left.matrix
    out[8:, :8] = left.conj().matrix
    return out


def spin9_wedge(r: float, u: Octonion, r2: float, v: Octonion) -> np.ndarray:
    a, b = spin9_generator(r, u), spin9_generator(r2, v)
    return a @ b - b @ a


def spin9_wedge_at_base(r: float, u: Octonion, r2: float, v: Octonion) -> OctPairVector:
    """(uv* - vu*, 2(r' u* - r v*)), the closed form of the wedge applied to (1, 0)."""
    u, v = Octonion(u), Octonion(v)
    return OctPairVector(u * v.conj() - v * u.conj(), (r2 * u.conj() - r * v.conj()) * 2.0)


def spin9_wedge_blocks(r: float, u: Octonion, r2: float, v: Octonion) -> np.ndarray:
    """[[L_u L_v* - L_v L_u*, 2(r L_v - r' L_u)], [2(r' L_u* - r L_v*), L_u* L_v - L_v* L_u]]."""
    lu, lv = oct_left_matrix(Octonion(u)), oct_left_matrix(Octonion(v))
    lu_bar, lv_bar = oct_left_matrix(Octonion(u).conj()), oct_left_matrix(Octonion(v).conj())
    return np.block([
        [lu @ lv_bar - lv @ lu_bar, 2.0 * (r * lv - r2 * lu)],
        [2.0 * (r2 * lu_bar - r * lv_bar), lu_bar @ lv - lv_bar @ lu],
    ])


def spin9_commutator_identity(u: Octonion, v: Octonion, r: float, r2: float) -> float:
    """Residual of the generator bracket against its block form, and at (1, 0) against its closed form."""
    wedge = spin9_wedge(r, u, r2, v)
    at_base = wedge @ OctPairVector.base().array
    closed = spin9_wedge_at_base(r, u, r2, v).array
    return float(max(np.abs(wedge - spin9_wedge_blocks(r, u, r2, v)).max(), np.abs(at_base - closed).max()))


def _r9_basis() -> List[Tuple[float, Octonion]]:
    zero = Octonion(np.zeros(8))
    return [(1.0, zero)] + [(0.0, Octonion.basis(k)) for k in range(8)]


def spin9_tangent_vectors() -> np.ndarray:
    base = OctPairVector.base().array
    rows = []
    for (r, u), (r2, v) in combinations(_r9_basis(), 2):
        rows.append(spin9_wedge(r, u, r2, v) @ base)
    return np.array(rows)


def spin9_tangent_dim() -> int:
    """Dimension of spin(9) . (1, 0): the tangent space of S^15."""
    return int(np.linalg.matrix_rank(spin9_tangent_vectors(), tol=RANK_TOL))


def _contains(rows: np.ndarray, subspace: np.ndarray) -> bool:
    rank = np.linalg.matrix_rank(rows, tol=RANK_TOL)
    return int(np.linalg.matrix_rank(np.vstack([rows, subspace]), tol=RANK_TOL)) == rank


def spin9_tangent_report() -> Dict[str, object]:
    rows = spin9_tangent_vectors()
    second = np.eye(16)[8:]
    imaginary_first = np.eye(16)[1:8]
    return {
        "dim": int(np.linalg.matrix_rank(rows, tol=RANK_TOL)),
        "contains_second_factor": _contains(rows, second),
        "contains_imaginary_first_factor": _contains(rows, imaginary_first),
    }


def spin9_isotropy_generator(u: Octonion, v: Octonion) -> np.ndarray:
    """T_{u,v} = u ^ v + 1/2 ([u, v] ^ 1)."""
    c = oct_commutator(Octonion(u), Octonion(v))
    return spin9_wedge(0.0, u, 0.0, v) + 0.5 * spin9_wedge(0.0, c, 0.0, Octonion.one())


def isotropy_phi(u: Octonion, v: Octonion) -> np.ndarray:
    """7x7 matrix on Im(O) of w -> u(vw) - v(uw) - [u, v] w."""
    lu, lv = oct_left_matrix(u), oct_left_matrix(v)
    lc = oct_left_matrix(oct_commutator(Octonion(u), Octonion(v)))
    return (lu @ lv - lv @ lu - lc)[1:, 1:]


def _pairs() -> List[Tuple[int, int]]:
    return list(combinations(range(1, 8), 2))


def spin9_isotropy_checks() -> Dict[str, object]:
    """Annihilation, span, skewness, rank and the Fano action of the isotropy algebra."""
    base = OctPairVector.base().array
    units = {k: Octonion.basis(k) for k in range(8)}
    gens = {(a, b): spin9_isotropy_generator(units[a], units[b]) for a, b in _pairs()}
    phis = {(a, b): isotropy_phi(units[a], units[b]) for a, b in _pairs()}

    annihilation = max(float(np.abs(t @ base).max()) for t in gens.values())
    span_dim = int(np.linalg.matrix_rank(np.array([t.ravel() for t in gens.values()]), tol=RANK_TOL))
    skew = max(float(np.abs(p + p.T).max()) for p in phis.values())
    phi_rank = int(np.linalg.matrix_rank(np.array([p.ravel() for p in phis.values()]), tol=RANK_TOL))
    # The Im(O) block of T on the first factor is -phi.
    block = max(float(np.abs(gens[k][1:8, 1:8] + phis[k]).max()) for k in gens)

    fano_ranks = {}
    for m in range(1, 8):
        through = [p for p in _pairs() if abs(OCT_TABLE[p[0], p[1], m]) == 1.0]
        fano_ranks[m] = int(np.linalg.matrix_rank(np.array([phis[p].ravel() for p in through]), tol=RANK_TOL))

    table = _fano_action_table(units, phis[(1, 2)])
    logger.debug("spin(9) isotropy: span %d, phi rank %d, annihilation %.2e", span_dim, phi_rank, annihilation)
    return {
        "annihilation_residual": annihilation,
        "span_dim": span_dim,
        "phi_skew_residual": skew,
        "phi_rank": phi_rank,
        "block_residual": block,
        "fano_independence": all(r == 3 for r in fano_ranks.values()),
        "fano_ranks": fano_ranks,
        "table_residual": table,
    }


def _fano_action_table(units: Dict[int, Octonion], phi12: np.ndarray) -> float:
    """Residual of i3 -> -i6 -> i3, i5 -> i7 -> -i5 and span{i1, i2, i4} -> 0 for phi(T_{i1,i2})."""
    scale = oct_commutator(units[1], units[2]).norm() ** 2
    action = -phi12 / scale

    def im(k: int, sign: float = 1.0) -> np.ndarray:
        e = np.zeros(7)
        e[k - 1] = sign
        return e

    expected = {1: np.zeros(7), 2: np.zeros(7), 4: np.zeros(7),
                3: im(6, -1.0), 6: im(3), 5: im(7), 7: im(5, -1.0)}
    worst = max(float(np.abs(action @ im(k) - target).max()) for k, target in expected.items())
    moving = [k - 1 for k in (3, 5, 6, 7)]
    square = (action @ action)[np.ix_(moving, moving)]
    return max(worst, float(np.abs(square + np.eye(4)).max()))


def spin9_isotropy_sample(rng: np.random.Generator) -> Tuple[np.ndarray, SpinElement]:
    """exp(T) for a random T in the isotropy algebra, and the Cl_7 rotor with the same Im(O) rotation."""
    coeffs = rng.uniform(-1.0, 1.0, size=len(_pairs()))
    t = sum(c * spin9_isotropy_generator(Octonion.basis(a), Octonion.basis(b))
            for c, (a, b) in zip(coeffs, _pairs()))
    s = bivector_exp(bivector_from_so(t[1:8, 1:8]))
    return linalg.expm(t), s


def spin9_spin_summand_check(rng: np.random.Generator, trials: int = 20) -> float:
    """max |trace of exp(T) on the second factor - trace of rho(s)| over random isotropy samples."""
    worst = 0.0
    for _ in range(trials):
        g, s = spin9_isotropy_sample(rng)
        worst = max(worst, abs(float(np.trace(g[8:, 8:])) - float(np.trace(spin7_module_matrix(s)))))
    return worst


# ---------------------------------------------------------------------------
# Closing constructions
# ---------------------------------------------------------------------------

def z4_lift_order(n: int, max_order: int = 8) -> int:
    """Order of e_n e_{n+1} in Cl_{n+1}, the lift of the reflection pair on S^n."""
    if n < 2:
        raise ValueError(f"z4_lift_order needs n >= 2, got {n}")
    if n + 1 > CLIFFORD_DIM_MAX:
        raise DimensionCeilingError(f"Cl_{n + 1} exceeds the ceiling {CLIFFORD_DIM_MAX}")
    lift = Multivector.blade(n + 1, [n, n + 1])
    one = Multivector.scalar(n + 1, 1.0)
    power = lift
    for order in range(1, max_order + 1):
        if power == one:
            return order
        power = mv_mul(power, lift)
    raise ValueError(f"e_{n} e_{n + 1} has order above {max_order}")


@dataclass(frozen=True, eq=False)
class MetaunitaryElement:
    """(A, z) in U(n+1) x C^* with det A = z^2."""

    a: np.ndarray
    z: complex

    def __mul__(self, other: "MetaunitaryElement") -> "MetaunitaryElement":
        return MetaunitaryElement(self.a @ other.a, self.z * other.z)

    def inverse(self) -> "MetaunitaryElement":
        return MetaunitaryElement(self.a.conj().T, 1.0 / self.z)

    def project(self) -> np.ndarray:
        return self.a


def metaunitary_residual(g: MetaunitaryElement) -> float:
    """|det A - z^2| plus the unitarity defect of A."""
    a = np.asarray(g.a, dtype=complex)
    unitary = float(np.abs(a.conj().T @ a - np.eye(a.shape[0])).max())
    return abs(complex(np.linalg.det(a)) - g.z ** 2) + unitary


def random_metaunitary(m: int, rng: np.random.Generator) -> MetaunitaryElement:
    x = rng.uniform(-1.0, 1.0, size=(m, m)) + 1j * rng.uniform(-1.0, 1.0, size=(m, m))
    a = linalg.expm(0.5 * (x - x.conj().T))
    z = np.sqrt(complex(np.linalg.det(a))) * (1.0 if rng.uniform() < 0.5 else -1.0)
    return MetaunitaryElement(a, z)


def metaunitary_check(n: int, rng: np.random.Generator, trials: int = 100, tol: float = 1e-9) -> Dict[str, float]:
    """Closure, inverses and the two-point fibres of MU(n+1) -> U(n+1) on random samples."""
    if n < 1:
        raise ValueError(f"metaunitary_check needs n >= 1, got {n}")
    m = n + 1
    closure = inverse = fibre = 0.0
    for _ in range(trials):
        g, h = random_metaunitary(m, rng), random_metaunitary(m, rng)
        closure = max(closure, metaunitary_residual(g * h))
        inverse = max(inverse, metaunitary_residual(g.inverse()),
                      float(np.abs((g * g.inverse()).a - np.eye(m)).max()) + abs((g * g.inverse()).z - 1.0))
        other = MetaunitaryElement(g.a, -g.z)
        # both square roots of det A lie over A and are distinct
        fibre = max(fibre, metaunitary_residual(other), max(0.0, 1.0 - abs(g.z - other.z)))
    unit = MetaunitaryElement(np.eye(m, dtype=complex), 1.0)
    minus = MetaunitaryElement(np.eye(m, dtype=complex), -1.0)
    fibre = max(fibre, metaunitary_residual(unit), metaunitary_residual(minus),
                metaunitary_residual(unit * minus), abs((unit * minus).z + 1.0))
    report = {"closure": closure, "inverse": inverse, "fibre": fibre}
    report["passed"] = float(max(report.values()) < tol)
    return report


# ---------------------------------------------------------------------------
# Generating loops in the double covers
# ---------------------------------------------------------------------------

def cover_element(spec: ActionSpec, t: float) -> Dict[str, Any]:
    """Point at time t in [0, 2] of the generating loop lifted to MU(n+1), Sp(n+1) x U(1) or Sp(n+1) x Sp(1).

    The quotient families are parametrized natively in the product group, so their
    loop_element already is the lift; U(n+1) gains the square root z = exp(i pi t) of det A.
    """
    if spec.family == Family.U:
        return {**loop_element(spec, t), "z": complex(np.exp(1j * np.pi * t))}
    if spec.family in (Family.SpU1, Family.SpSp1):
        return dict(loop_element(spec, t))
    raise UnsupportedFamilyError(f"{spec.group_name} has no native double cover here")


def cover_center(spec: ActionSpec, sign: float) -> Dict[str, Any]:
    """The identity (sign = 1) or the nontrivial deck element (sign = -1) of the cover."""
    m = spec.n + 1
    if spec.family == Family.U:
        return {"U": np.eye(m, dtype=complex), "z": complex(sign)}
    q = np.array([sign, 0.0, 0.0, 0.0])
    if spec.family == Family.SpU1:
        return {"Sp": qmat_scalar(q, m), "U1": complex(sign)}
    if spec.family == Family.SpSp1:
        return {"Sp": qmat_scalar(q, m), "Sp1": q}
    raise UnsupportedFamilyError(f"{spec.group_name} has no native double cover here")


def cover_name(spec: ActionSpec) -> str:
    m = spec.n + 1
    names = {
        Family.SO: f"Spin({m})",
        Family.U: f"MU({m})",
        Family.SpU1: f"Sp({m}) x U(1)",
        Family.SpSp1: f"Sp({m}) x Sp(1)",
    }
    if spec.family not in names:
        raise UnsupportedFamilyError(f"{spec.group_name} has a simply connected stabilizer; nothing to lift")
    return names[spec.family]


def _project(spec: ActionSpec, x: Mapping[str, Any]) -> np.ndarray:
    native = {k: v for k, v in x.items() if k != "z"}
    return realize_element(spec, native)


def _native_distance(x: Mapping[str, Any], y: Mapping[str, Any]) -> float:
    return max(float(np.abs(np.asarray(x[k]) - np.asarray(y[k])).max()) for k in x)


def cover_loop_check(spec: ActionSpec, steps: int = DEFAULT_STEPS, tol: float = COVER_TOL) -> Dict[str, float]:
    """Lift the generating stabilizer loop of a non simply connected row into the double cover of G.

    SO(n+1) lifts to Spin(n+1) through lift_path; the other rows use cover_element.
    The lift ends at the nontrivial deck element, which acts trivially on the sphere,
    and closes after two turns. Loops closed in the cover have isotropy parity 0.
    """
    if spec.family not in LOOP_FAMILIES:
        raise UnsupportedFamilyError(f"{spec.group_name} has a simply connected stabilizer; nothing to lift")
    loop = stabilizer_loop(spec, steps)
    o = spec.base_point
    if spec.family == Family.SO:
        path = RotationPath(loop.samples)
        lifted = lift_path(path)
        covering = lifted.max_residual
        deck = lifted.endpoint.distance_to_scalar(-1.0)
        deck_action = float(np.abs(lambda_map(lifted.endpoint) - np.eye(spec.ambient_dim)).max())
        base = max(float(np.abs(lambda_map(s)[:, 0] - o).max()) for s in lifted.samples)
        closed = lift_path(repeat_path(path, 2)).endpoint.distance_to_scalar(1.0)
    else:
        lifted = [cover_element(spec, t) for t in np.linspace(0.0, 2.0, 2 * steps + 1)]
        covering = max(float(np.abs(_project(spec, x) - a).max()) for x, a in zip(lifted, loop.samples))
        if spec.family == Family.U:
            covering = max(covering, max(metaunitary_residual(MetaunitaryElement(x["U"], x["z"])) for x in lifted))
        deck = _native_distance(lifted[steps], cover_center(spec, -1.0))
        deck_action = float(np.abs(_project(spec, cover_center(spec, -1.0)) - np.eye(spec.ambient_dim)).max())
        base = max(float(np.abs(_project(spec, x)[:, 0] - o).max()) for x in lifted)
        closed = _native_distance(lifted[-1], cover_center(spec, 1.0))
    twice = loop_parity(repeat_path(isotropy_path_differential(spec, loop), 2))
    report = {"covering": covering, "deck": deck, "deck_action": deck_action, "base_point": base, "closed_twice": closed}
    report["passed"] = float(max(report.values()) < tol and twice == 0)
    report["parity_twice"] = float(twice)
    logger.debug("%s cover loop: deck %.2e, closed after two turns %.2e", spec.label, deck, closed)
    return report
