# -*- coding: utf-8 -*-
"""
Realized Lie algebras g > h of each classical action, the reductive
complement m, and the isotropy path computed as Ad(h(t)) restricted to m.

All algebras are realized as antisymmetric matrices on the ambient space,
with the trace form B(X, Y) = -trace(XY). On those matrices B is the
Frobenius inner product, so orthonormal bases flatten to orthonormal rows.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg

from normed_algebras import Quaternion, quat_left_matrix, quat_right_matrix, realize_complex, realize_quaternionic
from run_config import INVARIANCE_TOL, RANK_TOL
from sphere_actions import ActionSpec, Family, GroupLoop, RotationPath
from spin_errors import InvariantViolationError, UnsupportedFamilyError

logger = logging.getLogger(__name__)

Basis = Tuple[np.ndarray, ...]

_UNITS = {"1": 0, "i": 1, "j": 2, "k": 3}


def trace_form(x: np.ndarray, y: np.ndarray) -> float:
    """B(X, Y) = -trace(XY)."""
    return float(-np.sum(x * y.T))


def gram_schmidt(matrices: Sequence[np.ndarray], against: Sequence[np.ndarray] = (),
                 rank_tol: float = RANK_TOL) -> Basis:
    """B-orthonormal basis of span(matrices) orthogonal to the orthonormal set `against`.

    Modified Gram-Schmidt with a second orthogonalization pass; vectors whose
    residual norm falls below rank_tol are dropped as dependent.
    """
    kept: List[np.ndarray] = []
    fixed = list(against)
    for x in matrices:
        v = np.array(x, dtype=float)
        for _ in range(2):
            for e in fixed + kept:
                v = v - trace_form(e, v) * e
        norm2 = trace_form(v, v)
        if norm2 <= rank_tol ** 2:
            continue
        v = v / np.sqrt(norm2)
        v.setflags(write=False)
        kept.append(v)
    return tuple(kept)


def _unit(name: str) -> np.ndarray:
    return Quaternion.basis(_UNITS[name]).coeffs


def _quaternionic_unit_matrix(m: int, r: int, c: int, p: str) -> np.ndarray:
    out = np.zeros((m, m, 4))
    out[r, c] = _unit(p)
    return out


@lru_cache(maxsize=None)
def matrix_group_algebra(kind: str, m: int) -> Basis:
    """Orthonormal realized basis of so(m), u(m), su(m) or sp(m)."""
    spanning: List[np.ndarray] = []
    if kind == "so":
        for i in range(m):
            for j in range(i + 1, m):
                x = np.zeros((m, m))
                x[i, j], x[j, i] = 1.0, -1.0
                spanning.append(x)
    elif kind in ("u", "su"):
        diag = range(m) if kind == "u" else range(m - 1)
        for k in diag:
            x = np.zeros((m, m), dtype=complex)
            x[k, k] = 1j
            if kind == "su":
                x[k + 1, k + 1] = -1j
            spanning.append(realize_complex(x).entries)
        for k in range(m):
            for l in range(k + 1, m):
                x = np.zeros((m, m), dtype=complex)
                x[k, l], x[l, k] = 1.0, -1.0
                spanning.append(realize_complex(x).entries)
                y = np.zeros((m, m), dtype=complex)
                y[k, l], y[l, k] = 1j, 1j
                spanning.append(realize_complex(y).entries)
    elif kind == "sp":
        for k in range(m):
            for p in ("i", "j", "k"):
                spanning.append(realize_quaternionic(_quaternionic_unit_matrix(m, k, k, p)).entries)
        for k in range(m):
            for l in range(k + 1, m):
                for p in ("1", "i", "j", "k"):
                    x = _quaternionic_unit_matrix(m, k, l, p)
                    x[l, k] = -Quaternion(_unit(p)).conj().coeffs
                    spanning.append(realize_quaternionic(x).entries)
    else:
        raise UnsupportedFamilyError(f"no realized Lie algebra of kind {kind!r}")
    return gram_schmidt(spanning)


def embed_lower(x: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Place x in the lower-right corner of an ambient_dim x ambient_dim zero matrix."""
    out = np.zeros((ambient_dim, ambient_dim))
    k = x.shape[0]
    out[ambient_dim - k:, ambient_dim - k:] = x
    return out


@dataclass(frozen=True, eq=False)
class LieAlgebraBasis:
    """Orthonormal bases of g, h and the reductive complement m on the ambient space."""

    ambient_dim: int
    g_basis: Basis
    h_basis: Basis
    m_basis: Basis = ()
    family: str = ""

    @property
    def dims(self) -> Tuple[int, int, int]:
        return len(self.g_basis), len(self.h_basis), len(self.m_basis)


def _right_generators(n: int, units: Sequence[str]) -> List[np.ndarray]:
    """Derivatives of v -> v exp(-t u) on H^(n+1)."""
    return [np.kron(np.eye(n + 1), -quat_right_matrix(_unit(u))) for u in units]


def _diagonal_scalar_generators(n: int, units: Sequence[str]) -> List[np.ndarray]:
    """Derivatives of [diag(exp(t u), Id), exp(t u)] acting by A v exp(-t u)."""
    out = []
    head = np.zeros((n + 1, n + 1))
    head[0, 0] = 1.0
    for u in units:
        out.append(np.kron(head, quat_left_matrix(_unit(u))) + np.kron(np.eye(n + 1), -quat_right_matrix(_unit(u))))
    return out


def lie_basis(spec: ActionSpec) -> LieAlgebraBasis:
    """Realized g, h and m = h^perp for a classical family."""
    fam, n, d = spec.family, spec.n, spec.ambient_dim
    if fam == Family.SO:
        g = list(matrix_group_algebra("so", n + 1))
        h = [embed_lower(x, d) for x in matrix_group_algebra("so", n)]
    elif fam in (Family.U, Family.SU):
        kind = fam.value.lower()
        g = list(matrix_group_algebra(kind, n + 1))
        h = [embed_lower(x, d) for x in matrix_group_algebra(kind, n)]
    elif fam in (Family.Sp, Family.SpU1, Family.SpSp1):
        g = list(matrix_group_algebra("sp", n + 1))
        h = [embed_lower(x, d) for x in matrix_group_algebra("sp", n)]
        units = {Family.Sp: (), Family.SpU1: ("i",), Family.SpSp1: ("i", "j", "k")}[fam]
        g += _right_generators(n, units)
        h += _diagonal_scalar_generators(n, units)
    else:
        raise UnsupportedFamilyError(f"{spec.group_name} has no realized Lie algebra here")
    partial = LieAlgebraBasis(d, gram_schmidt(g), gram_schmidt(h), family=fam.value)
    return reductive_split(partial)


def _projection_residual(x: np.ndarray, basis: Basis) -> float:
    v = x.copy()
    for e in basis:
        v = v - trace_form(e, v) * e
    return float(np.linalg.norm(v))


def reductive_split(basis: LieAlgebraBasis) -> LieAlgebraBasis:
    """Fill in m as the B-orthogonal complement of h in g and verify invariance."""
    h = gram_schmidt(basis.h_basis)
    g = gram_schmidt(basis.g_basis)
    m = gram_schmidt(g, against=h)
    if len(h) + len(m) != len(g):
        raise InvariantViolationError(
            f"h (dim {len(h)}) is not a subspace of g (dim {len(g)}): complement has dim {len(m)}"
        )
    closure = max((_projection_residual(a @ b - b @ a, h) for a in h for b in h), default=0.0)
    if closure > INVARIANCE_TOL:
        raise InvariantViolationError(f"h is not closed under brackets (residual {closure:.3e})")
    leak = max((_projection_residual(a @ x - x @ a, m) for a in h for x in m), default=0.0)
    if leak > INVARIANCE_TOL:
        raise InvariantViolationError(f"m is not ad(h)-invariant (residual {leak:.3e})")
    group_leak = max((_projection_residual(e @ x @ e.T, m) for e in (linalg.expm(a) for a in h) for x in m),
                     default=0.0)
    if group_leak > INVARIANCE_TOL:
        raise InvariantViolationError(f"m is not Ad(H)-invariant (residual {group_leak:.3e})")
    logger.debug("%s reductive split: dim g=%d h=%d m=%d", basis.family, len(g), len(h), len(m))
    return LieAlgebraBasis(basis.ambient_dim, g, h, m, basis.family)


def adjoint_isotropy_path(spec: ActionSpec, loop: GroupLoop, basis: LieAlgebraBasis) -> RotationPath:
    """Matrix of X -> h_k X h_k^-1 on m in the m_basis coordinates, for every loop sample."""
    if len(basis.m_basis) != spec.sphere_dim:
        raise InvariantViolationError(
            f"m has dimension {len(basis.m_basis)} but {spec.group_name} acts on S^{spec.sphere_dim}"
        )
    flat = np.stack([x.reshape(-1) for x in basis.m_basis])
    m_stack = np.stack(basis.m_basis)
    samples = np.asarray(loop.samples)
    out = np.empty((samples.shape[0], flat.shape[0], flat.shape[0]))
    worst = 0.0
    for k, h in enumerate(samples):
        conj = np.einsum("ab,jbc,dc->jad", h, m_stack, h).reshape(flat.shape[0], -1)
        coords = flat @ conj.T
        worst = max(worst, float(np.abs(conj - coords.T @ flat).max()))
        out[k] = coords
    if worst > INVARIANCE_TOL:
        raise InvariantViolationError(f"conjugation leaves span(m) by {worst:.3e}")
    logger.debug("%s adjoint path: %d samples, max leakage %.2e", spec.group_name, samples.shape[0], worst)
    return RotationPath(out)


def adjoint_trace(basis: Sequence[np.ndarray], g: np.ndarray) -> float:
    """Trace of X -> g X g^-1 on the span of an orthonormal basis, g orthogonal."""
    return float(sum(trace_form(x, g @ x @ g.T) for x in basis))


def adjoint_character_residual(spec: ActionSpec, basis: LieAlgebraBasis, h: np.ndarray) -> float:
    """tr Ad^G(h) - tr Ad^H(h) - tr sigma(h) for a realized stabilizer element h."""
    sigma = np.asarray(h)[1:, 1:]
    return adjoint_trace(basis.g_basis, h) - adjoint_trace(basis.h_basis, h) - float(np.trace(sigma))
