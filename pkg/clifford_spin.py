# -*- coding: utf-8 -*-
"""
Real Clifford algebra Cl_n with e_i e_j + e_j e_i = -2 delta_ij, the spin group,
and the double cover lambda: Spin(n) -> SO(n).

Blades are bitmasks: bit i-1 set means e_i is a factor, so e_1 e_3 is 0b101.
Matrix indices are 0-based, so column j of lambda(s) is the image of e_{j+1}.

Sign convention, pinned by the calibration oracle:
  lambda(exp(theta/2 e_i e_j)) rotates e_i toward e_j by +theta, and
  bivector_from_so(w) = 1/2 sum_{i<j} w[j, i] e_i e_j.

Usage:
  s = bivector_exp(bivector_from_so(omega))
  lambda_map(s)          # == scipy.linalg.expm(omega)
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import linalg

from run_config import CLIFFORD_DIM_MAX, LOG_RADIUS, PRUNE_TOL, SERIES_MAX_TERMS
from spin_errors import (
    ConvergenceError,
    DimensionCeilingError,
    DimensionMismatchError,
    InvalidSpinElementError,
    StepTooLargeError,
)

logger = logging.getLogger(__name__)

Plane = Tuple[np.ndarray, np.ndarray, float]

POPCOUNT = np.array([bin(i).count("1") for i in range(1 << (CLIFFORD_DIM_MAX + 1))], dtype=np.int64)

# Blade pairs processed per chunk in mv_mul.
_PAIR_BUDGET = 1 << 22

SPIN_NORM_TOL = 1e-8
LAMBDA_ORTHO_TOL = 1e-6
GRADE_LEAK_TOL = 1e-9


def blade_sign(a, b) -> np.ndarray:
    """Sign of the product of blades a and b (bitmask arrays, broadcast).

    Transpositions to reach canonical order, plus one factor -1 for every
    generator appearing in both blades.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    count = np.array(POPCOUNT[a & b], dtype=np.int64)
    shifted = a >> 1
    while np.any(shifted):
        count += POPCOUNT[shifted & b]
        shifted = shifted >> 1
    return np.where(count & 1, -1.0, 1.0)


def _check_dim(dim: int) -> int:
    dim = int(dim)
    if dim < 1:
        raise DimensionMismatchError(f"Clifford dimension must be positive, got {dim}")
    if dim > CLIFFORD_DIM_MAX:
        raise DimensionCeilingError(f"Clifford dimension {dim} exceeds the ceiling {CLIFFORD_DIM_MAX}")
    return dim


@lru_cache(maxsize=None)
def _blade_tables(dim: int) -> Dict[str, np.ndarray]:
    """Dense lookup tables for Cl_dim, all indexed by blade bitmask.

    perm[m], sign[m]: (e_{m+1} X)[c] = sign[m][c] * X[perm[m][c]]
    reverse:          sign of the reversal on each blade
    self_square:      b * b for each blade (+1 or -1)
    """
    size = 1 << dim
    idx = np.arange(size, dtype=np.int64)
    grade = POPCOUNT[idx]
    perm = np.empty((dim, size), dtype=np.int64)
    sign = np.empty((dim, size))
    for m in range(dim):
        bit = np.int64(1 << m)
        perm[m] = idx ^ bit
        sign[m] = blade_sign(bit, idx ^ bit)
    reverse = np.where((grade * (grade - 1) // 2) % 2, -1.0, 1.0)
    self_square = np.where((grade * (grade + 1) // 2) % 2, -1.0, 1.0)
    tables = {"perm": perm, "sign": sign, "reverse": reverse, "self_square": self_square, "grade": grade}
    for arr in tables.values():
        arr.setflags(write=False)
    return tables


class Multivector:
    """Sparse element of Cl_dim: sorted blade bitmasks with nonzero coefficients."""

    __slots__ = ("dim", "blades", "coeffs")

    def __init__(self, dim: int, blades: Iterable[int] = (), coeffs: Iterable[float] = ()):
        dim = _check_dim(dim)
        blades = np.asarray(list(blades) if not isinstance(blades, np.ndarray) else blades, dtype=np.int64)
        coeffs = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=float)
        if blades.shape != coeffs.shape or blades.ndim != 1:
            raise DimensionMismatchError(f"blades {blades.shape} and coefficients {coeffs.shape} differ")
        if blades.size and (blades.min() < 0 or blades.max() >= (1 << dim)):
            raise DimensionMismatchError(f"blade bitmask outside Cl_{dim}")
        uniq, inverse = np.unique(blades, return_inverse=True)
        summed = np.bincount(inverse, weights=coeffs, minlength=uniq.size) if uniq.size else coeffs
        keep = summed != 0.0
        self._set(dim, uniq[keep], summed[keep])

    def _set(self, dim: int, blades: np.ndarray, coeffs: np.ndarray) -> None:
        blades.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "blades", blades)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # construction ---------------------------------------------------------

    @classmethod
    def _sorted(cls, dim: int, blades: np.ndarray, coeffs: np.ndarray) -> "Multivector":
        mv = cls.__new__(cls)
        mv._set(dim, np.ascontiguousarray(blades, dtype=np.int64), np.ascontiguousarray(coeffs, dtype=float))
        return mv

    @classmethod
    def from_terms(cls, dim: int, terms: Dict[int, float]) -> "Multivector":
        return cls(dim, list(terms.keys()), list(terms.values()))

    @classmethod
    def from_dense(cls, dim: int, dense: np.ndarray, prune: float = PRUNE_TOL) -> "Multivector":
        dim = _check_dim(dim)
        dense = np.asarray(dense, dtype=float)
        if dense.shape != (1 << dim,):
            raise DimensionMismatchError(f"dense Cl_{dim} element must have {1 << dim} entries, got {dense.shape}")
        idx = np.flatnonzero(np.abs(dense) > prune)
        return cls._sorted(dim, idx, dense[idx].copy())

    @classmethod
    def scalar(cls, dim: int, value: float = 1.0) -> "Multivector":
        return cls(dim, [0], [value])

    @classmethod
    def vector(cls, dim: int, components: Sequence[float]) -> "Multivector":
        components = np.asarray(components, dtype=float)
        if components.shape != (dim,):
            raise DimensionMismatchError(f"vector in Cl_{dim} needs {dim} components, got {components.shape}")
        return cls(dim, [1 << m for m in range(dim)], components)

    @classmethod
    def blade(cls, dim: int, generators: Sequence[int], coeff: float = 1.0) -> "Multivector":
        """Product e_{g1} e_{g2} ... of 1-based generators, in the given order."""
        out = cls.scalar(dim, coeff)
        for g in generators:
            if not 1 <= g <= dim:
                raise DimensionMismatchError(f"generator e_{g} does not exist in Cl_{dim}")
            out = out * cls(dim, [1 << (g - 1)], [1.0])
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(1 << self.dim)
        dense[self.blades] = self.coeffs
        return dense

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> Dict[int, float]:
        return dict(zip(self.blades.tolist(), self.coeffs.tolist()))

    @property
    def grades(self) -> np.ndarray:
        return POPCOUNT[self.blades]

    def grade_part(self, k: int) -> "Multivector":
        mask = self.grades == k
        return Multivector._sorted(self.dim, self.blades[mask], self.coeffs[mask])

    def scalar_part(self) -> float:
        if self.blades.size and self.blades[0] == 0:
            return float(self.coeffs[0])
        return 0.0

    def is_even(self, atol: float = 0.0) -> bool:
        odd = (self.grades % 2) == 1
        return bool(np.all(np.abs(self.coeffs[odd]) <= atol))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs ** 2)))

    def prune(self, tol: float = PRUNE_TOL) -> "Multivector":
        keep = np.abs(self.coeffs) > tol
        return Multivector._sorted(self.dim, self.blades[keep], self.coeffs[keep])

    def reverse(self) -> "Multivector":
        g = self.grades
        sign = np.where((g * (g - 1) // 2) % 2, -1.0, 1.0)
        return Multivector._sorted(self.dim, self.blades, self.coeffs * sign)

    def allclose(self, other: "Multivector", atol: float = 1e-12) -> bool:
        if self.dim != other.dim:
            return False
        return bool(np.max(np.abs(self.to_dense() - other.to_dense()), initial=0.0) <= atol)

    # arithmetic -----------------------------------------------------------

    def _combine(self, other: "Multivector", sign: float) -> "Multivector":
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.dim, float(other))
        if other.dim != self.dim:
            raise DimensionMismatchError(f"cannot add Cl_{self.dim} and Cl_{other.dim} elements")
        return Multivector(self.dim, np.concatenate([self.blades, other.blades]),
                           np.concatenate([self.coeffs, sign * other.coeffs]))

    def __add__(self, other):
        return self._combine(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return Multivector._sorted(self.dim, self.blades, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mv_mul(self, other)
        if np.isscalar(other):
            if other == 0:
                return Multivector(self.dim)
            return Multivector._sorted(self.dim, self.blades, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.dim == other.dim and np.array_equal(self.blades, other.blades)
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.dim, self.blades.tobytes(), self.coeffs.tobytes()))

    def __len__(self):
        return int(self.blades.size)

    def __repr__(self):
        if not self.blades.size:
            return f"Multivector({self.dim}, 0)"
        parts = []
        for blade, c in zip(self.blades.tolist()[:8], self.coeffs.tolist()[:8]):
            gens = "".join(f"e{m + 1}" for m in range(self.dim) if blade >> m & 1) or "1"
            parts.append(f"{c:+.6g}*{gens}")
        more = f" ... ({self.blades.size} terms)" if self.blades.size > 8 else ""
        return f"Multivector({self.dim}, {' '.join(parts)}{more})"


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    """Clifford product, pruned at PRUNE_TOL."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot multiply Cl_{a.dim} by Cl_{b.dim}")
    if not a.blades.size or not b.blades.size:
        return Multivector(a.dim)
    size = 1 << a.dim
    acc = np.zeros(size)
    chunk = max(1, _PAIR_BUDGET // b.blades.size)
    for start in range(0, a.blades.size, chunk):
        ab = a.blades[start:start + chunk, None]
        ac = a.coeffs[start:start + chunk, None]
        weights = blade_sign(ab, b.blades[None, :]) * ac * b.coeffs[None, :]
        acc += np.bincount((ab ^ b.blades[None, :]).ravel(), weights=weights.ravel(), minlength=size)
    return Multivector.from_dense(a.dim, acc)


def vector_left_multiply(u: np.ndarray, dense: np.ndarray, dim: int) -> np.ndarray:
    """Dense coefficients of u * X for a vector u and dense X in Cl_dim."""
    tables = _blade_tables(dim)
    return np.asarray(u, dtype=float) @ (tables["sign"] * dense[tables["perm"]])


class SpinElement:
    """Even, unit element of Cl_n lying in Spin(n)."""

    __slots__ = ("mv",)

    def __init__(self, mv: Multivector, check: bool = True):
        if check:
            if not mv.is_even(atol=PRUNE_TOL):
                raise InvalidSpinElementError(f"spin elements are even; got odd terms in {mv!r}")
            norm2 = float(np.sum(mv.coeffs ** 2))
            if abs(norm2 - 1.0) > SPIN_NORM_TOL:
                raise InvalidSpinElementError(f"spin element must satisfy s*reverse(s) = 1, got scalar part {norm2!r}")
        object.__setattr__(self, "mv", mv)

    def __setattr__(self, name, value):
        raise AttributeError("SpinElement is immutable")

    @classmethod
    def identity(cls, dim: int) -> "SpinElement":
        return cls(Multivector.scalar(dim, 1.0))

    @property
    def dim(self) -> int:
        return self.mv.dim

    def inverse(self) -> "SpinElement":
        return SpinElement(self.mv.reverse(), check=False)

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        if isinstance(other, SpinElement):
            return SpinElement(mv_mul(self.mv, other.mv), check=False)
        return NotImplemented

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.mv, check=False)

    def distance_to_scalar(self, value: float) -> float:
        """Coefficient distance to the scalar +1 or -1."""
        return (self.mv - Multivector.scalar(self.dim, value)).norm()

    def __repr__(self):
        return f"SpinElement({self.mv!r})"


def _lambda_dense(dense: np.ndarray, dim: int) -> np.ndarray:
    """lambda(s)[i, j] = -<(e_i s)(e_j reverse(s))>_0, from dense coefficients."""
    tables = _blade_tables(dim)
    left = tables["sign"] * dense[tables["perm"]]
    rev = dense * tables["reverse"]
    right = tables["sign"] * rev[tables["perm"]]
    return -(left * tables["self_square"]) @ right.T


def lambda_map(s: SpinElement, strict: bool = False) -> np.ndarray:
    """Matrix of x -> s x s^-1; column j is the image of e_{j+1}.

    The default path reads only the vector part through scalar products and
    checks the result is special orthogonal. strict=True forms s e_j s^-1 by
    full Clifford products and rejects any component outside grade 1.
    """
    dim = s.dim
    if strict:
        inv = s.mv.reverse()
        cols = []
        for j in range(dim):
            image = mv_mul(mv_mul(s.mv, Multivector(dim, [1 << j], [1.0])), inv)
            vec = image.grade_part(1)
            leak = (image - vec).norm()
            if leak > GRADE_LEAK_TOL:
                raise InvalidSpinElementError(
                    f"s e_{j + 1} s^-1 has non-vector part of norm {leak:.3e}"
                )
            col = np.zeros(dim)
            col[[int(b).bit_length() - 1 for b in vec.blades]] = vec.coeffs
            cols.append(col)
        return np.column_stack(cols)
    lam = _lambda_dense(s.mv.to_dense(), dim)
    ortho = float(np.linalg.norm(lam @ lam.T - np.eye(dim)))
    if ortho > LAMBDA_ORTHO_TOL or np.linalg.det(lam) <= 0.0:
        raise InvalidSpinElementError(
            f"lambda image is not special orthogonal (orthogonality residual {ortho:.3e})"
        )
    return lam


def lambda_dense(dense: np.ndarray, dim: int) -> np.ndarray:
    """lambda of a spin element held as dense coefficients, unchecked."""
    return _lambda_dense(np.asarray(dense, dtype=float), dim)


def _antisymmetric(omega: np.ndarray) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {omega.shape}")
    return 0.5 * (omega - omega.T)


def bivector_from_so(omega: np.ndarray) -> Multivector:
    """Grade-2 beta with lambda(exp(beta)) = expm(omega)."""
    omega = _antisymmetric(omega)
    dim = omega.shape[0]
    i, j = np.triu_indices(dim, k=1)
    blades = (np.int64(1) << i.astype(np.int64)) | (np.int64(1) << j.astype(np.int64))
    return Multivector(dim, blades, 0.5 * omega[j, i])


def so_from_bivector(beta: Multivector) -> np.ndarray:
    """Antisymmetric matrix of the bivector, the inverse of bivector_from_so."""
    _require_bivector(beta)
    omega = np.zeros((beta.dim, beta.dim))
    for blade, c in zip(beta.blades.tolist(), beta.coeffs.tolist()):
        i = (blade & -blade).bit_length() - 1
        j = blade.bit_length() - 1
        omega[j, i] = 2.0 * c
        omega[i, j] = -2.0 * c
    return omega


def _require_bivector(beta: Multivector) -> None:
    if beta.blades.size and not np.all(beta.grades == 2):
        raise ValueError(f"expected a pure grade-2 multivector, got grades {sorted(set(beta.grades.tolist()))}")


def rotor_planes(omega: np.ndarray) -> List[Plane]:
    """Invariant planes (u, v, theta) of an antisymmetric matrix.

    omega = sum theta (v u^T - u v^T) over mutually orthogonal planes; read
    from the real Schur form.
    """
    omega = _antisymmetric(omega)
    n = omega.shape[0]
    if not np.any(omega):
        return []
    t, z = linalg.schur(omega, output="real")
    planes: List[Plane] = []
    k = 0
    while k < n:
        if k + 1 < n and t[k + 1, k] != 0.0:
            theta = 0.5 * (t[k + 1, k] - t[k, k + 1])
            planes.append((z[:, k].copy(), z[:, k + 1].copy(), float(theta)))
            k += 2
        else:
            k += 1
    return planes


def bivector_exp_factors(beta: Multivector) -> List[Plane]:
    """exp(beta) as commuting plane rotors cos(theta/2) + sin(theta/2) u v."""
    _require_bivector(beta)
    return rotor_planes(so_from_bivector(beta))


def apply_planes_dense(planes: Sequence[Plane], dense: np.ndarray, dim: int) -> np.ndarray:
    """Left-multiply dense coefficients by the plane rotors, one vector product at a time."""
    out = np.asarray(dense, dtype=float)
    for u, v, theta in planes:
        uv = vector_left_multiply(u, vector_left_multiply(v, out, dim), dim)
        out = np.cos(0.5 * theta) * out + np.sin(0.5 * theta) * uv
    return out


def spin_left_multiply(planes: Sequence[Plane], s: SpinElement) -> SpinElement:
    """exp(beta) * s with exp(beta) given by its plane factors."""
    dense = apply_planes_dense(planes, s.mv.to_dense(), s.dim)
    return SpinElement(Multivector.from_dense(s.dim, dense), check=False)


def _exp_series(beta: Multivector) -> Multivector:
    total = Multivector.scalar(beta.dim, 1.0)
    term = Multivector.scalar(beta.dim, 1.0)
    for k in range(1, SERIES_MAX_TERMS + 1):
        term = mv_mul(term, beta) * (1.0 / k)
        total = total + term
        if term.norm() < 1e-17 * max(1.0, total.norm()):
            logger.debug("exp series converged after %d terms", k)
            return total
    raise ConvergenceError(f"bivector exponential series did not converge in {SERIES_MAX_TERMS} terms")


def bivector_exp(beta: Multivector, method: str = "planes") -> SpinElement:
    """exp of a bivector, landing in Spin(n).

    Single blades use cos(c) + sin(c) blade. Otherwise "planes" multiplies the
    plane rotors of the Schur decomposition and "series" sums the power series.
    """
    _require_bivector(beta)
    dim = beta.dim
    if not beta.blades.size:
        return SpinElement.identity(dim)
    if beta.blades.size == 1:
        c = float(beta.coeffs[0])
        rotor = Multivector(dim, [0, int(beta.blades[0])], [np.cos(c), np.sin(c)]).prune()
        return SpinElement(rotor, check=False)
    if method == "series":
        return SpinElement(_exp_series(beta))
    if method != "planes":
        raise ValueError(f"unknown exponential method {method!r}")
    one = np.zeros(1 << dim)
    one[0] = 1.0
    dense = apply_planes_dense(bivector_exp_factors(beta), one, dim)
    return SpinElement(Multivector.from_dense(dim, dense))


def so_log_small(a: np.ndarray) -> np.ndarray:
    """Principal logarithm of a rotation within LOG_RADIUS of the identity."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    dist = float(np.linalg.norm(a - np.eye(a.shape[0]), 2))
    if dist >= LOG_RADIUS:
        raise StepTooLargeError(
            f"rotation step is {dist:.3f} from the identity (limit {LOG_RADIUS}); increase the step count"
        )
    if dist == 0.0:
        return np.zeros_like(a)
    omega = linalg.logm(a)
    return _antisymmetric(np.real(omega))


def plane_rotation(dim: int, i: int, j: int, theta: float) -> np.ndarray:
    """Rotation by theta taking basis vector i toward basis vector j (0-based)."""
    r = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    r[i, i] = c
    r[j, j] = c
    r[j, i] = s
    r[i, j] = -s
    return r


def random_rotor(dim: int, rng: np.random.Generator, scale: float = 1.0) -> SpinElement:
    """exp of a random bivector with coefficients uniform in [-scale, scale]."""
    a = rng.uniform(-scale, scale, size=(dim, dim))
    return bivector_exp(bivector_from_so(a - a.T))

