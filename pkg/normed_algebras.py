# -*- coding: utf-8 -*-
"""
Quaternion and octonion arithmetic, and real realizations of complex and
quaternionic matrices.

- Octonion basis 1 = i0, i1, ..., i7 with i_k i_{k+1} = i_{k+3} (indices mod 7);
  the multiplication table is generated from those relations.
- Quaternions are the subalgebra span{1, i1, i2, i4} of the octonions, so
  (1, i, j, k) = (i0, i1, i2, i4) and ij = k.
- Decomplexification orders coordinates (Re v0, Im v0, Re v1, ...);
  dequaternionification orders them (a0, b0, c0, d0, a1, ...).
- Quaternionic matrices are (m, m, 4) arrays and act by left multiplication;
  scalars act on the right.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from run_config import UNIT_TOL
from spin_errors import DimensionMismatchError, NotUnitError

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, "Octonion", "Quaternion", list, tuple]

# Quaternionic triples (k, k+1, k+3), indices 1..7 taken mod 7.
FANO_LINES: Tuple[Tuple[int, int, int], ...] = tuple(
    (k, k % 7 + 1, (k + 2) % 7 + 1) for k in range(1, 8)
)

QUATERNION_SLOTS = (0, 1, 2, 4)


def _build_octonion_table() -> np.ndarray:
    """table[a, b, c] is the coefficient of i_c in i_a i_b."""
    table = np.zeros((8, 8, 8))
    for k in range(8):
        table[0, k, k] = 1.0
        table[k, 0, k] = 1.0
    for k in range(1, 8):
        table[k, k, 0] = -1.0
    for a, b, c in FANO_LINES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[x, y, z] = 1.0
            table[y, x, z] = -1.0
    hits = np.abs(table).sum(axis=2)
    if not np.all(hits == 1.0):
        missing = np.argwhere(hits != 1.0).tolist()
        raise RuntimeError(f"octonion relations leave products undefined or doubly defined: {missing}")
    logger.debug("octonion table generated from %d quaternionic triples", len(FANO_LINES))
    return table


OCT_TABLE = _build_octonion_table()
QUAT_TABLE = OCT_TABLE[np.ix_(QUATERNION_SLOTS, QUATERNION_SLOTS, QUATERNION_SLOTS)].copy()

OCT_TABLE.setflags(write=False)
QUAT_TABLE.setflags(write=False)


def _coeffs(x: ArrayLike, size: int) -> np.ndarray:
    arr = np.asarray(getattr(x, "coeffs", x), dtype=float)
    if arr.shape[-1:] != (size,):
        raise DimensionMismatchError(f"expected trailing dimension {size}, got shape {arr.shape}")
    return arr


def _check_unit(norm: float, what: str) -> None:
    if abs(norm - 1.0) > UNIT_TOL:
        raise NotUnitError(f"{what} must have unit norm (tolerance {UNIT_TOL}), got norm {norm!r}")


class _DivisionAlgebraElement:
    """Shared arithmetic for Octonion and Quaternion; subclasses set SIZE and TABLE."""

    SIZE = 0
    TABLE: np.ndarray = np.zeros((0, 0, 0))
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: ArrayLike):
        arr = np.array(_coeffs(coeffs, self.SIZE), dtype=float)
        if arr.ndim != 1:
            raise DimensionMismatchError(f"{type(self).__name__} takes a single coefficient vector")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def basis(cls, k: int):
        e = np.zeros(cls.SIZE)
        e[k] = 1.0
        return cls(e)

    @classmethod
    def one(cls):
        return cls.basis(0)

    def __mul__(self, other):
        if isinstance(other, type(self)):
            return type(self)(np.einsum("i,j,ijk->k", self.coeffs, other.coeffs, self.TABLE))
        if np.isscalar(other):
            return type(self)(self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return type(self)(self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return type(self)(self.coeffs / float(other))
        return NotImplemented

    def __add__(self, other):
        return type(self)(self.coeffs + _coeffs(other, self.SIZE))

    def __sub__(self, other):
        return type(self)(self.coeffs - _coeffs(other, self.SIZE))

    def __neg__(self):
        return type(self)(-self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs.tobytes()))

    def conj(self):
        c = -self.coeffs.copy()
        c[0] = self.coeffs[0]
        return type(self)(c)

    @property
    def re(self) -> float:
        return float(self.coeffs[0])

    @property
    def im(self):
        c = self.coeffs.copy()
        c[0] = 0.0
        return type(self)(c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other) -> float:
        """<x, y> = Re(x conj(y))."""
        return (self * other.conj()).re

    def inverse(self):
        n2 = float(self.coeffs @ self.coeffs)
        if n2 == 0.0:
            raise ZeroDivisionError(f"{type(self).__name__} zero has no inverse")
        return self.conj() / n2

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, _coeffs(other, self.SIZE), atol=atol, rtol=0.0))

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs)
        return f"{type(self).__name__}([{terms}])"


class Octonion(_DivisionAlgebraElement):
    SIZE = 8
    TABLE = OCT_TABLE
    __slots__ = ()


class Quaternion(_DivisionAlgebraElement):
    SIZE = 4
    TABLE = QUAT_TABLE
    __slots__ = ()


# ---------------------------------------------------------------------------
# Octonions
# ---------------------------------------------------------------------------

def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    return Octonion(x) * Octonion(y)


def oct_mul_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise product of stacked coefficient arrays of shape (..., 8)."""
    return np.einsum("...i,...j,ijk->...k", _coeffs(x, 8), _coeffs(y, 8), OCT_TABLE)


def oct_conj_parts(x: Octonion) -> Tuple[Octonion, float, Octonion, float]:
    """(conj(x), Re x, Im x, |x|)."""
    x = Octonion(x)
    return x.conj(), x.re, x.im, x.norm()


def oct_inner(x: Octonion, y: Octonion) -> float:
    return Octonion(x).inner(Octonion(y))


def oct_commutator(x: Octonion, y: Octonion) -> Octonion:
    return x * y - y * x


def oct_left_matrix(z: ArrayLike) -> np.ndarray:
    """8x8 matrix of w -> z w."""
    return np.einsum("i,ijk->kj", _coeffs(z, 8), OCT_TABLE)


def oct_right_matrix(z: ArrayLike) -> np.ndarray:
    """8x8 matrix of w -> w z."""
    return np.einsum("j,ijk->ki", _coeffs(z, 8), OCT_TABLE)


def oct_from_quaternion(q: ArrayLike) -> Octonion:
    c = np.zeros(8)
    c[list(QUATERNION_SLOTS)] = _coeffs(q, 4)
    return Octonion(c)


# ---------------------------------------------------------------------------
# Quaternions
# ---------------------------------------------------------------------------

def quat_mul(p: ArrayLike, q: ArrayLike) -> np.ndarray:
    return np.einsum("...i,...j,ijk->...k", _coeffs(p, 4), _coeffs(q, 4), QUAT_TABLE)


def quat_conj(q: ArrayLike) -> np.ndarray:
    c = -np.array(_coeffs(q, 4))
    c[..., 0] *= -1.0
    return c


def quat_inverse(q: ArrayLike) -> np.ndarray:
    q = _coeffs(q, 4)
    return quat_conj(q) / np.sum(q * q, axis=-1, keepdims=True)


def quat_exp(v: ArrayLike) -> np.ndarray:
    """exp of a quaternion; the real part scales the result."""
    v = _coeffs(v, 4)
    vec = v[1:]
    theta = float(np.linalg.norm(vec))
    out = np.zeros(4)
    out[0] = np.cos(theta)
    if theta > 0.0:
        out[1:] = np.sin(theta) * vec / theta
    return np.exp(v[0]) * out


def quat_left_matrix(q: ArrayLike) -> np.ndarray:
    """4x4 matrix of v -> q v in basis (1, i, j, k)."""
    return np.einsum("i,ijk->kj", _coeffs(q, 4), QUAT_TABLE)


def quat_right_matrix(q: ArrayLike) -> np.ndarray:
    """4x4 matrix of v -> v q in basis (1, i, j, k)."""
    return np.einsum("j,ijk->ki", _coeffs(q, 4), QUAT_TABLE)


def qmat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of quaternionic matrices stored as (m, k, 4) and (k, n, 4) arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply quaternionic {a.shape[:2]} by {b.shape[:2]}")
    return np.einsum("rkp,kcq,pqs->rcs", a, b, QUAT_TABLE)


def qmat_identity(m: int) -> np.ndarray:
    out = np.zeros((m, m, 4))
    out[np.arange(m), np.arange(m), 0] = 1.0
    return out


def qmat_scalar(q: ArrayLike, m: int) -> np.ndarray:
    """q * Id_m as a quaternionic matrix."""
    out = np.zeros((m, m, 4))
    out[np.arange(m), np.arange(m)] = _coeffs(q, 4)
    return out


def qmat_conj_transpose(a: np.ndarray) -> np.ndarray:
    return quat_conj(np.transpose(np.asarray(a, dtype=float), (1, 0, 2)))


# ---------------------------------------------------------------------------
# Real realizations
# ---------------------------------------------------------------------------

_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class RealizedMatrix:
    """A real d x d matrix with the structure it was realized from.

    origin is "real", "complexified" (d = 2m) or "quaternionified" (d = 4m).
    """

    entries: np.ndarray
    origin: str = "real"
    m: int = 0

    def __matmul__(self, other: "RealizedMatrix") -> "RealizedMatrix":
        if (self.origin, self.m) != (other.origin, other.m):
            raise DimensionMismatchError(
                f"cannot compose {self.origin}({self.m}) with {other.origin}({other.m})"
            )
        return RealizedMatrix(self.entries @ other.entries, self.origin, self.m)

    @property
    def structure_operators(self) -> Tuple[np.ndarray, ...]:
        """Operators the matrix must commute with: J for complex, right i, j, k for quaternionic."""
        if self.origin == "complexified":
            return (np.kron(np.eye(self.m), _J2),)
        if self.origin == "quaternionified":
            return tuple(np.kron(np.eye(self.m), quat_right_matrix(Quaternion.basis(k))) for k in (1, 2, 3))
        return ()

    def structure_residual(self) -> float:
        """Largest commutator norm with the structure operators."""
        residuals = [np.linalg.norm(self.entries @ op - op @ self.entries) for op in self.structure_operators]
        return float(max(residuals, default=0.0))


def realize_complex(a: np.ndarray) -> RealizedMatrix:
    """Decomplexify a complex m x m matrix into a real 2m x 2m matrix."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square complex matrix, got shape {a.shape}")
    entries = np.kron(a.real, np.eye(2)) + np.kron(a.imag, _J2)
    return RealizedMatrix(entries, "complexified", a.shape[0])


def complex_from_realized(m: Union[np.ndarray, RealizedMatrix]) -> np.ndarray:
    """Inverse of realize_complex on its image."""
    arr = np.asarray(getattr(m, "entries", m), dtype=float)
    return arr[0::2, 0::2] + 1j * arr[1::2, 0::2]


def realize_quaternionic(a: np.ndarray) -> RealizedMatrix:
    """Left multiplication by a quaternionic m x m matrix as a real 4m x 4m matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 3 or a.shape[0] != a.shape[1] or a.shape[2] != 4:
        raise DimensionMismatchError(f"expected a quaternionic (m, m, 4) array, got shape {a.shape}")
    entries = sum(np.kron(a[:, :, p], quat_left_matrix(Quaternion.basis(p))) for p in range(4))
    return RealizedMatrix(entries, "quaternionified", a.shape[0])


def dequaternionify(m: Union[np.ndarray, RealizedMatrix]) -> np.ndarray:
    """Inverse of realize_quaternionic on its image: first column of each 4x4 block."""
    arr = np.asarray(getattr(m, "entries", m), dtype=float)
    if arr.shape[0] % 4 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"expected a square 4m x 4m matrix, got shape {arr.shape}")
    size = arr.shape[0] // 4
    return arr[:, 0::4].reshape(size, 4, size).transpose(0, 2, 1).copy()


def quaternionic_complex_form(a: np.ndarray) -> np.ndarray:
    """Complex 2m x 2m matrix of a quaternionic matrix acting on H^m = C^2m.

    A quaternion (a + bi) + j(c - di) maps to [[w1, -conj(w2)], [w2, conj(w1)]]
    with w1 = a + bi, w2 = c - di; this is the standard representation of Sp(m).
    """
    a = np.asarray(a, dtype=float)
    size = a.shape[0]
    w1 = a[..., 0] + 1j * a[..., 1]
    w2 = a[..., 2] - 1j * a[..., 3]
    out = np.zeros((2 * size, 2 * size), dtype=complex)
    out[0::2, 0::2] = w1
    out[0::2, 1::2] = -np.conj(w2)
    out[1::2, 0::2] = w2
    out[1::2, 1::2] = np.conj(w1)
    return out


def right_scalar_action(q: ArrayLike, m: int) -> np.ndarray:
    """4m x 4m matrix of v -> v q^-1 on H^m."""
    return np.kron(np.eye(m), quat_right_matrix(quat_inverse(q)))


def iota_embed(z: complex) -> Quaternion:
    """The embedding U(1) -> Sp(1), a + ib -> a + bi."""
    z = complex(z)
    _check_unit(abs(z), "iota_embed input")
    z = z / abs(z)
    return Quaternion([z.real, z.imag, 0.0, 0.0])
