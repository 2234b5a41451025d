# -*- coding: utf-8 -*-
"""
The transitive sphere actions, their stabilizer loops, and the isotropy path
sigma(gamma(t)) read off as the differential at the base point.

Every action is linear on its ambient space, so the differential at
o = (1, 0, ..., 0) is the realized matrix restricted to the tangent space
spanned by e_2, ..., e_{ambient_dim}.

Group elements are passed around in native form as dicts of factors:
  "SO": real matrix, "U"/"SU": complex matrix, "Sp": quaternionic (m, m, 4) array,
  "U1": unit complex scalar, "Sp1": unit quaternion (4,).
The quotient families Sp(n+1)U(1) and Sp(n+1)Sp(1) act by
mu_[A, z](v) = A v iota(z)^-1 and are only ever handled through that action.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Union

import numpy as np
from scipy import linalg

from normed_algebras import (
    QUAT_TABLE,
    iota_embed,
    qmat_conj_transpose,
    qmat_scalar,
    quat_exp,
    quat_inverse,
    quat_mul,
    realize_complex,
    realize_quaternionic,
    dequaternionify,
    right_scalar_action,
)
from run_config import CLIFFORD_DIM_MAX, DEFAULT_STEPS, LOG_RADIUS, MIN_STEPS, STABILIZER_TOL, UNIT_TOL
from spin_errors import (
    DimensionCeilingError,
    NotUnitError,
    StabilizerViolationError,
    StepTooLargeError,
    UnsupportedFamilyError,
)

logger = logging.getLogger(__name__)

Element = Dict[str, Any]


class Family(str, Enum):
    SO = "SO"
    U = "U"
    SU = "SU"
    Sp = "Sp"
    SpU1 = "SpU1"
    SpSp1 = "SpSp1"
    G2 = "G2"
    Spin7 = "Spin7"
    Spin9 = "Spin9"


CLI_NAMES: Dict[str, Family] = {
    "so": Family.SO,
    "u": Family.U,
    "su": Family.SU,
    "sp": Family.Sp,
    "sp-u1": Family.SpU1,
    "sp-sp1": Family.SpSp1,
    "g2": Family.G2,
    "spin7": Family.Spin7,
    "spin9": Family.Spin9,
}

LOOP_FAMILIES = frozenset({Family.SO, Family.U, Family.SpU1, Family.SpSp1})
EXCEPTIONAL_FAMILIES = frozenset({Family.G2, Family.Spin7, Family.Spin9})
QUATERNIONIC_FAMILIES = frozenset({Family.Sp, Family.SpU1, Family.SpSp1})

_EXCEPTIONAL_SPHERES = {Family.G2: 6, Family.Spin7: 7, Family.Spin9: 15}
_EXCEPTIONAL_NAMES = {Family.G2: ("G2", "SU(3)"), Family.Spin7: ("Spin(7)", "G2"), Family.Spin9: ("Spin(9)", "Spin(7)")}


def parse_family(name: Union[str, Family]) -> Family:
    """Family from a CLI name (so, sp-u1, ...) or an enum value (SO, SpU1, ...)."""
    if isinstance(name, Family):
        return name
    key = str(name).strip()
    if key.lower() in CLI_NAMES:
        return CLI_NAMES[key.lower()]
    for fam in Family:
        if fam.value.lower() == key.lower():
            return fam
    raise UnsupportedFamilyError(f"unknown family {name!r}; choose from {', '.join(CLI_NAMES)}")


@dataclass(frozen=True)
class ActionSpec:
    family: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", parse_family(self.family))
        if self.family in EXCEPTIONAL_FAMILIES:
            if self.n != 0:
                raise UnsupportedFamilyError(f"{self.family.value} has no family parameter; use n = 0, got {self.n}")
        elif self.family == Family.SO and self.n < 2:
            raise UnsupportedFamilyError(f"SO needs n >= 2 (S^1 has trivial stabilizer), got {self.n}")
        elif self.n < 1:
            raise UnsupportedFamilyError(f"{self.family.value} needs n >= 1, got {self.n}")
        if self.sphere_dim > CLIFFORD_DIM_MAX:
            raise DimensionCeilingError(
                f"{self.group_name} acts on S^{self.sphere_dim}; tangent dimension exceeds {CLIFFORD_DIM_MAX}"
            )

    @property
    def sphere_dim(self) -> int:
        fam, n = self.family, self.n
        if fam == Family.SO:
            return n
        if fam in (Family.U, Family.SU):
            return 2 * n + 1
        if fam in QUATERNIONIC_FAMILIES:
            return 4 * n + 3
        return _EXCEPTIONAL_SPHERES[fam]

    @property
    def ambient_dim(self) -> int:
        return self.sphere_dim + 1

    @property
    def base_point(self) -> np.ndarray:
        o = np.zeros(self.ambient_dim)
        o[0] = 1.0
        return o

    @property
    def simply_connected_stabilizer(self) -> bool:
        return self.family not in LOOP_FAMILIES

    @property
    def group_name(self) -> str:
        fam, n = self.family, self.n
        if fam in EXCEPTIONAL_FAMILIES:
            return _EXCEPTIONAL_NAMES[fam][0]
        return {
            Family.SO: f"SO({n + 1})",
            Family.U: f"U({n + 1})",
            Family.SU: f"SU({n + 1})",
            Family.Sp: f"Sp({n + 1})",
            Family.SpU1: f"Sp({n + 1})U(1)",
            Family.SpSp1: f"Sp({n + 1})Sp(1)",
        }[fam]

    @property
    def stabilizer_name(self) -> str:
        fam, n = self.family, self.n
        if fam in EXCEPTIONAL_FAMILIES:
            return _EXCEPTIONAL_NAMES[fam][1]
        return {
            Family.SO: f"SO({n})",
            Family.U: f"U({n})",
            Family.SU: f"SU({n})",
            Family.Sp: f"Sp({n})",
            Family.SpU1: f"Sp({n})U(1)",
            Family.SpSp1: f"Sp({n})Sp(1)",
        }[fam]

    @property
    def label(self) -> str:
        return f"{self.family.value}/{self.n}"


@dataclass(frozen=True, eq=False)
class RotationPath:
    """Samples of a path in SO(m), shape (K + 1, m, m)."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"rotation path samples must have shape (K+1, m, m), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def dim(self) -> int:
        return int(self.samples.shape[1])

    @property
    def steps(self) -> int:
        return int(self.samples.shape[0]) - 1

    def is_loop(self, atol: float = 1e-8) -> bool:
        return bool(np.max(np.abs(self.samples[-1] - self.samples[0])) <= atol)

    def max_step(self) -> float:
        if self.steps == 0:
            return 0.0
        diffs = self.samples[1:] - self.samples[:-1]
        return float(max(np.linalg.norm(d, 2) for d in diffs))

    def validate(self, tol: float = 1e-9) -> None:
        """Raise unless every sample is special orthogonal, the path starts at Id and steps stay small."""
        eye = np.eye(self.dim)
        ortho = np.abs(np.einsum("kij,klj->kil", self.samples, self.samples) - eye).max()
        if ortho > tol:
            raise NotUnitError(f"rotation path sample is not orthogonal (residual {ortho:.3e})")
        if self.dim and np.any(np.linalg.det(self.samples) <= 0.0):
            raise NotUnitError("rotation path leaves SO(m): a sample has non-positive determinant")
        start = np.abs(self.samples[0] - eye).max()
        if start > tol:
            raise ValueError(f"rotation path must start at the identity (offset {start:.3e})")
        step = self.max_step()
        if step >= LOG_RADIUS:
            raise StepTooLargeError(f"rotation path step {step:.3f} exceeds {LOG_RADIUS}; re-sample with more steps")


@dataclass(frozen=True, eq=False)
class GroupLoop:
    """A stabilizer loop realized on the ambient space at t_k = k / K."""

    spec: ActionSpec
    samples: np.ndarray
    trivial_pi1: bool = False
    times: np.ndarray = field(default=None, repr=False)

    @property
    def steps(self) -> int:
        return int(self.samples.shape[0]) - 1


def rotation_block(t: float) -> np.ndarray:
    """R(t), the rotation by 2 pi t."""
    c, s = np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)
    return np.array([[c, -s], [s, c]])


def _qmat_block(head, tail: np.ndarray) -> np.ndarray:
    """Quaternionic block diagonal diag(head, tail)."""
    m = tail.shape[0]
    out = np.zeros((m + 1, m + 1, 4))
    out[0, 0] = head
    out[1:, 1:] = tail
    return out


def _block(head, tail: np.ndarray, dtype=float) -> np.ndarray:
    m = tail.shape[0]
    out = np.zeros((m + 1, m + 1), dtype=dtype)
    out[0, 0] = head
    out[1:, 1:] = tail
    return out


def loop_element(spec: ActionSpec, t: float) -> Element:
    """Native group element of the generating loop at parameter t."""
    fam, n = spec.family, spec.n
    if fam == Family.SO:
        a = np.eye(n + 1)
        a[n - 1:, n - 1:] = rotation_block(t)
        return {"SO": a}
    if fam == Family.U:
        a = np.eye(n + 1, dtype=complex)
        a[n, n] = np.exp(2j * np.pi * t)
        return {"U": a}
    if fam in (Family.SpU1, Family.SpSp1):
        z = np.exp(1j * np.pi * t)
        q = iota_embed(z).coeffs
        key, scalar = ("U1", z) if fam == Family.SpU1 else ("Sp1", q)
        return {"Sp": qmat_scalar(q, n + 1), key: scalar}
    raise UnsupportedFamilyError(f"{spec.group_name} has a simply connected stabilizer; there is no generating loop")


def realize_element(spec: ActionSpec, element: Mapping[str, Any]) -> np.ndarray:
    """Ambient real matrix of a native group element."""
    fam, n = spec.family, spec.n
    if fam == Family.SO:
        return np.asarray(element["SO"], dtype=float)
    if fam in (Family.U, Family.SU):
        return realize_complex(element[fam.value]).entries
    if fam == Family.Sp:
        return realize_quaternionic(element["Sp"]).entries
    if fam == Family.SpU1:
        q = iota_embed(element["U1"]).coeffs
        return realize_quaternionic(element["Sp"]).entries @ right_scalar_action(q, n + 1)
    if fam == Family.SpSp1:
        return realize_quaternionic(element["Sp"]).entries @ right_scalar_action(element["Sp1"], n + 1)
    raise UnsupportedFamilyError(f"{spec.group_name} is not realized as a matrix family here")


def stabilizer_loop(spec: ActionSpec, steps: int = DEFAULT_STEPS) -> GroupLoop:
    """Generating loop of pi_1 of the stabilizer, realized on the ambient space.

    Families with simply connected stabilizer get the constant loop with
    trivial_pi1 set.
    """
    if steps < MIN_STEPS:
        raise ValueError(f"loops need at least {MIN_STEPS} steps, got {steps}")
    times = np.linspace(0.0, 1.0, steps + 1)
    if spec.simply_connected_stabilizer:
        samples = np.broadcast_to(np.eye(spec.ambient_dim), (steps + 1, spec.ambient_dim, spec.ambient_dim)).copy()
        logger.debug("%s: stabilizer %s is simply connected, constant loop", spec.group_name, spec.stabilizer_name)
        return GroupLoop(spec, samples, trivial_pi1=True, times=times)
    samples = np.stack([realize_element(spec, loop_element(spec, t)) for t in times])
    moved = np.abs(samples[:, :, 0] - spec.base_point).max()
    if moved > STABILIZER_TOL:
        raise StabilizerViolationError(f"{spec.group_name} loop moves the base point by {moved:.3e}")
    logger.debug("%s: built %d-step stabilizer loop", spec.group_name, steps)
    return GroupLoop(spec, samples, trivial_pi1=False, times=times)


def isotropy_path_differential(spec: ActionSpec, loop: GroupLoop) -> RotationPath:
    """sigma(gamma(t_k)): each sample restricted to the tangent space at o."""
    if loop.spec != spec:
        raise ValueError(f"loop belongs to {loop.spec.label}, not {spec.label}")
    samples = np.asarray(loop.samples)
    moved = np.abs(samples[:, :, 0] - spec.base_point).max()
    if moved > STABILIZER_TOL:
        raise StabilizerViolationError(f"a loop sample moves the base point by {moved:.3e}")
    return RotationPath(samples[:, 1:, 1:])


def action_apply(spec: ActionSpec, g: Union[np.ndarray, Mapping[str, Any]], v: np.ndarray) -> np.ndarray:
    """Image of a unit ambient vector under g (a realized matrix or a native element)."""
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > UNIT_TOL:
        raise NotUnitError(f"action input must be a unit vector, got norm {norm!r}")
    v = v / norm
    if not isinstance(g, Mapping):
        return np.asarray(g, dtype=float) @ v
    if spec.family in (Family.SpU1, Family.SpSp1):
        a = np.asarray(g["Sp"], dtype=float)
        q = iota_embed(g["U1"]).coeffs if spec.family == Family.SpU1 else np.asarray(g["Sp1"], dtype=float)
        coords = v.reshape(spec.n + 1, 4)
        image = np.einsum("rcp,cq,pqs->rs", a, coords, QUAT_TABLE)
        return quat_mul(image, quat_inverse(q)).reshape(-1)
    return realize_element(spec, g) @ v


def stabilizer_embedding(spec: ActionSpec, h: Mapping[str, Any]) -> Element:
    """The group element f_n(h) of a stabilizer element h."""
    fam = spec.family
    if fam == Family.SO:
        return {"SO": _block(1.0, np.asarray(h["SO"], dtype=float))}
    if fam in (Family.U, Family.SU):
        return {fam.value: _block(1.0, np.asarray(h[fam.value], dtype=complex), dtype=complex)}
    if fam == Family.Sp:
        return {"Sp": _qmat_block([1.0, 0.0, 0.0, 0.0], np.asarray(h["Sp"], dtype=float))}
    if fam == Family.SpU1:
        z = complex(h["U1"])
        return {"Sp": _qmat_block(iota_embed(z).coeffs, np.asarray(h["Sp"], dtype=float)), "U1": z}
    if fam == Family.SpSp1:
        q = np.asarray(h["Sp1"], dtype=float)
        return {"Sp": _qmat_block(q, np.asarray(h["Sp"], dtype=float)), "Sp1": q}
    raise UnsupportedFamilyError(f"stabilizer of {spec.group_name} is not realized here")


def stabilizer_matrix(spec: ActionSpec, h: Mapping[str, Any]) -> np.ndarray:
    g = realize_element(spec, stabilizer_embedding(spec, h))
    moved = float(np.abs(g[:, 0] - spec.base_point).max())
    if moved > STABILIZER_TOL:
        raise StabilizerViolationError(f"stabilizer sample moves the base point by {moved:.3e}")
    return g


def random_group_element(kind: str, m: int, rng: np.random.Generator) -> Any:
    """exp of a random Lie algebra element with entries uniform in [-1, 1].

    kind is one of SO, U, SU, Sp (m x m matrices) or U1, Sp1 (m ignored).
    """
    if kind == "SO":
        a = rng.uniform(-1.0, 1.0, size=(m, m))
        return linalg.expm(0.5 * (a - a.T))
    if kind in ("U", "SU"):
        a = rng.uniform(-1.0, 1.0, size=(m, m)) + 1j * rng.uniform(-1.0, 1.0, size=(m, m))
        x = 0.5 * (a - a.conj().T)
        if kind == "SU" and m:
            x = x - np.trace(x) / m * np.eye(m)
        return linalg.expm(x)
    if kind == "Sp":
        a = rng.uniform(-1.0, 1.0, size=(m, m, 4))
        x = 0.5 * (a - qmat_conj_transpose(a))
        return dequaternionify(linalg.expm(realize_quaternionic(x).entries))
    if kind == "U1":
        return complex(np.exp(1j * np.pi * rng.uniform(-1.0, 1.0)))
    if kind == "Sp1":
        v = np.zeros(4)
        v[1:] = np.pi * rng.uniform(-1.0, 1.0, size=3) / np.sqrt(3.0)
        return quat_exp(v)
    raise UnsupportedFamilyError(f"no sampler for group kind {kind!r}")


def sample_stabilizer(spec: ActionSpec, rng: np.random.Generator) -> Element:
    """A random stabilizer element in native form."""
    fam, n = spec.family, spec.n
    if fam in (Family.SO, Family.U, Family.SU, Family.Sp):
        return {fam.value: random_group_element(fam.value, n, rng)}
    if fam == Family.SpU1:
        return {"Sp": random_group_element("Sp", n, rng), "U1": random_group_element("U1", 0, rng)}
    if fam == Family.SpSp1:
        return {"Sp": random_group_element("Sp", n, rng), "Sp1": random_group_element("Sp1", 0, rng)}
    raise UnsupportedFamilyError(f"stabilizer of {spec.group_name} is not sampled here")


def repeat_path(path: RotationPath, times: int) -> RotationPath:
    """Traverse a loop several times in succession."""
    if times < 1:
        raise ValueError(f"times must be positive, got {times}")
    body = [path.samples] + [path.samples[1:]] * (times - 1)
    return RotationPath(np.concatenate(body))


def conjugate_path(path: RotationPath, p: np.ndarray) -> RotationPath:
    """P A_k P^T for a fixed orthogonal P."""
    p = np.asarray(p, dtype=float)
    return RotationPath(np.einsum("ij,kjl,ml->kim", p, path.samples, p))


def identity_path(dim: int, steps: int) -> RotationPath:
    return RotationPath(np.broadcast_to(np.eye(dim), (steps + 1, dim, dim)).copy())
