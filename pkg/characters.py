# -*- coding: utf-8 -*-
"""
Representation expressions over the standard representations of the compact
classical groups, evaluated as characters on sampled group elements.

Expressions are small frozen trees:
  leaves  StdSO, StdU, ConjStdU, StdSp, Trivial, Weight, Adjoint, Zeta, Delta7
  nodes   Sum (+), Tensor (*), External, Wedge2, Sym2, Dual, Realify, RealForm, Restrict
Each leaf reads one named factor of a SampledElement ("SO", "U", "SU", "Sp",
"U1", "Sp1", "G2", "Spin7"), so a product group is just an element with
several factors.

Usage:
  lhs = Restrict(Wedge2(StdSO()), BlockEmbedding("SO"))
  rhs = Wedge2(StdSO()) + StdSO()
  verify_decomposition(lhs, rhs, GroupSampler.of(SO=4), trials=100)   # ~1e-15
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

import numpy as np
from scipy import linalg

from clifford_spin import SpinElement, lambda_map, random_rotor
from exceptional import (
    g2_isotropy_matrix,
    spin7_module_matrix,
    spin7_stabilizer_sample,
    spin9_isotropy_sample,
    su3_extend_to_g2,
)
from lie_adjoint import adjoint_trace, matrix_group_algebra
from normed_algebras import (
    iota_embed,
    qmat_identity,
    qmat_mul,
    quat_mul,
    quaternionic_complex_form,
    realize_complex,
    realize_quaternionic,
)
from run_config import CHARACTER_TOL, CHARACTER_TRIALS, DEFAULT_SEED, ISOTROPY_TOL, ISOTROPY_TRIALS
from sphere_actions import ActionSpec, Family, random_group_element, sample_stabilizer, stabilizer_matrix
from spin_errors import DimensionMismatchError, IncompatibleRepresentationError, NotUnitError

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-8

_MATRIX_FACTORS = frozenset({"SO", "U", "SU", "G2"})


# ---------------------------------------------------------------------------
# Sampled elements
# ---------------------------------------------------------------------------

def _as_qmat(value: Any) -> np.ndarray:
    """Quaternionic matrix view of an Sp factor; a unit quaternion is a 1x1 matrix."""
    arr = np.asarray(value, dtype=float)
    return arr.reshape(1, 1, 4) if arr.shape == (4,) else arr


def _membership_residual(key: str, value: Any) -> float:
    if key in ("SO", "G2"):
        a = np.asarray(value, dtype=float)
        res = float(np.abs(a @ a.T - np.eye(a.shape[0])).max())
        return res + max(0.0, -np.linalg.det(a))
    if key in ("U", "SU"):
        a = np.asarray(value, dtype=complex)
        res = float(np.abs(a.conj().T @ a - np.eye(a.shape[0])).max())
        return res + (abs(complex(np.linalg.det(a)) - 1.0) if key == "SU" else 0.0)
    if key in ("Sp", "Sp1"):
        r = realize_quaternionic(_as_qmat(value)).entries
        return float(np.abs(r @ r.T - np.eye(r.shape[0])).max())
    if key == "U1":
        return abs(abs(complex(value)) - 1.0)
    if key == "Spin7":
        if not isinstance(value, SpinElement) or value.dim != 7:
            return float("inf")
        return abs(float(np.sum(value.mv.coeffs ** 2)) - 1.0)
    raise IncompatibleRepresentationError(f"unknown group factor {key!r}")


def _square(key: str, value: Any) -> Any:
    if key in _MATRIX_FACTORS:
        return value @ value
    if key == "Sp":
        return qmat_mul(value, value)
    if key == "Sp1":
        return quat_mul(value, value)
    if key == "U1":
        return value * value
    if key == "Spin7":
        return value * value
    raise IncompatibleRepresentationError(f"unknown group factor {key!r}")


@dataclass(frozen=True, eq=False)
class SampledElement:
    """An element of a (product) group, one native value per named factor."""

    group: str
    factors: Mapping[str, Any]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", dict(self.factors))
        if self.check:
            for key, value in self.factors.items():
                res = _membership_residual(key, value)
                if res > MEMBERSHIP_TOL:
                    raise NotUnitError(f"{self.group}: factor {key} is off its group by {res:.3e}")

    def factor(self, key: str) -> Any:
        try:
            return self.factors[key]
        except KeyError:
            raise IncompatibleRepresentationError(
                f"representation needs a {key} factor but {self.group} has {sorted(self.factors)}"
            ) from None

    def square(self) -> "SampledElement":
        return SampledElement(self.group, {k: _square(k, v) for k, v in self.factors.items()}, check=False)

    def with_factors(self, group: str, **updates: Any) -> "SampledElement":
        factors = dict(self.factors)
        factors.update(updates)
        return SampledElement(group, factors, check=False)


def _identity_factor(kind: str, m: int) -> Any:
    if kind == "SO":
        return np.eye(m)
    if kind in ("U", "SU"):
        return np.eye(m, dtype=complex)
    if kind == "Sp":
        return qmat_identity(m)
    if kind == "U1":
        return 1.0 + 0.0j
    if kind == "Sp1":
        return np.array([1.0, 0.0, 0.0, 0.0])
    if kind == "Spin7":
        return SpinElement.identity(7)
    raise IncompatibleRepresentationError(f"no identity for group factor {kind!r}")


@dataclass(frozen=True)
class GroupSampler:
    """Random elements of a product of SO(m), U(m), SU(m), Sp(m), U(1), Sp(1) and Spin(7)."""

    kinds: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, **kinds: int) -> "GroupSampler":
        return cls(tuple(kinds.items()))

    @property
    def label(self) -> str:
        names = {"U1": "U(1)", "Sp1": "Sp(1)", "Spin7": "Spin(7)"}
        return " x ".join(names.get(k, f"{k}({m})") for k, m in self.kinds)

    def identity(self) -> SampledElement:
        return SampledElement(self.label, {k: _identity_factor(k, m) for k, m in self.kinds})

    def sample(self, rng: np.random.Generator) -> SampledElement:
        factors = {}
        for kind, m in self.kinds:
            factors[kind] = random_rotor(7, rng) if kind == "Spin7" else random_group_element(kind, m, rng)
        return SampledElement(self.label, factors)


# ---------------------------------------------------------------------------
# Embeddings used by Restrict
# ---------------------------------------------------------------------------

def _quaternionic_block(head: np.ndarray, tail: np.ndarray) -> np.ndarray:
    m = tail.shape[0]
    out = np.zeros((m + 1, m + 1, 4))
    out[0, 0] = head
    out[1:, 1:] = tail
    return out


@dataclass(frozen=True)
class BlockEmbedding:
    """A -> diag(head, A) on one factor; head is 1 or the value of another factor."""

    factor: str
    head: Optional[str] = None

    @property
    def sources(self) -> FrozenSet[str]:
        return frozenset({self.factor} | ({self.head} if self.head else set()))

    def __call__(self, g: SampledElement) -> SampledElement:
        a = g.factor(self.factor)
        if self.factor == "Sp":
            if self.head == "U1":
                head = iota_embed(g.factor("U1")).coeffs
            elif self.head == "Sp1":
                head = np.asarray(g.factor("Sp1"), dtype=float)
            else:
                head = np.array([1.0, 0.0, 0.0, 0.0])
            image = _quaternionic_block(head, np.asarray(a, dtype=float))
        else:
            head = g.factor(self.head) if self.head else 1.0
            image = linalg.block_diag(np.array([[head]]), a)
        return g.with_factors(f"{g.group} in {self.factor}({image.shape[0]})", **{self.factor: image})

    def __str__(self):
        return f"{self.factor}(n) -> {self.factor}(n+1)"


@dataclass(frozen=True)
class IotaEmbedding:
    """U(1) -> Sp(1), z -> a + bi."""

    sources: FrozenSet[str] = frozenset({"U1"})

    def __call__(self, g: SampledElement) -> SampledElement:
        return g.with_factors(g.group, Sp1=iota_embed(g.factor("U1")).coeffs)

    def __str__(self):
        return "iota"


@dataclass(frozen=True)
class G2Embedding:
    """SU(3) -> G2 as the automorphisms of O fixing i1."""

    sources: FrozenSet[str] = frozenset({"SU"})

    def __call__(self, g: SampledElement) -> SampledElement:
        return g.with_factors(g.group, G2=su3_extend_to_g2(g.factor("SU")))

    def __str__(self):
        return "SU(3) -> G2"


@dataclass(frozen=True)
class CoveringMap:
    """Spin(7) -> SO(7), the double cover lambda."""

    sources: FrozenSet[str] = frozenset({"Spin7"})

    def __call__(self, g: SampledElement) -> SampledElement:
        return g.with_factors(g.group, SO=lambda_map(g.factor("Spin7")))

    def __str__(self):
        return "lambda"


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

class RepExpr:
    """A representation, known through its character."""

    def evaluate(self, g: SampledElement) -> complex:
        raise NotImplementedError

    def factors(self) -> FrozenSet[str]:
        return frozenset()

    def __add__(self, other: "RepExpr") -> "Sum":
        left = self.terms if isinstance(self, Sum) else (self,)
        right = other.terms if isinstance(other, Sum) else (other,)
        return Sum(left + right)

    def __mul__(self, other: "RepExpr") -> "Tensor":
        return Tensor((self, other))


@dataclass(frozen=True)
class StdSO(RepExpr):
    factor: str = "SO"

    def evaluate(self, g):
        return complex(np.trace(g.factor(self.factor)))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "lambda"


@dataclass(frozen=True)
class StdU(RepExpr):
    factor: str = "U"

    def evaluate(self, g):
        return complex(np.trace(g.factor(self.factor)))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "mu"


@dataclass(frozen=True)
class ConjStdU(RepExpr):
    factor: str = "U"

    def evaluate(self, g):
        return complex(np.trace(g.factor(self.factor))).conjugate()

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "mubar"


@dataclass(frozen=True)
class StdSp(RepExpr):
    """nu: Sp(m) on H^m = C^2m; a Sp1 factor is read as Sp(1)."""

    factor: str = "Sp"

    def evaluate(self, g):
        return complex(np.trace(quaternionic_complex_form(_as_qmat(g.factor(self.factor)))))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "nu" if self.factor == "Sp" else "nu_1"


@dataclass(frozen=True)
class Trivial(RepExpr):
    def evaluate(self, g):
        return 1.0 + 0.0j

    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Weight(RepExpr):
    """rho_m: z -> z^m on U(1)."""

    m: int
    factor: str = "U1"

    def evaluate(self, g):
        return complex(g.factor(self.factor)) ** self.m

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return f"rho_{self.m}"


@dataclass(frozen=True)
class Adjoint(RepExpr):
    """Ad on the realized Lie algebra of kind so, u, su or sp."""

    kind: str
    factor: str

    def evaluate(self, g):
        value = g.factor(self.factor)
        if self.kind == "so":
            realized = np.asarray(value, dtype=float)
        elif self.kind in ("u", "su"):
            realized = realize_complex(value).entries
        elif self.kind == "sp":
            realized = realize_quaternionic(_as_qmat(value)).entries
        else:
            raise IncompatibleRepresentationError(f"no adjoint representation of kind {self.kind!r}")
        m = realized.shape[0] // {"so": 1, "u": 2, "su": 2, "sp": 4}[self.kind]
        return complex(adjoint_trace(matrix_group_algebra(self.kind, m), realized))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return f"Ad({self.factor})"


@dataclass(frozen=True)
class Zeta(RepExpr):
    """G2 on Im(O)."""

    factor: str = "G2"

    def evaluate(self, g):
        return complex(np.trace(np.asarray(g.factor(self.factor))[1:, 1:]))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "zeta"


@dataclass(frozen=True)
class Delta7(RepExpr):
    """The spin representation of Spin(7) on O."""

    factor: str = "Spin7"

    def evaluate(self, g):
        return complex(np.trace(spin7_module_matrix(g.factor(self.factor))))

    def factors(self):
        return frozenset({self.factor})

    def __str__(self):
        return "Delta_7"


@dataclass(frozen=True)
class Sum(RepExpr):
    terms: Tuple[RepExpr, ...]

    def evaluate(self, g):
        return sum((t.evaluate(g) for t in self.terms), 0.0 + 0.0j)

    def factors(self):
        return frozenset().union(*(t.factors() for t in self.terms))

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)


@dataclass(frozen=True)
class Tensor(RepExpr):
    terms: Tuple[RepExpr, ...]

    def evaluate(self, g):
        out = 1.0 + 0.0j
        for t in self.terms:
            out *= t.evaluate(g)
        return out

    def factors(self):
        return frozenset().union(*(t.factors() for t in self.terms))

    def __str__(self):
        return " x ".join(f"({t})" for t in self.terms)


@dataclass(frozen=True)
class External(RepExpr):
    """Outer tensor product of representations of disjoint factors."""

    left: RepExpr
    right: RepExpr

    def __post_init__(self):
        shared = self.left.factors() & self.right.factors()
        if shared:
            raise IncompatibleRepresentationError(f"external product over shared factors {sorted(shared)}")

    def evaluate(self, g):
        return self.left.evaluate(g) * self.right.evaluate(g)

    def factors(self):
        return self.left.factors() | self.right.factors()

    def __str__(self):
        return f"({self.left}) [x] ({self.right})"


@dataclass(frozen=True)
class Wedge2(RepExpr):
    inner: RepExpr

    def evaluate(self, g):
        return 0.5 * (self.inner.evaluate(g) ** 2 - self.inner.evaluate(g.square()))

    def factors(self):
        return self.inner.factors()

    def __str__(self):
        return f"L2({self.inner})"


@dataclass(frozen=True)
class Sym2(RepExpr):
    inner: RepExpr

    def evaluate(self, g):
        return 0.5 * (self.inner.evaluate(g) ** 2 + self.inner.evaluate(g.square()))

    def factors(self):
        return self.inner.factors()

    def __str__(self):
        return f"S2({self.inner})"


@dataclass(frozen=True)
class Dual(RepExpr):
    inner: RepExpr

    def evaluate(self, g):
        return self.inner.evaluate(g).conjugate()

    def factors(self):
        return self.inner.factors()

    def __str__(self):
        return f"({self.inner})*"


@dataclass(frozen=True)
class Realify(RepExpr):
    """Underlying real representation of a complex one."""

    inner: RepExpr

    def evaluate(self, g):
        value = self.inner.evaluate(g)
        return value + value.conjugate()

    def factors(self):
        return self.inner.factors()

    def __str__(self):
        return f"({self.inner})^R"


@dataclass(frozen=True)
class RealForm(RepExpr):
    """Real form of a complex representation of real type: same character, half the real dimension of Realify."""

    inner: RepExpr

    def evaluate(self, g):
        return self.inner.evaluate(g)

    def factors(self):
        return self.inner.factors()

    def __str__(self):
        return f"real({self.inner})"


@dataclass(frozen=True)
class Restrict(RepExpr):
    inner: RepExpr
    embedding: Any

    def evaluate(self, g):
        return self.inner.evaluate(self.embedding(g))

    def factors(self):
        return frozenset(self.embedding.sources)

    def __str__(self):
        return f"{self.inner}|[{self.embedding}]"


# ---------------------------------------------------------------------------
# Evaluation and verification
# ---------------------------------------------------------------------------

def char_eval(expr: RepExpr, g: SampledElement) -> complex:
    return complex(expr.evaluate(g))


def dimension(expr: RepExpr, sampler: GroupSampler) -> float:
    """Character at the identity."""
    value = char_eval(expr, sampler.identity())
    if abs(value.imag) > CHARACTER_TOL:
        raise IncompatibleRepresentationError(f"{expr} has non-real dimension {value}")
    return value.real


def verify_decomposition(lhs: RepExpr, rhs: RepExpr, sampler: GroupSampler, trials: int = CHARACTER_TRIALS,
                         rng: Optional[np.random.Generator] = None) -> float:
    """max |chi_lhs(g) - chi_rhs(g)| over random g; dimensions must agree first."""
    dl, dr = dimension(lhs, sampler), dimension(rhs, sampler)
    if abs(dl - dr) > CHARACTER_TOL:
        raise DimensionMismatchError(f"{lhs} has dimension {dl:g} but {rhs} has dimension {dr:g}")
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    for _ in range(trials):
        g = sampler.sample(rng)
        worst = max(worst, abs(char_eval(lhs, g) - char_eval(rhs, g)))
    logger.debug("%s vs %s on %s: residual %.2e over %d samples", lhs, rhs, sampler.label, worst, trials)
    return worst


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: RepExpr
    rhs: RepExpr
    sampler: GroupSampler


def decomposition_identities() -> List[Identity]:
    """The character identities behind the isotropy computations of the classical rows."""
    ids: List[Identity] = []
    so, u, sp = StdSO(), StdU(), StdSp()
    for n in range(3, 7):
        g = GroupSampler.of(SO=n)
        ids.append(Identity(f"Ad SO({n}) = L2 lambda", Adjoint("so", "SO"), Wedge2(so), g))
        ids.append(Identity(f"L2 lambda_{n + 1} | SO({n}) = L2 lambda + lambda",
                            Restrict(Wedge2(so), BlockEmbedding("SO")), Wedge2(so) + so, g))
        ids.append(Identity(f"L2(lambda + 1) = L2 lambda + lambda on SO({n})", Wedge2(so + Trivial()), Wedge2(so) + so, g))
    for n in range(2, 5):
        g = GroupSampler.of(U=n)
        mixed = Tensor((u, ConjStdU())) + ConjStdU() + u + Trivial()
        ids.append(Identity(f"Ad U({n}) x C = mu x mubar", Adjoint("u", "U"), Tensor((u, ConjStdU())), g))
        ids.append(Identity(f"mu x mubar | U({n}) chain", Restrict(Tensor((u, ConjStdU())), BlockEmbedding("U")), mixed, g))
        ids.append(Identity(f"(mu + 1) x (mubar + 1) on U({n})", Tensor((u + Trivial(), ConjStdU() + Trivial())), mixed, g))
        ids.append(Identity(f"dual mu = mubar on U({n})", Dual(u), ConjStdU(), g))
        ids.append(Identity(f"L2 + S2 = tensor square on U({n})", Wedge2(u) + Sym2(u), u * u, g))
    for n in range(1, 4):
        g = GroupSampler.of(Sp=n)
        ids.append(Identity(f"Ad Sp({n}) x C = S2 nu", Adjoint("sp", "Sp"), Sym2(sp), g))
        ids.append(Identity(f"S2 nu_{n + 1} | Sp({n}) = S2 nu + 2 nu + 3",
                            Restrict(Sym2(sp), BlockEmbedding("Sp")),
                            Sym2(sp) + sp + sp + Trivial() + Trivial() + Trivial(), g))
    circle = GroupSampler.of(U1=1)
    nu1 = StdSp("Sp1")
    ids.append(Identity("nu_1 | U(1) = rho_1 + rho_-1", Restrict(nu1, IotaEmbedding()), Weight(1) + Weight(-1), circle))
    ids.append(Identity("Ad Sp(1) | U(1) x C = rho_2 + rho_0 + rho_-2", Restrict(Adjoint("sp", "Sp1"), IotaEmbedding()),
                        Weight(2) + Weight(0) + Weight(-2), circle))
    for n in range(1, 4):
        g = GroupSampler.of(Sp=n, Sp1=1)
        ad1 = Adjoint("sp", "Sp1")
        ids.append(Identity(f"Ad G | H = Ad H + sigma for Sp({n + 1})Sp(1)",
                            Restrict(Sym2(sp), BlockEmbedding("Sp", head="Sp1")) + ad1,
                            Sym2(sp) + ad1 + External(sp, nu1) + ad1, g))
        h = GroupSampler.of(Sp=n, U1=1)
        forms = spu1_isotropy_forms()
        ids.append(Identity(f"Sp({n})U(1) isotropy normal forms agree", forms[0][1], forms[1][1], h))
    su3 = GroupSampler.of(SU=3)
    ids.append(Identity("zeta | SU(3) = mu_3^R + 1", Restrict(Zeta(), G2Embedding()), Realify(StdU("SU")) + Trivial(), su3))
    spin7 = GroupSampler.of(Spin7=7)
    lam7 = Restrict(StdSO(), CoveringMap())
    ids.append(Identity("L2 Delta_7 = L2 lambda_7 + lambda_7", Wedge2(Delta7()), Wedge2(lam7) + lam7, spin7))
    return ids


def spu1_isotropy_forms() -> List[Tuple[str, RepExpr]]:
    """Both normal forms of the Sp(n)U(1) isotropy representation."""
    iota = IotaEmbedding()
    first = RealForm(External(StdSp(), Restrict(StdSp("Sp1"), iota))) + Restrict(Adjoint("sp", "Sp1"), iota)
    second = RealForm(External(StdSp(), Weight(1) + Weight(-1))) + Realify(Weight(2)) + Trivial()
    return [("nu~_n^R + Ad Sp(1)|U(1)", first), ("nu_n [x] (rho_1 + rho_-1) + rho_2^R + 1", second)]


def claimed_isotropy(spec: ActionSpec) -> List[Tuple[str, RepExpr]]:
    """The known isotropy representation of each row, as (label, expression) pairs."""
    fam = spec.family
    if fam == Family.SO:
        return [("lambda_n", StdSO())]
    if fam in (Family.U, Family.SU):
        return [("mu_n^R + 1", Realify(StdU(fam.value)) + Trivial())]
    if fam == Family.Sp:
        return [("nu_n^R + 3", Realify(StdSp()) + Trivial() + Trivial() + Trivial())]
    if fam == Family.SpSp1:
        return [("nu~_n^R + Ad Sp(1)", RealForm(External(StdSp(), StdSp("Sp1"))) + Adjoint("sp", "Sp1"))]
    if fam == Family.SpU1:
        return spu1_isotropy_forms()
    if fam == Family.G2:
        return [("mu_3^R", Realify(StdU("SU")))]
    if fam == Family.Spin7:
        return [("zeta", Zeta())]
    return [("lambda_7 + Delta_7", Restrict(StdSO(), CoveringMap()) + Delta7())]


def claimed_isotropy_label(spec: ActionSpec) -> str:
    return " ~ ".join(label for label, _ in claimed_isotropy(spec))


def _isotropy_sample(spec: ActionSpec, rng: np.random.Generator) -> Tuple[SampledElement, float]:
    """A stabilizer element and the trace of its isotropy action."""
    fam = spec.family
    if fam == Family.G2:
        a = random_group_element("SU", 3, rng)
        return SampledElement("SU(3)", {"SU": a}), float(np.trace(g2_isotropy_matrix(a)))
    if fam == Family.Spin7:
        # Spin(7) acts on S^7 through the octonion module; the sample fixes 1.
        a, s = spin7_stabilizer_sample(rng)
        rho = spin7_module_matrix(s)
        return SampledElement("G2", {"G2": su3_extend_to_g2(a)}), float(np.trace(rho[1:, 1:]))
    if fam == Family.Spin9:
        g, s = spin9_isotropy_sample(rng)
        return SampledElement("Spin(7)", {"Spin7": s}), float(np.trace(g[1:, 1:]))
    h = sample_stabilizer(spec, rng)
    return SampledElement(spec.stabilizer_name, h), float(np.trace(stabilizer_matrix(spec, h)[1:, 1:]))


@dataclass(frozen=True)
class IsotropyCheck:
    label: str
    residuals: Dict[str, float]
    tol: float = ISOTROPY_TOL

    @property
    def residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.residual < self.tol


def table1_isotropy_check(spec: ActionSpec, trials: int = ISOTROPY_TRIALS,
                          rng: Optional[np.random.Generator] = None) -> IsotropyCheck:
    """Compare trace sigma(h) with the character of the known isotropy representation."""
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    forms = claimed_isotropy(spec)
    residuals = {label: 0.0 for label, _ in forms}
    for _ in range(trials):
        h, trace = _isotropy_sample(spec, rng)
        for label, expr in forms:
            residuals[label] = max(residuals[label], abs(char_eval(expr, h) - trace))
    check = IsotropyCheck(claimed_isotropy_label(spec), residuals)
    logger.info("%s isotropy %s: residual %.2e", spec.label, check.label, check.residual)
    return check
