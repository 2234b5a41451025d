# -*- coding: utf-8 -*-
"""
Lift rotation paths through Spin(m) -> SO(m), read off the Z_2 class of a
loop, and classify each sphere action against the known answer.

The lift is advanced one relative step at a time:
  s_{k+1} = exp(beta_k) s_k,   lambda(exp(beta_k)) = A_{k+1} A_k^T
and the loop class is the sign of the endpoint s_K = +1 or -1.

Usage:
  record = classify(ActionSpec(Family.SpU1, 2))
  record.verdict            # "No"
  loop_parity(isotropy_path_differential(spec, stabilizer_loop(spec)))
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from clifford_spin import (
    SpinElement,
    bivector_exp_factors,
    bivector_from_so,
    lambda_dense,
    so_log_small,
    spin_left_multiply,
)
from lie_adjoint import adjoint_isotropy_path, lie_basis
from run_config import DEFAULT_TOL, POLE_TOL, TRACK_TOL, RunConfig
from sphere_actions import (
    EXCEPTIONAL_FAMILIES,
    ActionSpec,
    Family,
    RotationPath,
    identity_path,
    isotropy_path_differential,
    parse_family,
    stabilizer_loop,
)
from spin_errors import (
    AmbiguousMatchingError,
    MethodDisagreementError,
    ParityUndecidedError,
    TrackingError,
)

logger = logging.getLogger(__name__)

# Largest eigenphase move allowed between consecutive samples.
MAX_PHASE_STEP = np.pi / 4
WINDING_TOL = 0.1


@dataclass(frozen=True, eq=False)
class SpinPath:
    """Lift of a RotationPath: samples[k] covers source.samples[k], samples[0] = 1."""

    samples: Tuple[SpinElement, ...]
    source: RotationPath
    max_residual: float = 0.0

    @property
    def endpoint(self) -> SpinElement:
        return self.samples[-1]


def lift_path(path: RotationPath, validate_tol: float = DEFAULT_TOL, track_tol: float = TRACK_TOL) -> SpinPath:
    """Lift a path in SO(m) starting at Id to the path in Spin(m) starting at 1."""
    path.validate(validate_tol)
    dim = path.dim
    a = path.samples
    s = SpinElement.identity(dim)
    samples = [s]
    worst = 0.0
    for k in range(path.steps):
        omega = so_log_small(a[k + 1] @ a[k].T)
        s = spin_left_multiply(bivector_exp_factors(bivector_from_so(omega)), s)
        residual = float(np.abs(lambda_dense(s.mv.to_dense(), dim) - a[k + 1]).max())
        worst = max(worst, residual)
        if residual > track_tol:
            raise TrackingError(
                f"lift drifted from the rotation path at step {k + 1}/{path.steps}: residual {residual:.3e}",
                max_residual=worst,
            )
        samples.append(s)
    logger.debug("lifted %d-step path in SO(%d), max tracking residual %.2e", path.steps, dim, worst)
    return SpinPath(tuple(samples), path, worst)


def endpoint_parity(lifted: SpinPath) -> int:
    """0 when the lift closes at +1, 1 when it ends at -1."""
    end = lifted.endpoint
    plus, minus = end.distance_to_scalar(1.0), end.distance_to_scalar(-1.0)
    if plus <= POLE_TOL:
        return 0
    if minus <= POLE_TOL:
        return 1
    raise ParityUndecidedError(
        f"lift endpoint is {plus:.3e} from +1 and {minus:.3e} from -1; path is not a closed loop or tracking failed"
    )


def loop_parity(path: RotationPath) -> int:
    """Class of a loop in pi_1(SO(m)) = Z_2, from the sign of its lifted endpoint."""
    if not path.is_loop():
        raise ValueError("loop_parity needs a closed path: the last sample differs from the first")
    return endpoint_parity(lift_path(path))


def _wrap(x: np.ndarray) -> np.ndarray:
    return (x + np.pi) % (2 * np.pi) - np.pi


def winding_parity_oracle(path: RotationPath) -> int:
    """Loop class from eigenphase winding numbers, independent of the Clifford algebra.

    Eigenvalues are followed sample to sample by optimal assignment against a
    linearly predicted phase; each rotating pair contributes its winding number.
    """
    if not path.is_loop():
        raise ValueError("winding oracle needs a closed path")
    samples = path.samples
    phases = np.angle(np.linalg.eigvals(samples[0]))
    start = phases.copy()
    velocity = np.zeros_like(phases)
    for k in range(1, samples.shape[0]):
        angles = np.angle(np.linalg.eigvals(samples[k]))
        predicted = phases + velocity
        cost = np.abs(_wrap(angles[None, :] - predicted[:, None]))
        rows, cols = linear_sum_assignment(cost)
        moved = predicted[rows] + _wrap(angles[cols] - predicted[rows])
        step = np.abs(moved - phases[rows])
        if step.max(initial=0.0) >= MAX_PHASE_STEP:
            raise AmbiguousMatchingError(
                f"eigenphase moved {step.max():.3f} rad between samples {k - 1} and {k} (limit {MAX_PHASE_STEP:.3f})"
            )
        new = np.empty_like(phases)
        new[rows] = moved
        velocity = new - phases
        phases = new
    windings = (phases - start) / (2 * np.pi)
    nearest = np.rint(windings)
    if np.abs(windings - nearest).max(initial=0.0) > WINDING_TOL:
        raise AmbiguousMatchingError(f"eigenphase windings are not integral: {np.round(windings, 3).tolist()}")
    total = int(np.abs(nearest).sum())
    if total % 2:
        raise AmbiguousMatchingError(f"eigenphase windings do not pair up into conjugate pairs: {nearest.tolist()}")
    logger.debug("eigenphase windings %s", nearest.astype(int).tolist())
    return (total // 2) % 2


def involution_lift_order(path: RotationPath, lifted: Optional[SpinPath] = None) -> int:
    """Order of the lift of the half-loop element of a one-parameter loop.

    For a loop t -> exp(t X) the lift satisfies s(1/2)^2 = s(1), so the
    result is 4 exactly when the loop has parity 1.
    """
    if path.steps % 2:
        raise ValueError(f"half-loop sample needs an even step count, got {path.steps}")
    lifted = lifted or lift_path(path)
    half = lifted.samples[path.steps // 2]
    if half.distance_to_scalar(1.0) <= POLE_TOL:
        return 1
    square = half * half
    if square.distance_to_scalar(1.0) <= POLE_TOL:
        return 2
    if square.distance_to_scalar(-1.0) <= POLE_TOL:
        return 4
    raise ParityUndecidedError("square of the half-loop lift is near neither +1 nor -1")


def expected_verdict(family, n: int) -> str:
    """The known answer: invariant iff the group is simply connected, or n is odd for the quotient families."""
    fam = parse_family(family)
    if fam in (Family.SO, Family.U):
        return "No"
    if fam in (Family.SpU1, Family.SpSp1):
        return "Yes" if n % 2 else "No"
    return "Yes"


@dataclass(frozen=True)
class ClassificationRecord:
    family: str
    n: int
    sphere_dim: int
    group: str
    stabilizer: str
    parity_differential: int
    parity_adjoint: int
    parity_oracle: int
    verdict: str
    expected: str
    max_residual: float = 0.0
    oracle_fallback: bool = False
    involution_order: int = 1
    wall_time: float = field(default=0.0, compare=False)

    @property
    def match(self) -> bool:
        return self.verdict == self.expected

    @property
    def spec(self) -> ActionSpec:
        return ActionSpec(Family(self.family), self.n)

    def to_dict(self) -> Dict[str, Any]:
        """Flat JSON record; wall time lives in the report meta."""
        return {
            "family": self.family,
            "n": self.n,
            "sphere_dim": self.sphere_dim,
            "stabilizer": self.stabilizer,
            "parity": {
                "differential": self.parity_differential,
                "adjoint": self.parity_adjoint,
                "oracle": self.parity_oracle,
            },
            "verdict": self.verdict,
            "expected": self.expected,
            "match": self.match,
        }

    def to_row(self) -> Dict[str, Any]:
        """to_dict with the parity block flattened, for CSV and spreadsheets."""
        row = self.to_dict()
        parity = row.pop("parity")
        for key, value in parity.items():
            row[f"parity_{key}"] = value
        match = row.pop("match")
        row["match"] = match
        return row

    @classmethod
    def from_dict(cls, data: Dict[str, Any], extras: Optional[Dict[str, Any]] = None) -> "ClassificationRecord":
        """Inverse of to_dict; `extras` carries the meta fields (max_residual, wall_time, ...)."""
        spec = ActionSpec(Family(data["family"]), int(data["n"]))
        extras = extras or {}
        record = cls(
            family=spec.family.value,
            n=spec.n,
            sphere_dim=int(data["sphere_dim"]),
            group=spec.group_name,
            stabilizer=data["stabilizer"],
            parity_differential=int(data["parity"]["differential"]),
            parity_adjoint=int(data["parity"]["adjoint"]),
            parity_oracle=int(data["parity"]["oracle"]),
            verdict=data["verdict"],
            expected=data["expected"],
            max_residual=float(extras.get("max_residual", 0.0)),
            oracle_fallback=bool(extras.get("oracle_fallback", False)),
            involution_order=int(extras.get("involution_order", 1)),
            wall_time=float(extras.get("wall_time", 0.0)),
        )
        if "match" in data and bool(data["match"]) != record.match:
            raise ValueError(f"{spec.label}: stored match={data['match']} contradicts verdict/expected")
        return record

    def meta(self) -> Dict[str, Any]:
        """Per-record fields kept out of the flat schema."""
        return {
            "max_residual": self.max_residual,
            "oracle_fallback": self.oracle_fallback,
            "involution_order": self.involution_order,
            "wall_time": self.wall_time,
        }


def _adjoint_path(spec: ActionSpec, loop) -> RotationPath:
    if spec.family in EXCEPTIONAL_FAMILIES:
        # Constant loop: Ad of the identity is the identity on m.
        return identity_path(spec.sphere_dim, loop.steps)
    return adjoint_isotropy_path(spec, loop, lie_basis(spec))


def classify(spec: ActionSpec, config: Optional[RunConfig] = None) -> ClassificationRecord:
    """Decide G-invariance of the spin structure on the sphere of an action.

    Runs the differential and adjoint isotropy paths through lift_path, checks
    them against the winding oracle, and compares with expected_verdict.
    """
    config = config or RunConfig()
    started = time.perf_counter()
    logger.info("classifying %s on S^%d (stabilizer %s)", spec.group_name, spec.sphere_dim, spec.stabilizer_name)
    loop = stabilizer_loop(spec, config.steps)
    differential = isotropy_path_differential(spec, loop)
    adjoint = _adjoint_path(spec, loop)

    lifted = lift_path(differential, validate_tol=config.tol)
    parity_differential = endpoint_parity(lifted)
    lifted_adjoint = lift_path(adjoint, validate_tol=config.tol)
    parity_adjoint = endpoint_parity(lifted_adjoint)

    fallback = False
    try:
        parity_oracle = winding_parity_oracle(differential)
    except AmbiguousMatchingError as e:
        logger.warning("%s: winding oracle inconclusive (%s); using the lift parity", spec.label, e)
        parity_oracle = parity_differential
        fallback = True

    parities = {"differential": parity_differential, "adjoint": parity_adjoint, "oracle": parity_oracle}
    if len(set(parities.values())) > 1:
        raise MethodDisagreementError(
            f"{spec.group_name} on S^{spec.sphere_dim}: parities disagree {parities}",
            diagnostics={
                "spec": spec.label,
                "parities": parities,
                "tracking_residual": {"differential": lifted.max_residual, "adjoint": lifted_adjoint.max_residual},
                "oracle_fallback": fallback,
                "steps": config.steps,
            },
        )

    order = 1 if loop.trivial_pi1 else involution_lift_order(differential, lifted)
    verdict = "Yes" if parity_differential == 0 else "No"
    record = ClassificationRecord(
        family=spec.family.value,
        n=spec.n,
        sphere_dim=spec.sphere_dim,
        group=spec.group_name,
        stabilizer=spec.stabilizer_name,
        parity_differential=parity_differential,
        parity_adjoint=parity_adjoint,
        parity_oracle=parity_oracle,
        verdict=verdict,
        expected=expected_verdict(spec.family, spec.n),
        max_residual=max(lifted.max_residual, lifted_adjoint.max_residual),
        oracle_fallback=fallback,
        involution_order=order,
        wall_time=time.perf_counter() - started,
    )
    if not record.match:
        logger.warning("%s: verdict %s differs from expected %s", spec.label, record.verdict, record.expected)
    logger.info("%s: parity %d, verdict %s (%.2fs)", spec.label, parity_differential, verdict, record.wall_time)
    return record
