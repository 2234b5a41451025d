import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy import linalg
from scipy.stats import special_ortho_group

import lifting
from clifford_spin import spin_left_multiply
from lifting import (
    ClassificationRecord,
    classify,
    endpoint_parity,
    expected_verdict,
    involution_lift_order,
    lift_path,
    loop_parity,
    winding_parity_oracle,
)
from run_config import FAMILY_ORDER, RunConfig
from sphere_actions import (
    ActionSpec,
    Family,
    RotationPath,
    conjugate_path,
    isotropy_path_differential,
    repeat_path,
    stabilizer_loop,
)
from spin_errors import AmbiguousMatchingError, MethodDisagreementError, ParityUndecidedError
from spin_invariance_report import table_rows

FAST = RunConfig(steps=128)


def turning_path(dim, turns, steps=128, stop=1.0):
    """Rotation of the planes (0, 1), (2, 3), ... by 2 pi turns[k] t for t in [0, stop]."""
    samples = []
    for t in np.linspace(0.0, stop, steps + 1):
        a = np.eye(dim)
        for k, w in enumerate(turns):
            c, s = np.cos(2 * np.pi * w * t), np.sin(2 * np.pi * w * t)
            i, j = 2 * k, 2 * k + 1
            a[i, i], a[j, j], a[i, j], a[j, i] = c, c, -s, s
        samples.append(a)
    return RotationPath(np.array(samples))


@pytest.mark.parametrize("dim, turns, parity", [
    (2, [1], 1), (3, [1], 1), (2, [2], 0), (4, [1, 1], 0), (5, [1, -1], 0), (6, [1, 2], 1), (6, [1, 1, 1], 1),
])
def test_parity_of_turning_loops(dim, turns, parity):
    path = turning_path(dim, turns)
    assert loop_parity(path) == parity
    assert winding_parity_oracle(path) == parity


def test_lift_tracks_the_path():
    path = turning_path(4, [1, 2])
    lifted = lift_path(path)
    assert len(lifted.samples) == path.steps + 1
    assert lifted.max_residual < 1e-6
    assert lifted.samples[0].distance_to_scalar(1.0) == 0.0


def test_lift_steps_through_spin_left_multiply(monkeypatch):
    calls = []

    def counting(planes, s):
        calls.append(s.dim)
        return spin_left_multiply(planes, s)

    monkeypatch.setattr(lifting, "spin_left_multiply", counting)
    path = turning_path(3, [1])
    lifted = lift_path(path)
    assert calls == [3] * path.steps
    assert endpoint_parity(lifted) == 1
    assert lifted.endpoint.distance_to_scalar(-1.0) < 1e-6


def test_loop_traversed_twice_is_trivial():
    assert loop_parity(repeat_path(turning_path(3, [1]), 2)) == 0


def test_open_paths_have_no_parity():
    half = turning_path(3, [1], stop=0.5)
    with pytest.raises(ValueError):
        loop_parity(half)
    with pytest.raises(ValueError):
        winding_parity_oracle(half)
    with pytest.raises(ParityUndecidedError):
        endpoint_parity(lift_path(turning_path(3, [1], stop=0.25)))


def test_oracle_rejects_coarse_sampling():
    with pytest.raises(AmbiguousMatchingError):
        winding_parity_oracle(turning_path(2, [5], steps=32))


@seed(41)
@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_parity_is_basis_independent(state):
    rng = np.random.default_rng(state)
    p = linalg.qr(rng.normal(size=(5, 5)))[0]
    for turns, parity in (([1], 1), ([1, 1], 0)):
        assert loop_parity(conjugate_path(turning_path(5, turns), p)) == parity


ALL_ROWS = table_rows(list(Family))


def _known_parity(family, n):
    return 0 if expected_verdict(family, n) == "Yes" else 1


@pytest.mark.slow
@pytest.mark.parametrize("family, n", ALL_ROWS)
def test_classification_paths_are_basis_independent(family, n):
    spec = ActionSpec(family, n)
    path = isotropy_path_differential(spec, stabilizer_loop(spec))
    parity = loop_parity(path)
    assert parity == _known_parity(family, n)
    rng = np.random.default_rng([FAMILY_ORDER.index(spec.family.value), n])
    for q in special_ortho_group.rvs(path.dim, size=20, random_state=rng):
        assert loop_parity(conjugate_path(path, q)) == parity


@pytest.mark.slow
@pytest.mark.parametrize("family, n", ALL_ROWS)
def test_parity_is_independent_of_sampling(family, n):
    spec = ActionSpec(family, n)
    parities = {
        loop_parity(isotropy_path_differential(spec, stabilizer_loop(spec, steps)))
        for steps in (128, 256, 512)
    }
    assert parities == {_known_parity(family, n)}


def test_involution_lift_order():
    loop = turning_path(3, [1])
    assert involution_lift_order(loop) == 4
    assert involution_lift_order(repeat_path(loop, 2)) == 2
    with pytest.raises(ValueError):
        involution_lift_order(turning_path(3, [1], steps=127))


@pytest.mark.parametrize("family, n, verdict", [
    (Family.SO, 5, "No"), (Family.U, 2, "No"), (Family.SU, 4, "Yes"), (Family.Sp, 2, "Yes"),
    (Family.SpU1, 1, "Yes"), (Family.SpU1, 2, "No"), (Family.SpSp1, 3, "Yes"), (Family.SpSp1, 2, "No"),
    (Family.G2, 0, "Yes"), (Family.Spin7, 0, "Yes"), (Family.Spin9, 0, "Yes"),
])
def test_expected_verdict(family, n, verdict):
    assert expected_verdict(family, n) == verdict


@pytest.mark.parametrize("family", [Family.SpU1, Family.SpSp1])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_quotient_family_parity_follows_n(family, n):
    record = classify(ActionSpec(family, n), FAST)
    assert record.parity_differential == record.parity_adjoint == record.parity_oracle == (n + 1) % 2
    assert record.match
    assert record.involution_order == (4 if record.parity_differential else 2)


@pytest.mark.parametrize("family, n", [(Family.SO, 2), (Family.SO, 3), (Family.U, 1), (Family.U, 2),
                                       (Family.SU, 2), (Family.Sp, 1), (Family.G2, 0), (Family.Spin7, 0)])
def test_classify_matches_known_verdicts(family, n):
    record = classify(ActionSpec(family, n), FAST)
    assert record.verdict == expected_verdict(family, n)
    assert len({record.parity_differential, record.parity_adjoint, record.parity_oracle}) == 1
    assert not record.oracle_fallback


def test_record_serialization():
    record = classify(ActionSpec(Family.SO, 3), FAST)
    data = record.to_dict()
    assert list(data) == ["family", "n", "sphere_dim", "stabilizer", "parity", "verdict", "expected", "match"]
    assert data["parity"] == {"differential": 1, "adjoint": 1, "oracle": 1}
    assert ClassificationRecord.from_dict(data, record.meta()) == record
    row = record.to_row()
    assert row["parity_oracle"] == 1
    assert list(row)[-1] == "match"


def test_disagreeing_methods_fail_hard(monkeypatch):
    monkeypatch.setattr(lifting, "winding_parity_oracle", lambda path: 0)
    with pytest.raises(MethodDisagreementError) as excinfo:
        classify(ActionSpec(Family.SO, 2), FAST)
    assert excinfo.value.diagnostics["parities"] == {"differential": 1, "adjoint": 1, "oracle": 0}


def test_ambiguous_oracle_falls_back(monkeypatch):
    def ambiguous(path):
        raise AmbiguousMatchingError("test")

    monkeypatch.setattr(lifting, "winding_parity_oracle", ambiguous)
    record = classify(ActionSpec(Family.U, 1), FAST)
    assert record.oracle_fallback
    assert record.parity_oracle == record.parity_differential == 1
