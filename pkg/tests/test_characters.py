import numpy as np
import pytest

import characters
from characters import (
    Adjoint,
    BlockEmbedding,
    ConjStdU,
    External,
    GroupSampler,
    Realify,
    Restrict,
    SampledElement,
    StdSO,
    StdSp,
    StdU,
    Sym2,
    Trivial,
    Weight,
    Wedge2,
    char_eval,
    claimed_isotropy,
    claimed_isotropy_label,
    decomposition_identities,
    dimension,
    table1_isotropy_check,
    verify_decomposition,
)
from sphere_actions import ActionSpec, Family
from spin_errors import DimensionMismatchError, IncompatibleRepresentationError, NotUnitError
from verify_suites import ISOTROPY_ROWS

IDENTITIES = decomposition_identities()


@pytest.mark.parametrize("identity", IDENTITIES, ids=[i.name for i in IDENTITIES])
def test_decomposition_identities(identity):
    rng = np.random.default_rng(7)
    assert verify_decomposition(identity.lhs, identity.rhs, identity.sampler, trials=25, rng=rng) < 1e-8


@pytest.mark.parametrize("expr, sampler, dim", [
    (Wedge2(StdSO()), GroupSampler.of(SO=5), 10),
    (Sym2(StdSp()), GroupSampler.of(Sp=2), 10),
    (Realify(StdU()), GroupSampler.of(U=3), 6),
    (StdU() * ConjStdU(), GroupSampler.of(U=3), 9),
    (Adjoint("su", "SU"), GroupSampler.of(SU=3), 8),
    (External(StdSp(), StdSp("Sp1")), GroupSampler.of(Sp=2, Sp1=1), 8),
])
def test_dimensions(expr, sampler, dim):
    assert dimension(expr, sampler) == pytest.approx(dim)


def test_weights_are_powers():
    z = np.exp(0.3j)
    g = SampledElement("U(1)", {"U1": z})
    assert char_eval(Weight(2), g) == pytest.approx(z ** 2)
    assert char_eval(Realify(Weight(1)), g) == pytest.approx(2 * np.cos(0.3))


def test_restriction_of_the_standard_representation():
    sampler = GroupSampler.of(SO=4)
    residual = verify_decomposition(Restrict(StdSO(), BlockEmbedding("SO")), StdSO() + Trivial(), sampler, trials=10)
    assert residual < 1e-12


def test_dimension_mismatch_is_reported():
    with pytest.raises(DimensionMismatchError):
        verify_decomposition(StdSO(), Wedge2(StdSO()), GroupSampler.of(SO=4), trials=1)


def test_incompatible_expressions():
    with pytest.raises(IncompatibleRepresentationError):
        External(StdSp(), StdSp())
    with pytest.raises(IncompatibleRepresentationError):
        char_eval(StdU(), GroupSampler.of(SO=3).identity())


def test_samples_must_lie_on_their_group():
    with pytest.raises(NotUnitError):
        SampledElement("SO(3)", {"SO": 2.0 * np.eye(3)})


def test_squares_are_taken_factorwise():
    g = GroupSampler.of(SO=3, U1=1).sample(np.random.default_rng(8))
    square = g.square()
    assert np.allclose(square.factor("SO"), g.factor("SO") @ g.factor("SO"))
    assert square.factor("U1") == pytest.approx(g.factor("U1") ** 2)


@pytest.mark.parametrize("family, n", ISOTROPY_ROWS)
def test_isotropy_column(family, n):
    spec = ActionSpec(family, n)
    check = table1_isotropy_check(spec, trials=10, rng=np.random.default_rng(9))
    assert check.passed, check.residuals


def test_spin7_isotropy_trace_comes_from_the_octonion_module(monkeypatch):
    spec = ActionSpec(Family.Spin7, 0)
    monkeypatch.setattr(characters, "spin7_module_matrix", lambda s: np.diag([1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]))
    check = table1_isotropy_check(spec, trials=3, rng=np.random.default_rng(9))
    assert not check.passed


def test_quotient_row_has_both_normal_forms():
    spec = ActionSpec(Family.SpU1, 2)
    assert len(claimed_isotropy(spec)) == 2
    assert " ~ " in claimed_isotropy_label(spec)
    assert claimed_isotropy_label(ActionSpec(Family.SO, 4)) == "lambda_n"
