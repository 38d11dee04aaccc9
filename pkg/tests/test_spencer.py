"""Tests for Spencer cohomology of the negative parts."""

from fractions import Fraction

import pytest

from superprolong.liesuper import build_gamma
from superprolong.roots import ParabolicSpec, graded_algebra
from superprolong.scalars import RationalField, rank_with_locus
from superprolong.spencer import (
    CohomologyTable,
    SpencerComplex,
    ce_differential,
    cohomology,
    euler_identity,
    h1_prolongation_consistency,
    predicted_mode,
    sampled_cohomology,
    square_vanishes,
)

# weight -> sdim, for H^0, H^1 and H^2
SPENCER = {
    "p1I": {0: {-2: (1, 0)}, 1: {1: (0, 4)}, 2: {2: (9, 0)}},
    "p2I": {0: {-1: (2, 2)}, 1: {0: (3, 4)}, 2: {2: (4, 4)}},
    "p12I": {0: {-3: (1, 0)}, 1: {-2: (1, 0), 1: (0, 2)}, 2: {2: (3, 0), 3: (0, 2)}},
    "p23I": {0: {-2: (1, 1)}, 1: {-1: (2, 2), 0: (0, 1)}, 2: {0: (1, 1), 2: (2, 2)}},
    "p123I": {0: {-4: (1, 0)}, 1: {-3: (2, 0), 1: (0, 1)}, 2: {-2: (1, 0), 2: (1, 0), 3: (0, 2)}},
    "p123IV": {0: {-3: (0, 1)}, 1: {-1: (0, 3)}, 2: {0: (1, 0), 2: (3, 0)}},
}


@pytest.mark.gold_standard
@pytest.mark.slow
@pytest.mark.parametrize("label", sorted(SPENCER))
def test_cohomology_table(workbench, label):
    table = workbench.cohomology(ParabolicSpec.parse(label))
    for j, expected in SPENCER[label].items():
        assert table.weights(j) == expected
    assert all(table.checks.values())
    assert not table.locus.outside(workbench.field.default_locus())


@pytest.mark.unit
def test_differential_squares_to_zero(graded):
    complex_ = SpencerComplex(graded("p23I"))
    assert square_vanishes(complex_, 0)
    assert square_vanishes(complex_, 1)
    assert square_vanishes(complex_, 2)


@pytest.mark.unit
def test_degree_zero_differential(graded):
    """d vanishes on the center g_-2 of m and is injective on g_-1."""
    complex_ = SpencerComplex(graded("p23I"))
    matrix, sources, _ = ce_differential(complex_, 0, -2)
    assert len(sources) == 2
    assert rank_with_locus(matrix)[0] == 0
    matrix, sources, targets = ce_differential(complex_, 0, -1)
    assert len(sources) == 4
    assert matrix.shape == (4, len(targets))
    assert rank_with_locus(matrix)[0] == 4


@pytest.mark.unit
def test_render_and_as_dict():
    table = CohomologyTable("p12I", [(-3, 0, (1, 0)), (-2, 1, (1, 0)), (1, 1, (0, 2))])
    assert table.render(1) == "C^{1|0}_{-2} + C^{0|2}_{1}"
    assert table.render(2) == "0"
    assert table.as_dict()["entries"][0] == {"i": -3, "j": 0, "sdim": [1, 0]}


@pytest.mark.unit
@pytest.mark.parametrize(
    ("h1", "mode", "k"),
    [
        ([(-1, 1, (0, 3))], "m", None),
        ([(-1, 1, (2, 2)), (0, 1, (0, 1))], "m-g0", None),
        ([(-3, 1, (2, 0)), (1, 1, (0, 1))], "gk", 1),
    ],
)
def test_predicted_mode(h1, mode, k):
    assert predicted_mode(CohomologyTable("x", h1)) == (mode, k)


@pytest.mark.slow
@pytest.mark.parametrize("label", ["p2I", "p123IV"])
def test_h1_predicts_prolongation(workbench, label):
    spec = ParabolicSpec.parse(label)
    report = h1_prolongation_consistency(workbench.graded(spec), workbench.cohomology(spec))
    assert report.ok, report.findings
    assert report.as_dict()["predicted_mode"] == ("m-g0" if label == "p2I" else "m")


@pytest.mark.slow
def test_sampled_cohomology_matches_generic(workbench):
    spec = ParabolicSpec.parse("p2I")
    points = [{"a": Fraction(2)}, {"a": Fraction(5, 3)}]
    tables = sampled_cohomology(
        lambda point: graded_algebra(build_gamma(RationalField(point)), spec), points, j_max=1
    )
    generic = cohomology(workbench.graded(spec), j_max=1)
    for table in tables:
        assert table.entries == generic.entries


@pytest.mark.unit
def test_euler_identity():
    """One slice with C^0 -> C^1 -> C^2 and independent cocycle counts."""
    dims = {(0, 1, 0): 2, (1, 1, 0): 3}
    cocycles = {(0, 1, 0): 0, (1, 1, 0): 2}
    ranks = {(0, 1, 0): 2, (1, 1, 0): 1}
    assert euler_identity(dims, cocycles, ranks, 1)


@pytest.mark.unit
def test_euler_identity_detects_corrupted_rank():
    dims = {(0, 1, 0): 2, (1, 1, 0): 3}
    cocycles = {(0, 1, 0): 0, (1, 1, 0): 2}
    assert not euler_identity(dims, cocycles, {(0, 1, 0): 2, (1, 1, 0): 2}, 1)
    assert not euler_identity(dims, cocycles, {(0, 1, 0): 1, (1, 1, 0): 1}, 1)


def test_cohomology_checks_reach_next_degree(graded):
    """j_max = 1 still checks d^2 = 0 on C^1 and Euler through C^2."""
    table = cohomology(graded("p2I"), j_max=1)
    assert table.checks == {"d_squared_zero": True, "h0_is_bottom_level": True, "euler": True}
    assert table.weights(0) == SPENCER["p2I"][0]
    assert table.weights(1) == SPENCER["p2I"][1]
