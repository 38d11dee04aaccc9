"""Tests for Tanaka-Weisfeiler prolongation."""

from fractions import Fraction

import pytest

from superprolong.exceptions import NotFundamentalError, ProlongationError, WitnessError
from superprolong.liesuper import sl2
from superprolong.prolong import (
    AccumulatedAlgebra,
    der0,
    independence_check,
    is_effective,
    level_defects,
    mirrors_grading,
    prolong,
    prolong_spec,
    solve_level,
    verify_witness,
    witness_search,
)
from superprolong.roots import ParabolicSpec
from superprolong.scalars import RationalField

FINITE_CASES = [
    pytest.param("p123IV", "m", None, {1: (0, 3), 2: (3, 0), 3: (0, 1)}, 4, id="p123IV-m"),
    pytest.param("p2I", "m-g0", None, {1: (2, 2)}, 2, id="p2I-m-g0"),
    pytest.param("p23I", "m-g0", None, {1: (2, 2), 2: (1, 1)}, 3, id="p23I-m-g0"),
    pytest.param("p1I", "gk", 1, {2: (1, 0)}, 3, id="p1I-gk1"),
    pytest.param("p12I", "gk", 1, {2: (0, 2), 3: (1, 0)}, 4, id="p12I-gk1"),
    pytest.param("p123I", "gk", 1, {2: (0, 2), 3: (0, 1), 4: (1, 0)}, 5, id="p123I-gk1"),
]


@pytest.mark.unit
def test_der0_of_abelian_m(graded):
    """m of p2I is abelian of sdim (2|2), so its grade-preserving derivations are gl(2|2)."""
    assert der0(graded("p2I")).sdim == (8, 8)


@pytest.mark.unit
def test_der0_of_contact_m(graded):
    """For p1I, der_0(m) is g_0 = co(4)."""
    assert der0(graded("p1I")).sdim == (7, 0)


@pytest.mark.gold_standard
@pytest.mark.slow
@pytest.mark.parametrize(("label", "mode", "k", "levels", "terminated_at"), FINITE_CASES)
def test_finite_prolongations(workbench, label, mode, k, levels, terminated_at):
    spec = ParabolicSpec.parse(label)
    report = workbench.prolongation(spec, mode=mode, k=k)
    assert {j: report.sdim_of(j) for j in levels} == levels
    assert report.terminated_at == terminated_at
    assert report.finite
    assert all(report.checks.values())
    assert mirrors_grading(report, workbench.graded(spec))
    assert not report.locus.outside(workbench.field.default_locus())


@pytest.mark.gold_standard
@pytest.mark.slow
def test_contact_prolongation_grows(workbench):
    """pr(m, g_0) of p1I exceeds Gamma: level 1 is (0|8) and level 2 is (8|0)."""
    spec = ParabolicSpec.parse("p1I")
    report = workbench.prolongation(spec, mode="m-g0", cutoff=2)
    assert report.sdim_of(1) == (0, 8)
    assert report.sdim_of(2) == (8, 0)
    assert not report.finite
    assert not mirrors_grading(report, workbench.graded(spec))
    with pytest.raises(ProlongationError):
        report.sdim_of(3)


@pytest.mark.unit
def test_report_as_dict(workbench):
    report = workbench.prolongation(ParabolicSpec.parse("p2I"), mode="m-g0")
    data = report.as_dict()
    assert data["name"] == "p2I"
    assert data["m"] == [2, 2]
    assert data["levels"][0] == {"j": 0, "sdim": [5, 4], "seeded": True}
    assert data["terminated_at"] == 2
    assert report.computed() == [(1, (2, 2)), (2, (0, 0))]


@pytest.mark.unit
def test_levels_satisfy_derivation_identity(graded):
    acc = AccumulatedAlgebra(graded("p23I"))
    acc.seed(0)
    level = solve_level(acc, 1)
    assert level.sdim == (2, 2)
    assert level_defects(acc, level) == []
    assert is_effective(acc, level)


class TestProlongationErrors:
    """Invalid requests."""

    def test_unknown_mode(self, graded):
        with pytest.raises(ProlongationError):
            prolong(graded("p2I"), mode="full")

    def test_gk_needs_k(self, graded):
        with pytest.raises(ProlongationError):
            prolong(graded("p2I"), mode="gk")

    def test_ungraded(self, gamma):
        with pytest.raises(ProlongationError):
            AccumulatedAlgebra(gamma)

    def test_not_fundamental(self, field):
        """g_-1 = 0 while g_-2 does not vanish."""
        alg = sl2(field).with_degrees([-2, 0, 2])
        with pytest.raises(NotFundamentalError):
            prolong(alg)
        with pytest.raises(NotFundamentalError):
            der0(alg)


class TestWitnesses:
    """Certificates of infinite type."""

    @pytest.mark.gold_standard
    @pytest.mark.parametrize(
        ("v", "names"),
        [("X2", ("X1", "X2", "X3", "xxy", "xxx")), ("X3", ("X1", "X2", "X3", "xyx", "xxx"))],
    )
    def test_p23_witnesses(self, graded, v, names):
        alg = graded("p23I", opposite=True)
        assert verify_witness(alg, alg.element(v), [alg.element(n) for n in names])

    def test_codimension_is_checked(self, graded):
        alg = graded("p23I", opposite=True)
        with pytest.raises(WitnessError):
            verify_witness(alg, alg.element("X2"), [alg.element("X1")])

    def test_v_must_have_degree_minus_one(self, graded):
        alg = graded("p23I", opposite=True)
        names = ("X1", "X2", "X3", "xxy", "xxx")
        with pytest.raises(WitnessError):
            verify_witness(alg, alg.element("X1"), [alg.element(n) for n in names])

    def test_search_finds_p23_witness(self, graded):
        result = witness_search(graded("p23I", opposite=True))
        assert result.found
        alg = graded("p23I", opposite=True)
        assert verify_witness(alg, result.v, result.subspace)

    def test_abelian_m(self, graded):
        assert witness_search(graded("p2I")).found

    @pytest.mark.parametrize("label", ["p12I", "p123I"])
    def test_no_witness(self, graded, label):
        assert not witness_search(graded(label)).found


@pytest.mark.slow
def test_prolongation_at_a_rational_point():
    field = RationalField({"a": Fraction(2)})
    report = prolong_spec(ParabolicSpec.parse("p123IV"), field=field)
    assert [sdim for _, sdim, _ in report.levels] == [(3, 0), (0, 3), (3, 0), (0, 1), (0, 0)]
    assert report.terminated_at == 4


@pytest.mark.slow
def test_independence_check(workbench):
    spec = ParabolicSpec.parse("p2I")
    report = workbench.prolongation(spec, mode="m-g0")
    points = [{"a": Fraction(2)}, {"a": Fraction(-3, 5)}]
    assert independence_check(spec, report, points)
