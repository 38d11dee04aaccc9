"""Tests for the structure-group reductions of p2I and p23I."""

from fractions import Fraction

import pytest

from superprolong.exceptions import ReductionError, UsageError
from superprolong.liesuper import check_jacobi
from superprolong.reductions import (
    GL11_NAMES,
    MatrixRep,
    check_reductions,
    dual,
    embedding_matrix_check,
    expected_weights,
    gl11_algebra,
    gl11_decompose,
    kac_module,
    matrix_from,
    missing_arrows,
    orbit_tangent_check,
    projective,
    projective_cover,
    reduction_case,
    reduction_field,
    sl21_relations_check,
    subalgebra,
    tensor,
    tensor_rule,
    tensor_rule_check,
    typical,
)
from superprolong.scalars import RationalField


@pytest.fixture
def q():
    return RationalField()


@pytest.fixture(scope="module")
def cases():
    built = {}

    def get(label):
        if label not in built:
            built[label] = reduction_case(label)
        return built[label]

    return get


class TestGl11Modules:
    """Kac modules, projective covers and their tensor products."""

    def test_kac_module_is_a_representation(self, q):
        rep = kac_module(q, 2, 0)
        assert not rep.defects()
        assert gl11_decompose(rep) == [typical(q, 2, 0)]

    def test_projective_cover(self, q):
        rep = projective_cover(q, 0)
        assert not rep.defects()
        assert gl11_decompose(rep) == [projective(q, 0)]

    def test_dual_of_kac_module(self, q):
        rep = dual(kac_module(q, 2, 0))
        assert not rep.defects()
        assert gl11_decompose(rep) == [typical(q, -2, 1)]

    def test_tensor_rule(self, q):
        assert tensor_rule(q, 1, 0, 2, 0) == [typical(q, 3, -1), typical(q, 3, 0)]
        assert tensor_rule(q, 1, 0, -1, 1) == [projective(q, 0)]
        assert tensor_rule_check(q, 1, 0, 2, 0)
        assert tensor_rule_check(q, 1, 0, -1, 1)
        assert tensor_rule_check(q, Fraction(1, 2), 3, Fraction(-1, 2), -1)

    def test_tensor_is_a_representation(self, q):
        assert not tensor(kac_module(q, 1, 0), projective_cover(q, 2)).defects()

    def test_unrecognized_block(self, q):
        algebra = gl11_algebra(q)
        trivial = MatrixRep(algebra, (0,), {name: [[q.zero]] for name in GL11_NAMES})
        with pytest.raises(ReductionError):
            gl11_decompose(trivial)

    def test_describe(self, q):
        assert typical(q, Fraction(1, 2), 0).describe(q) == "<1/2, 0>"
        assert projective(q, -1).describe(q) == "P(-1)"

    def test_wrong_matrix_parity(self, q):
        matrices = {name: [[q.zero, q.zero], [q.zero, q.zero]] for name in GL11_NAMES}
        matrices["E"] = [[q.zero, q.one], [q.zero, q.zero]]
        with pytest.raises(ReductionError):
            MatrixRep(gl11_algebra(q), (0, 1), matrices)


class TestOrbits:
    """Grassmann exponentials and tangent filtrations."""

    def test_odd_line(self, q):
        shift = matrix_from(q, 2, {(2, 1): 1})
        filtration = orbit_tangent_check(q, (0, 1), [1, 0], [("theta", shift)], 1)
        theta = filtration.point.entries[1]
        assert theta.parity == 1
        assert filtration.point.parity_consistent()
        assert filtration.dims() == [1, 2]
        assert filtration.contains([q.zero, q.one], 1)
        assert not filtration.contains([q.zero, q.one], 0)

    def test_even_matrix_rejected(self, q):
        with pytest.raises(ReductionError):
            orbit_tangent_check(q, (0, 1), [1, 0], [("theta", matrix_from(q, 2, {(1, 1): 1}))], 1)


class TestSubalgebra:
    """Structure constants of bracket-closed spans."""

    def test_closed_span(self, gamma):
        sl2 = subalgebra(gamma, {n: gamma.vector({n: 1}) for n in ("X1", "H1", "Y1")})
        assert sl2.sdim == (3, 0)
        assert check_jacobi(sl2) == []

    def test_span_not_closed(self, gamma):
        with pytest.raises(ReductionError):
            subalgebra(gamma, {n: gamma.vector({n: 1}) for n in ("X1", "Y1")})

    def test_dependent_elements(self, gamma):
        with pytest.raises(ReductionError):
            subalgebra(gamma, {"A": gamma.vector({"X1": 1}), "B": gamma.vector({"X1": 2})})


@pytest.mark.unit
def test_reductions_need_parameter():
    with pytest.raises(UsageError):
        reduction_field(RationalField())
    with pytest.raises(UsageError):
        reduction_case("p1I")


@pytest.mark.parametrize(("label", "sdim"), [("p2I", (5, 4)), ("p23I", (3, 2))])
def test_case_representation(cases, label, sdim):
    case = cases(label)
    assert case.g0.sdim == sdim
    assert case.rep.dim == 4
    assert not case.rep.defects()
    assert case.weights() == expected_weights(case)
    assert not missing_arrows(case)


@pytest.mark.parametrize("label", ["p2I", "p23I"])
def test_embedding_family(cases, label):
    assert all(embedding_matrix_check(cases(label)).values())


def test_sl21_relations(cases):
    assert sl21_relations_check(cases("p2I")) == []


def test_rational_point_representation():
    case = reduction_case("p2I", RationalField({"a": Fraction(5, 3)}))
    assert not case.rep.defects()
    assert case.a == Fraction(5, 3)


@pytest.mark.gold_standard
@pytest.mark.slow
@pytest.mark.parametrize("label", ["p2I", "p23I"])
def test_check_reductions(label):
    report = check_reductions(label)
    assert report.ok, report.failed()
    assert report.as_dict()["case"] == label
    assert report.notes
    if label == "p23I":
        assert not all(report.data["printed_w_relations"].values())
