"""Tests for the geometric realizations of D(2,1;a)."""

from fractions import Fraction

import pytest

from superprolong.exceptions import FieldModelError, UsageError
from superprolong.liesuper import j_invariant
from superprolong.realizations import (
    PAIR_COORDS,
    PAIR_WEIGHTS,
    chart_identification,
    chart_relations_hold,
    darboux_identification,
    darboux_span,
    expected_levels,
    flag_chart,
    pair_frame,
    realization_field,
    realize,
    symmetry_from_pair,
    twistor_algebra,
    twistor_pde_checks,
    twistor_pde_solutions,
)
from superprolong.scalars import ParameterField, RationalField
from superprolong.superfields import (
    DarbouxModel,
    SuperPolynomial,
    SuperVectorField,
    TwistorModel,
    model_closure,
    parse_field,
    random_polynomial,
    symmetry_check,
    symmetry_dims,
)


@pytest.mark.unit
def test_unknown_model():
    with pytest.raises(UsageError):
        realization_field("p2I")


@pytest.mark.unit
def test_expected_levels():
    assert expected_levels("p1I") == {-2: (1, 0), -1: (0, 4), 0: (7, 0), 1: (0, 4), 2: (1, 0)}


@pytest.mark.unit
def test_darboux_span_closes():
    """The reduced contact algebra at eps = 1/3 is (9|8) and graded like p1I."""
    field = RationalField({"eps": "1/3"})
    model = DarbouxModel(field)
    names, funcs = darboux_span(model, field.parameter("eps"))
    alg = model_closure(model, funcs, names)
    assert alg.sdim == (9, 8)
    assert {k: alg.level_sdim(k) for k in range(-2, 3)} == expected_levels("p1I")


@pytest.mark.unit
def test_flag_chart_structure_equations():
    chart = flag_chart(RationalField({"a": 2, "kappa": 3}))
    assert chart_relations_hold(chart)


class TestPairDistribution:
    """Symmetries of the (2|2) distribution on C^{3|3}."""

    @pytest.fixture
    def q(self):
        return RationalField()

    def test_low_levels(self, q):
        assert symmetry_dims(pair_frame(q), PAIR_WEIGHTS, range(-2, 0)) == {-2: (1, 1), -1: (2, 2)}

    def test_generators(self, q):
        one = SuperPolynomial.constant(PAIR_COORDS, q)
        zero = SuperPolynomial.zero(PAIR_COORDS, q)
        xi1 = SuperPolynomial.variable(PAIR_COORDS, q, "xi1")
        assert symmetry_from_pair(one, zero) == SuperVectorField.partial(PAIR_COORDS, q, "y3")
        assert symmetry_from_pair(zero, xi1) == parse_field("d/dy1 + xi1*d/dxi3", PAIR_COORDS, q)

    def test_random_pairs_are_symmetries(self, q, rng):
        frame = pair_frame(q)
        arguments = ("y3", "xi1", "xi2", "xi3")
        for p in (0, 1, 0, 1):
            h = random_polynomial(PAIR_COORDS, q, rng, terms=3, parity=p, variables=arguments)
            g = random_polynomial(PAIR_COORDS, q, rng, terms=3, parity=1 - p, variables=arguments)
            assert symmetry_check(symmetry_from_pair(h, g), frame)

    def test_arguments_are_restricted(self, q):
        y1 = SuperPolynomial.variable(PAIR_COORDS, q, "y1")
        with pytest.raises(FieldModelError):
            symmetry_from_pair(y1, SuperPolynomial.zero(PAIR_COORDS, q))


@pytest.mark.gold_standard
@pytest.mark.slow
@pytest.mark.parametrize("model", ["p1I", "p12I", "p123I", "p123IV", "m33"])
def test_realize(model):
    report = realize(model)
    assert report.ok, report.failed()
    if model != "m33":
        assert report.sdim == (9, 8)
        assert report.j_value is not None
    assert report.as_dict()["model"] == model



@pytest.mark.slow
def test_darboux_identification_in_eps():
    """The Darboux span matches Gamma(-1-a, 1, a) identically in eps."""
    field = ParameterField(("eps",))
    result = darboux_identification(field)
    eps = field.parameter("eps")
    a = field.div(1 - eps, 1 + eps)
    assert result.sdim == (9, 8)
    assert result.j_value == j_invariant(field, -1 - a, 1, a)


@pytest.mark.slow
def test_chart_identification_in_kappa():
    field = ParameterField(("a", "kappa"))
    result = chart_identification(field)
    a, kappa = field.parameter("a"), field.parameter("kappa")
    a_kappa = field.div(a * kappa - 1, a + 1)
    assert result.sdim == (9, 8)
    assert result.j_value == j_invariant(field, -1 - a_kappa, 1, a_kappa)


@pytest.mark.slow
def test_chart_identification_at_kappa_one():
    """kappa = 1 gives D(2,1;(a - 1)/(a + 1)); at a = 2 that is a = 1/3."""
    field = RationalField({"a": 2, "kappa": 1})
    result = chart_identification(field)
    assert result.sdim == (9, 8)
    third = field.convert(Fraction(1, 3))
    assert result.j_value == j_invariant(field, -1 - third, 1, third)


@pytest.mark.slow
class TestTwistorSystem:
    """The second-order system on C^{1|4} and the p12I contact algebra."""

    @pytest.fixture
    def model(self):
        return TwistorModel(RationalField({"a": 2}))

    def test_solution_space_is_the_algebra(self, model):
        _, funcs = twistor_algebra(model)
        solutions = twistor_pde_solutions(model)
        checks = twistor_pde_checks(model, funcs, solutions)
        assert checks == {
            "pde_contains_algebra": True,
            "pde_solutions_sdim_9_8": True,
            "pde_span": True,
            "pde_bound_stable": True,
        }
        assert len(solutions) == 17

    def test_proper_subspace_is_not_the_solution_space(self, model):
        _, funcs = twistor_algebra(model)
        checks = twistor_pde_checks(model, funcs[:-1], twistor_pde_solutions(model))
        assert checks["pde_contains_algebra"]
        assert not checks["pde_span"]
