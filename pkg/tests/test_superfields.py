"""Tests for superpolynomials, supervector fields and contact models."""

from fractions import Fraction

import pytest

from superprolong.exceptions import ClosureError, FieldModelError
from superprolong.scalars import RationalField
from superprolong.superfields import (
    CoordinateSystem,
    DarbouxModel,
    DifferentialOperator,
    DistributionFrame,
    OddContactModel,
    SuperPolynomial,
    SuperVectorField,
    TwistorModel,
    format_field,
    format_polynomial,
    model_closure,
    monomials_of_weight,
    parse_field,
    parse_polynomial,
    pde_solution_space,
    random_polynomial,
    super_bracket,
    symmetry_check,
    symmetry_defects,
)

COORDS = CoordinateSystem(("x", "y"), ("xi1", "xi2", "xi3"))


@pytest.fixture
def q():
    return RationalField()


def poly(text, q):
    return parse_polynomial(text, COORDS, q)


class TestSuperPolynomial:
    """Grassmann arithmetic and derivatives."""

    def test_odd_generators_anticommute(self, q):
        xi1, xi2 = SuperPolynomial.variable(COORDS, q, "xi1"), SuperPolynomial.variable(COORDS, q, "xi2")
        assert xi1 * xi2 == -(xi2 * xi1)
        assert not xi1 * xi1
        assert (xi1 * xi2).parity == 0
        assert (xi1 * xi2 * SuperPolynomial.variable(COORDS, q, "xi3")).parity == 1

    def test_left_derivative_signs(self, q):
        f = poly("xi1*xi2", q)
        assert f.derivative("xi1") == poly("xi2", q)
        assert f.derivative("xi2") == poly("-xi1", q)
        assert poly("x^3*y", q).derivative("x") == poly("3*x^2*y", q)

    def test_derivatives_apply_rightmost_first(self, q):
        f = poly("xi1*xi2", q)
        assert f.derivatives("xi1", "xi2") == f.derivative("xi2").derivative("xi1")
        assert f.derivatives("xi1", "xi2") == -1

    def test_weight_and_split(self, q):
        weights = {"x": 2, "y": 1, "xi1": 1, "xi2": 1, "xi3": 3}
        assert poly("x + xi1*xi2 - y^2", q).weight(weights) == 2
        with pytest.raises(FieldModelError):
            poly("x + xi3", q).weight(weights)
        mixed = poly("x + xi1", q)
        assert len(mixed.split_parity()) == 2
        with pytest.raises(FieldModelError):
            _ = mixed.parity

    def test_different_coordinates(self, q):
        other = CoordinateSystem(("x",), ())
        with pytest.raises(FieldModelError):
            poly("x", q) + SuperPolynomial.variable(other, q, "x")

    def test_embed_keeps_sign(self, q):
        small = CoordinateSystem((), ("b", "a"))
        large = CoordinateSystem(("h",), ("a", "b"))
        f = SuperPolynomial.variable(small, q, "b") * SuperPolynomial.variable(small, q, "a")
        expected = SuperPolynomial.variable(large, q, "b") * SuperPolynomial.variable(large, q, "a")
        assert f.embed(large) == expected

    def test_specialize(self, field):
        coords = CoordinateSystem(("x",), ())
        f = parse_polynomial("a*x + 1", coords, field)
        assert f.specialize({"a": Fraction(3)}) == parse_polynomial("3*x + 1", coords, RationalField({"a": 3}))


class TestTextFormat:
    """Parsing and printing."""

    def test_format_polynomial(self, q):
        assert format_polynomial(poly("xi2*xi1", q)) == "-xi1*xi2"
        assert format_polynomial(poly("1/2*x^2 - 3", q)) == "-3 + (1/2)*x^2"
        assert format_polynomial(SuperPolynomial.zero(COORDS, q)) == "0"

    def test_format_field(self, q):
        v = parse_field("xi1*d/dx - d/dxi2", COORDS, q)
        assert format_field(v) == "(xi1)*d/dx - d/dxi2"

    def test_symbols(self, q):
        f = parse_polynomial("k*x", COORDS, q, {"k": Fraction(5)})
        assert f == poly("5*x", q)

    @pytest.mark.parametrize("text", ["x +* y", "z", "x^y", "(x", "x/y"])
    def test_parse_errors(self, q, text):
        with pytest.raises(FieldModelError):
            parse_polynomial(text, COORDS, q)

    def test_kind_mismatch(self, q):
        with pytest.raises(FieldModelError):
            parse_polynomial("d/dx", COORDS, q)
        with pytest.raises(FieldModelError):
            parse_field("x", COORDS, q)
        with pytest.raises(FieldModelError):
            parse_field("x + d/dx", COORDS, q)


class TestVectorFields:
    """Supervector fields and the supercommutator."""

    def test_parity(self, q):
        assert parse_field("xi1*d/dx + d/dxi2", COORDS, q).parity == 1
        assert parse_field("x*d/dy + xi1*d/dxi2", COORDS, q).parity == 0

    def test_odd_odd_bracket(self, q):
        d = SuperVectorField.partial(COORDS, q, "xi1")
        v = parse_field("xi1*d/dx", COORDS, q)
        assert super_bracket(d, v) == SuperVectorField.partial(COORDS, q, "x")
        assert super_bracket(d, d) == SuperVectorField(COORDS, q)

    def test_even_bracket(self, q):
        euler = parse_field("x*d/dx", COORDS, q)
        shift = SuperVectorField.partial(COORDS, q, "x")
        assert super_bracket(shift, euler) == shift

    def test_bracket_is_super_antisymmetric(self, q, rng):
        for _ in range(5):
            a = SuperVectorField(COORDS, q, {"x": random_polynomial(COORDS, q, rng, parity=1)})
            b = SuperVectorField(COORDS, q, {"xi2": random_polynomial(COORDS, q, rng, parity=0)})
            assert super_bracket(a, b) == super_bracket(b, a)

    def test_differential_operator(self, q):
        coords = CoordinateSystem(("x",), ("xi",))
        ops = [DifferentialOperator.derivative(coords, q, "x", "x")]
        ansatz = [parse_polynomial(t, coords, q) for t in ("1", "x", "x^2", "xi", "x*xi", "x^2*xi")]
        assert ops[0].apply(ansatz[2]) == 2
        assert len(pde_solution_space(ops, ansatz)) == 4


def test_monomials_of_weight(q):
    model = DarbouxModel(q)
    assert len(monomials_of_weight(model.coords, q, model.weights, 2)) == 7
    assert monomials_of_weight(model.coords, q, model.weights, -1) == []


class TestContactModels:
    """Contact fields are a homomorphism from the bracket of generating functions."""

    def test_darboux_levels(self, q):
        model = DarbouxModel(q)
        expected = {-2: (1, 0), -1: (0, 4), 0: (7, 0), 1: (0, 8), 2: (8, 0)}
        assert model.graded_dims(range(-2, 3)) == expected

    def test_twistor_levels(self, q):
        model = TwistorModel(q)
        assert model.graded_dims(range(-3, 1)) == {-3: (1, 0), -2: (0, 2), -1: (1, 2), 0: (5, 0)}

    @pytest.mark.parametrize("model_class", [DarbouxModel, TwistorModel, OddContactModel])
    def test_homomorphism(self, q, rng, model_class):
        model = model_class(q)
        for _ in range(6):
            f = random_polynomial(model.coords, q, rng, parity=rng.randint(0, 1))
            g = random_polynomial(model.coords, q, rng, parity=rng.randint(0, 1))
            assert not model.homomorphism_defect(f, g)

    def test_odd_contact_jacobi(self, q, rng):
        model = OddContactModel(q)
        for _ in range(4):
            f, g, h = (random_polynomial(model.coords, q, rng, parity=rng.randint(0, 1)) for _ in range(3))
            assert not model.jacobi_defect(f, g, h)

    def test_odd_contact_parity_shift(self, q):
        model = OddContactModel(q)
        assert model.field_parity(model.var("psi")) == 0
        assert model.field_parity(model.var("psi1")) == 1
        assert model.level(model.var("psi")) == 0

    def test_darboux_bracket(self, q):
        model = DarbouxModel(q)
        assert model.bracket(model.var("xi1"), model.var("xi1")) == Fraction(-1, 2)
        assert model.bracket(model.poly("1"), model.var("x")) == 1

    def test_model_closure(self, q):
        model = DarbouxModel(q)
        alg = model_closure(model, [model.poly("1"), model.var("xi1")], ["1", "xi1"])
        assert alg.sdim == (1, 1)
        with pytest.raises(ClosureError):
            model_closure(model, [model.var("xi1")])


class TestDistributionFrame:
    """Symmetries of a frame with unit leading coefficients."""

    @pytest.fixture
    def frame(self, q):
        coords = CoordinateSystem(("y1", "y2", "y3"), ("xi1", "xi2", "xi3"))
        texts = ("d/dy1", "d/dy2", "d/dxi1 + xi2*d/dy3 + y1*d/dxi3", "d/dxi2 + xi1*d/dy3 + y2*d/dxi3")
        return DistributionFrame([parse_field(t, coords, q) for t in texts], ["y1", "y2", "xi1", "xi2"])

    def test_leading_entries(self, q):
        coords = CoordinateSystem(("y1",), ())
        with pytest.raises(FieldModelError):
            DistributionFrame([parse_field("2*d/dy1", coords, q)], ["y1"])

    def test_symmetries(self, frame, q):
        coords = frame.coords
        assert symmetry_check(SuperVectorField.partial(coords, q, "y3"), frame)
        bad = parse_field("y1*d/dy3", coords, q)
        assert not symmetry_check(bad, frame)
        assert symmetry_defects(bad, frame) == [0]

    def test_remainder(self, frame, q):
        x = parse_field("xi2*d/dy1 + d/dxi1", frame.coords, q)
        assert frame.remainder(x) == parse_field("-xi2*d/dy3 - y1*d/dxi3", frame.coords, q)
