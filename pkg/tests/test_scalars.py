"""Tests for exact scalars and sparse linear algebra."""

from fractions import Fraction

from hypothesis import assume, given, strategies as st
import pytest

from superprolong.exceptions import LinearAlgebraError, PoleError, ScalarError
from superprolong.scalars import (
    ExceptionalLocus,
    RationalField,
    SpanReducer,
    SparseMatrix,
    dense_inverse,
    dense_mul,
    field_arith,
    nullspace,
    random_points,
    rank_with_locus,
    s_parameters,
    solve_in_span,
)

pytestmark = pytest.mark.unit

EXPRESSIONS = ("(a^2 + 1)/(a + 1)", "a - 1/a", "3*a^3 - a/2 + 7", "(2*a + 1)/(a^2 + a)")


def test_parse_and_format(field):
    """Canonical formatting of rational functions."""
    assert field.format(field.parse("a^2+1")) == "a^2 + 1"
    assert field.format(field.parse("1/(a+1)")) == "1/(a + 1)"
    assert field.format(field.parse("(a^2 - 1)/(a - 1)")) == "a + 1"
    assert field.format(field.zero) == "0"


def test_parse_error(field):
    with pytest.raises(ScalarError):
        field.parse("a +* )")


def test_evaluate_and_pole(field):
    value = field.parse("(a+1)/a")
    assert field.evaluate(value, {"a": Fraction(2)}) == Fraction(3, 2)
    with pytest.raises(PoleError):
        field.evaluate(value, {"a": Fraction(0)})


def test_division_by_zero(field):
    with pytest.raises(PoleError):
        field.div(field.one, field.zero)


def test_field_arith(field):
    a = field.parameter("a")
    assert field_arith(field, a, 1, "add") == a + 1
    assert field.format(field_arith(field, a, a + 1, "div")) == "a/(a + 1)"
    assert field_arith(field, a, a, "sub") == field.zero
    with pytest.raises(ScalarError):
        field_arith(field, a, a, "pow")


def test_rational_field_substitutes_point():
    field = RationalField({"a": Fraction(2)})
    assert field.parse("a + 1/3") == Fraction(7, 3)
    assert field.parameter("a") == 2
    with pytest.raises(ScalarError):
        field.parameter("b")


def test_rational_field_rejects_symbolic_text():
    with pytest.raises(ScalarError):
        RationalField().parse("a + 1")


def test_s_parameters(field, generic):
    """s = (-1-a, 1, a) over Q(a) and s3 = -s1-s2 over Q(s1, s2)."""
    s1, s2, s3 = s_parameters(field)
    assert field.format(s1) == "-a - 1"
    assert s2 == field.one
    assert s1 + s2 + s3 == field.zero
    g1, g2, g3 = s_parameters(generic)
    assert g1 + g2 + g3 == generic.zero


@given(
    st.sampled_from(EXPRESSIONS),
    st.fractions(min_value=-20, max_value=20, max_denominator=12),
)
def test_evaluation_commutes_with_specialization(field, text, a):
    """Evaluating a rational function agrees with computing at the point."""
    assume(a not in (0, -1))
    point = {"a": a}
    assert field.evaluate(field.parse(text), point) == RationalField(point).parse(text)


def test_nullspace_generic_rank(field):
    a = field.parameter("a")
    matrix = SparseMatrix.from_dense(field, [[field.one, a], [a, a * a]])
    kernel, _ = nullspace(matrix)
    assert len(kernel) == 1
    assert matrix.apply(kernel[0]) == {}


def test_rank_locus_detects_drop(field):
    """det = a^2 - 1: full rank off a = 1 and a = -1."""
    a = field.parameter("a")
    matrix = SparseMatrix.from_dense(field, [[a, field.one], [field.one, a]])
    rank, locus = rank_with_locus(matrix)
    assert rank == 2
    assert locus.vanishes_at({"a": Fraction(1)})
    assert locus.vanishes_at({"a": Fraction(-1)})
    assert not locus.vanishes_at({"a": Fraction(2)})
    specialized = matrix.specialize({"a": Fraction(1)})
    assert rank_with_locus(specialized)[0] == 1


def test_rank_locus_keeps_row_content(field):
    """A factor dividing a whole row still lowers the rank where it vanishes."""
    a = field.parameter("a")
    matrix = SparseMatrix.from_dense(field, [[a - 2, field.zero], [field.zero, a]])
    rank, locus = rank_with_locus(matrix)
    assert rank == 2
    assert rank_with_locus(matrix.specialize({"a": Fraction(2)}))[0] == 1
    assert locus.vanishes_at({"a": Fraction(2)})
    assert not locus.vanishes_at({"a": Fraction(3)})


def test_rank_locus_keeps_eliminated_content(field):
    """Content created by an elimination step is part of the locus."""
    a = field.parameter("a")
    matrix = SparseMatrix.from_dense(
        field, [[field.one, field.one], [field.one, a - 2]]
    )
    rank, locus = rank_with_locus(matrix)
    assert rank == 2
    assert rank_with_locus(matrix.specialize({"a": Fraction(3)}))[0] == 1
    assert locus.vanishes_at({"a": Fraction(3)})


def test_span_reducer_coordinates(field):
    reducer = SpanReducer(field)
    assert reducer.add({0: field.one, 1: field.one})
    assert reducer.add({1: field.one})
    assert not reducer.add({0: field.convert(2), 1: field.convert(5)})
    coords = reducer.coordinates({0: field.convert(3), 1: field.convert(4)})
    assert coords == {0: field.convert(3), 1: field.one}
    assert reducer.independent == [0, 1]
    with pytest.raises(LinearAlgebraError):
        reducer.coordinates({2: field.one})


def test_solve_in_span(field):
    columns = [{0: field.one}, {1: field.one}]
    assert solve_in_span(field, columns, {0: field.convert(2)}) == [field.convert(2), field.zero]
    assert solve_in_span(field, columns, {3: field.one}) is None


def test_dense_inverse(field):
    a = field.parameter("a")
    matrix = [[a, field.one], [field.zero, a + 1]]
    product = dense_mul(field, matrix, dense_inverse(field, matrix))
    assert product == [[field.one, field.zero], [field.zero, field.one]]
    with pytest.raises(LinearAlgebraError):
        dense_inverse(field, [[field.one, field.one], [field.one, field.one]])


def test_random_points_avoid_default_locus(field):
    points = random_points(field, count=5, seed=7)
    assert len(points) == 5
    assert all(p["a"] not in (0, -1) for p in points)
    assert points == random_points(field, count=5, seed=7)


def test_locus_union_and_outside(field):
    default = field.default_locus()
    a = field.parameter("a").numer
    extra = ExceptionalLocus((a - 1,))
    merged = default.union(extra)
    assert len(merged) == 3
    assert merged.outside(default).describe() == ["a - 1"]
    assert not default.outside(merged)
