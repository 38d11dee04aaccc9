"""Tests for the memoizing workbench."""

from fractions import Fraction

import pytest

from superprolong.exceptions import UsageError
from superprolong.roots import ParabolicSpec
from superprolong.scalars import RationalField
from superprolong.workbench import Workbench, field_for, parse_point


def test_parse_point():
    assert parse_point("a=2/3, b=-1") == {"a": Fraction(2, 3), "b": Fraction(-1)}
    assert parse_point(None) == {}


@pytest.mark.parametrize("text", ["a", "=2", "a=x", "a=1/0", "2a=1"])
def test_parse_point_errors(text):
    with pytest.raises(UsageError):
        parse_point(text)


def test_field_for():
    assert field_for({"a": Fraction(2)}) == RationalField({"a": 2})
    for point in ({"b": Fraction(1)}, {"a": Fraction(0)}, {"a": Fraction(-1)}):
        with pytest.raises(UsageError):
            field_for(point)


def test_results_are_memoized():
    wb = Workbench(RationalField({"a": 2}))
    spec = ParabolicSpec.parse("p2I")
    first = wb.graded(spec)
    assert wb.graded(spec) is first
    assert wb.graded(spec, opposite=True) is not first
    assert wb.grading(spec) is wb.grading(spec)
    stats = wb.cache.get_stats()
    assert stats["methods"] == {"graded": 2, "grading": 1}
    assert stats["hits"] == 2


def test_s_parameters():
    wb = Workbench(RationalField({"a": Fraction(1, 2)}))
    assert wb.s == (Fraction(-3, 2), 1, Fraction(1, 2))
    assert wb.gamma is wb.gamma
