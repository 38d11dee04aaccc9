"""Tests for the acceptance suite."""

import pytest

from superprolong.exceptions import ReductionError, UsageError
from superprolong.suite import (
    CHECKS,
    PARABOLIC_CLASSES,
    CheckResult,
    async_run_checks,
    run_check,
    select_checks,
)


def test_classes_cover_all_specs():
    members = [label for row in PARABOLIC_CLASSES for label in row.members]
    assert len(members) == len(set(members)) == 28
    assert [row.depth for row in PARABOLIC_CLASSES] == [2, 1, 3, 2, 4, 3]


class TestSelectChecks:
    """Selecting checks by name or prefix."""

    def test_all(self):
        assert select_checks() == list(CHECKS)

    def test_prefix(self):
        selected = select_checks(["spencer", "forms"])
        assert "forms" in selected
        assert "spencer p23I" in selected
        assert len(selected) == 7

    def test_exact(self):
        assert select_checks(["prolong independence"]) == ["prolong independence"]

    def test_unknown(self):
        with pytest.raises(UsageError):
            select_checks(["nonsense"])


class TestCheckResult:
    """Result lines and dictionaries."""

    def test_line(self):
        assert CheckResult("roots", True, "fine").line() == "PASS roots: fine"
        assert CheckResult("cauchy", False, "", ("p12I", 2)).line() == "FAIL cauchy (witness: ('p12I', 2))"

    def test_as_dict(self):
        data = CheckResult("forms", False, "x", (1, 2), ["a"], 0.12345).as_dict()
        assert data == {
            "name": "forms",
            "passed": False,
            "detail": "x",
            "witness": "(1, 2)",
            "locus": ["a"],
            "duration": 0.123,
        }


def test_run_check_reports_errors(workbench, monkeypatch):
    def broken(wb):
        raise ReductionError("no such level", 7)

    monkeypatch.setitem(CHECKS, "broken", broken)
    result = run_check(workbench, "broken")
    assert not result.passed
    assert result.detail == "no such level"
    assert result.witness == 7
    assert result.duration >= 0


@pytest.mark.parametrize("name", ["construction", "forms", "roots"])
def test_cheap_checks_pass(workbench, name):
    result = run_check(workbench, name)
    assert result.passed, result.line()


async def test_async_run_keeps_order(workbench):
    results = await async_run_checks(workbench, ["roots", "construction"])
    assert [r.name for r in results] == ["roots", "construction"]
    assert all(r.passed for r in results)


@pytest.mark.gold_standard
@pytest.mark.slow
@pytest.mark.parametrize("name", [c for c in CHECKS if not c.startswith(("realize", "reductions"))])
def test_acceptance_check(workbench, name):
    result = run_check(workbench, name)
    assert result.passed, result.line()
