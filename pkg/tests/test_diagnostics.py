"""Tests for verification diagnostics."""

from superprolong.cache import ComputationCache
from superprolong.diagnostics import REDACTED, build_diagnostics, redact_data
from superprolong.report import Report


def test_redact_nested():
    data = {"path": "/home/x", "inner": [{"user": "me", "value": 1}], "cwd": None}
    assert redact_data(data) == {"path": REDACTED, "inner": [{"user": REDACTED, "value": 1}], "cwd": None}


def test_build_diagnostics():
    cache = ComputationCache()
    cache.set("prolong", "data", label="p2I")
    reports = [
        Report(
            "verify",
            {"checks": [{"name": "jacobi", "passed": True}, {"name": "spencer p2I", "passed": False}]},
            duration=2.5,
            ok=False,
        ),
        Report("construct", {"sdim": [9, 8]}, duration=0.5),
    ]
    diagnostics = build_diagnostics(reports, cache, directory="/tmp/reports")

    assert diagnostics["system_info"]["hostname"] == REDACTED
    assert diagnostics["system_info"]["cwd"] == REDACTED
    assert diagnostics["storage"]["directory"] == REDACTED
    assert diagnostics["cache_stats"]["entries"] == 1
    assert diagnostics["reports"][0]["failed"] == ["spencer p2I"]
    assert diagnostics["reports"][0]["checks"] == 2
    assert diagnostics["reports"][1]["checks"] == 0
    assert diagnostics["total_duration"] == 3.0


def test_build_diagnostics_without_cache():
    diagnostics = build_diagnostics([])
    assert diagnostics["cache_stats"] == {}
    assert diagnostics["reports"] == []
    assert diagnostics["storage"]["directory"] is None
