"""Tests for reports and their persistent storage."""

import json

import pytest

from superprolong.exceptions import SuperProlongError
from superprolong.report import Report
from superprolong.storage import ReportStore


@pytest.fixture
def report():
    return Report("prolong", {"label": "p2I", "levels": [[4, 4], [5, 4], [4, 4], [0, 0]]}, ["a = 0"], 1.25)


class TestReport:
    """Report serialization."""

    def test_json_round_trip(self, report):
        assert Report.from_json(report.to_json()) == report

    def test_defaults_filled(self):
        restored = Report.from_dict({"verb": "verify", "payload": {}})
        assert restored.locus == []
        assert restored.ok
        assert restored.duration == 0.0

    @pytest.mark.parametrize(
        "data",
        [
            {"verb": "unknown", "payload": {}},
            {"verb": "prolong"},
            {"verb": "prolong", "payload": {}, "duration": -1},
        ],
    )
    def test_invalid_report(self, data):
        with pytest.raises(SuperProlongError):
            Report.from_dict(data)

    def test_invalid_json(self):
        with pytest.raises(SuperProlongError):
            Report.from_json("{not json")
        with pytest.raises(SuperProlongError):
            Report.from_json("[1, 2]")

    def test_summary(self, report):
        assert report.summary == "prolong: ok in 1.25s"
        report.ok = False
        assert report.summary == "prolong: MISMATCH in 1.25s"


class TestReportStore:
    """Async JSON storage under a directory."""

    def test_path_for_sanitizes(self, tmp_path):
        store = ReportStore(tmp_path)
        assert store.path_for("p2 I/m-g0").name == "superprolong.p2_I_m-g0.json"
        assert store.path_for("///").name == "superprolong.report.json"

    async def test_save_and_load(self, tmp_path, report):
        store = ReportStore(tmp_path / "reports")
        path = await store.async_save("p2I", report)
        assert path is not None and path.exists()
        assert json.loads(path.read_text())["version"] == 1

        assert await store.async_load("p2I") == report
        assert await store.async_list() == ["p2I"]

    async def test_missing_report(self, tmp_path):
        store = ReportStore(tmp_path)
        assert await store.async_load("nothing") is None
        assert await store.async_list() == []

    async def test_corrupt_report(self, tmp_path):
        store = ReportStore(tmp_path)
        store.path_for("bad").write_text("{broken", encoding="utf-8")
        assert await store.async_load("bad") is None

    async def test_remove(self, tmp_path, report):
        store = ReportStore(tmp_path)
        await store.async_save("p2I", report)
        await store.async_remove("p2I")
        assert await store.async_load("p2I") is None
        # Removing again only logs
        await store.async_remove("p2I")
