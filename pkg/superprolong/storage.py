"""Storage module for saved command reports."""

from __future__ import annotations

import asyncio
from datetime import datetime, timezone
import json
import logging
from pathlib import Path
import re
from typing import Any

from .const import DOMAIN
from .report import Report

UTC = timezone.utc

_LOGGER = logging.getLogger(__name__)

STORAGE_VERSION = 1
STORAGE_KEY_PREFIX = DOMAIN

_SAFE_NAME = re.compile(r"[^A-Za-z0-9_.-]+")


class ReportStore:
    """Persistent JSON storage for reports under one directory."""

    def __init__(self, directory: str | Path):
        """Initialize the storage."""
        self._directory = Path(directory)
        self._data: dict[str, Any] = {}

    @property
    def directory(self) -> Path:
        return self._directory

    def path_for(self, name: str) -> Path:
        safe = _SAFE_NAME.sub("_", name).strip("_") or "report"
        return self._directory / f"{STORAGE_KEY_PREFIX}.{safe}.json"

    async def async_load(self, name: str) -> Report | None:
        """Load a stored report, or None if missing or unreadable."""
        try:
            data = await asyncio.to_thread(self._read, self.path_for(name))
            if data and data.get("report"):
                self._data = data
                _LOGGER.debug("Loaded report %s", name)
                return Report.from_dict(data["report"])
            self._data = self._get_default_data()
            _LOGGER.debug("No stored report %s", name)
            return None
        except Exception as e:
            _LOGGER.error("Failed to load report %s: %s", name, e)
            self._data = self._get_default_data()
            return None

    async def async_save(self, name: str, report: Report) -> Path | None:
        """Save a report; returns the written path, or None on failure."""
        path = self.path_for(name)
        try:
            self._data = {
                "version": STORAGE_VERSION,
                "saved_at": datetime.now(UTC).isoformat(),
                "report": report.to_dict(),
            }
            await asyncio.to_thread(self._write, path, self._data)
            _LOGGER.debug("Saved report %s to %s", name, path)
            return path
        except Exception as e:
            _LOGGER.error("Failed to save report %s: %s", name, e)
            return None

    async def async_remove(self, name: str) -> None:
        """Remove a stored report."""
        try:
            await asyncio.to_thread(self.path_for(name).unlink)
            _LOGGER.debug("Removed report %s", name)
        except Exception as e:
            _LOGGER.warning("Failed to remove report %s: %s", name, e)

    async def async_list(self) -> list[str]:
        """Names of stored reports."""
        try:
            paths = await asyncio.to_thread(lambda: sorted(self._directory.glob(f"{STORAGE_KEY_PREFIX}.*.json")))
        except Exception as e:
            _LOGGER.warning("Failed to list reports in %s: %s", self._directory, e)
            return []
        prefix = len(STORAGE_KEY_PREFIX) + 1
        return [p.name[prefix : -len(".json")] for p in paths]

    def _get_default_data(self) -> dict[str, Any]:
        """Get default data structure."""
        return {
            "version": STORAGE_VERSION,
            "saved_at": None,
            "report": None,
        }

    def _read(self, path: Path) -> dict[str, Any] | None:
        if not path.exists():
            return None
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("version") != STORAGE_VERSION:
            _LOGGER.warning("Stored report %s has version %s", path.name, data.get("version"))
        return data

    def _write(self, path: Path, data: dict[str, Any]) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)
