"""Serializable command reports."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import logging
from typing import Any

import voluptuous as vol

from .const import REPORT_FORMAT_VERSION, VERBS
from .exceptions import SuperProlongError

_LOGGER = logging.getLogger(__name__)

REPORT_SCHEMA = vol.Schema(
    {
        vol.Required("verb"): vol.In(VERBS),
        vol.Required("payload"): dict,
        vol.Optional("locus", default=list): [str],
        vol.Optional("duration", default=0.0): vol.All(vol.Coerce(float), vol.Range(min=0)),
        vol.Optional("ok", default=True): bool,
        vol.Optional("version", default=REPORT_FORMAT_VERSION): int,
    }
)


@dataclass
class Report:
    """Result of one command: payload plus exceptional locus and timing.

    ``payload`` holds JSON-native values only (dicts, lists, strings,
    numbers, booleans and None), so a report survives a JSON round trip
    unchanged.
    """

    verb: str
    payload: dict[str, Any]
    locus: list[str] = field(default_factory=list)
    duration: float = 0.0
    ok: bool = True
    version: int = REPORT_FORMAT_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "verb": self.verb,
            "payload": self.payload,
            "locus": list(self.locus),
            "duration": self.duration,
            "ok": self.ok,
            "version": self.version,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Report:
        try:
            clean = REPORT_SCHEMA(data)
        except vol.Invalid as err:
            raise SuperProlongError(f"Invalid report: {err!s}") from err
        if clean["version"] != REPORT_FORMAT_VERSION:
            _LOGGER.warning(
                "Report format version %s differs from %s", clean["version"], REPORT_FORMAT_VERSION
            )
        return cls(**clean)

    @classmethod
    def from_json(cls, text: str) -> Report:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise SuperProlongError(f"Invalid report JSON: {err!s}") from err
        if not isinstance(data, dict):
            raise SuperProlongError("Invalid report JSON: expected an object")
        return cls.from_dict(data)

    @property
    def summary(self) -> str:
        status = "ok" if self.ok else "MISMATCH"
        return f"{self.verb}: {status} in {self.duration:.2f}s"
