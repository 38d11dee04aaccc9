"""Diagnostics for verification runs."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from datetime import datetime, timezone
from importlib import metadata
import logging
import os
import platform
import socket
from typing import Any

import sympy

from .cache import ComputationCache
from .const import DOMAIN, REPORT_FORMAT_VERSION
from .report import Report

UTC = timezone.utc

_LOGGER = logging.getLogger(__name__)

# Host-specific data to redact
TO_REDACT = {
    "path",
    "directory",
    "cwd",
    "hostname",
    "user",
    "username",
}

REDACTED = "**REDACTED**"


def redact_data(data: Any, to_redact: Iterable[str] = TO_REDACT) -> Any:
    """Copy of ``data`` with the values of ``to_redact`` keys replaced."""
    keys = set(to_redact)
    if isinstance(data, Mapping):
        return {k: REDACTED if k in keys and v is not None else redact_data(v, keys) for k, v in data.items()}
    if isinstance(data, list):
        return [redact_data(v, keys) for v in data]
    return data


def package_version() -> str:
    try:
        return metadata.version(DOMAIN)
    except metadata.PackageNotFoundError:
        return "unknown"


def _user() -> str | None:
    try:
        return os.getlogin()
    except OSError:
        return os.environ.get("USER")


def build_diagnostics(
    reports: Iterable[Report],
    cache: ComputationCache | None = None,
    directory: str | None = None,
) -> dict[str, Any]:
    """Return diagnostics for a set of reports."""
    reports = list(reports)
    diagnostics_data: dict[str, Any] = {
        "system_info": {
            "timestamp": datetime.now(UTC).isoformat(),
            "package_version": package_version(),
            "report_format": REPORT_FORMAT_VERSION,
            "python_version": platform.python_version(),
            "sympy_version": sympy.__version__,
            "platform": platform.platform(),
            "hostname": socket.gethostname(),
            "user": _user(),
            "cwd": os.getcwd(),
        },
        "storage": {"directory": directory},
        "cache_stats": cache.get_stats() if cache is not None else {},
        "reports": [],
    }

    for report in reports:
        checks = report.payload.get("checks", [])
        failed = [c["name"] for c in checks if isinstance(c, dict) and not c.get("passed", True)]
        diagnostics_data["reports"].append(
            {
                "verb": report.verb,
                "ok": report.ok,
                "duration": round(report.duration, 3),
                "locus": list(report.locus),
                "checks": len(checks),
                "failed": failed,
            }
        )

    diagnostics_data["total_duration"] = round(sum(r.duration for r in reports), 3)
    _LOGGER.debug("Built diagnostics for %d reports", len(reports))
    return redact_data(diagnostics_data)
