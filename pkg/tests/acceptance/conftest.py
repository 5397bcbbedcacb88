"""Acceptance harness: desk-scale physics runs with kept proof.

Acceptance tests are gated: they run only when ``CHIRALWALK_ACCEPTANCE=1``,
so the normal unit suite and CI skip them. Some take tens of minutes. Each
test records a proof entry via the ``proof`` fixture; at session end the
bundle is written to ``docs/proofs/<version>/summary.json``.

Proof content is metadata only: case name, timing, pass/fail, the run
parameters and a short measured summary. It never contains raw arrays.
"""

from __future__ import annotations

import json
import os
import platform
from datetime import datetime, timezone
from pathlib import Path

import pytest

_results: list[dict] = []


def acceptance_enabled() -> bool:
    return os.getenv("CHIRALWALK_ACCEPTANCE") == "1"


def pytest_collection_modifyitems(config, items):
    if acceptance_enabled():
        return
    skip = pytest.mark.skip(reason="acceptance runs require CHIRALWALK_ACCEPTANCE=1")
    for item in items:
        # The directory name is itself a node keyword; match the marker only.
        if item.get_closest_marker("acceptance") is not None:
            item.add_marker(skip)


def build_summary(results: list[dict], version: str, machine: str) -> dict:
    """Assemble the proof bundle payload."""
    return {
        "version": version,
        "machine": machine,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "passed": sum(1 for r in results if r["status"] == "pass"),
        "failed": sum(1 for r in results if r["status"] != "pass"),
        "cases": results,
    }


@pytest.fixture
def proof():
    """Recorder used by acceptance tests: proof(case, status, seconds=..., ...)."""

    def _record(case, status, *, seconds, parameters=None, measured=""):
        _results.append(
            {
                "case": case,
                "status": status,
                "seconds": round(seconds, 2),
                "parameters": dict(parameters or {}),
                "measured": (measured or "")[:160].replace("\n", " "),
            }
        )

    return _record


def pytest_sessionfinish(session, exitstatus):
    if not _results:
        return
    import chiralwalk

    version = os.getenv("CHIRALWALK_PROOF_VERSION", chiralwalk.__version__)
    out_dir = Path(session.config.rootpath) / "docs" / "proofs" / version
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = build_summary(_results, version, platform.machine())
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
