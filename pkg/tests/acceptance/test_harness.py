"""Always-on tests for the acceptance harness itself (no long runs).

These verify the gate and the proof-bundle schema without running the gated
long physics runs, so CI exercises the harness on every run.
"""

from __future__ import annotations

from tests.acceptance.conftest import build_summary, acceptance_enabled


def test_acceptance_disabled_without_env(monkeypatch):
    monkeypatch.delenv("CHIRALWALK_ACCEPTANCE", raising=False)
    assert acceptance_enabled() is False


def test_acceptance_needs_exactly_one(monkeypatch):
    monkeypatch.setenv("CHIRALWALK_ACCEPTANCE", "yes")
    assert acceptance_enabled() is False


def test_acceptance_enabled_with_env(monkeypatch):
    monkeypatch.setenv("CHIRALWALK_ACCEPTANCE", "1")
    assert acceptance_enabled() is True


def test_proof_summary_schema():
    results = [
        {"case": "edge_states", "status": "pass", "seconds": 1.2, "parameters": {"N": 500}, "measured": "(2, 2)"},
        {"case": "gap_closing", "status": "fail", "seconds": 30.4, "parameters": {}, "measured": "ratio 0.2"},
    ]
    summary = build_summary(results, version="9.9.9", machine="x86_64")
    assert summary["version"] == "9.9.9"
    assert summary["machine"] == "x86_64"
    assert summary["passed"] == 1
    assert summary["failed"] == 1
    assert summary["cases"] == results
    assert "generated_at" in summary
    for case in summary["cases"]:
        assert set(case) == {"case", "status", "seconds", "parameters", "measured"}
