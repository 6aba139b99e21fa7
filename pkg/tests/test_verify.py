"""
Tests for the verify harness and its audit trail.
"""

import io
import json

import pytest

from chainpart.audit import AuditLogger
from chainpart.instance import SHAPES, W0_MODES
from chainpart.solver import solve
from chainpart.verify import CheckCase, VerifyOptions, Verifier, check_case, plan_cases


def off_by_one(t):
    """A broken solver: correct except for the root value."""
    sol = solve(t)
    sol.F[t.root - 1] += 1
    sol.optimal += 1
    return sol


class TestPlan:
    """Deterministic case planning."""

    def test_deterministic(self):
        options = VerifyOptions(count=20, n_max=50, seed=7)
        assert plan_cases(options) == plan_cases(options)

    def test_covers_shapes_and_modes(self):
        cases = plan_cases(VerifyOptions(count=20, n_max=50))
        assert {c.shape for c in cases} == set(SHAPES)
        assert {c.w0_mode for c in cases} == set(W0_MODES)

    def test_half_are_exhaustive_sized(self):
        cases = plan_cases(VerifyOptions(count=100, n_max=200, exhaustive_max_n=10))
        assert sum(1 for c in cases if c.n <= 10) >= 50
        assert all(1 <= c.n <= 200 for c in cases)


class TestCheckCase:
    """One case, every solver."""

    def test_ok(self):
        result = check_case(CheckCase(0, 5, "binary", "tight", 8), VerifyOptions())
        assert result.ok
        assert result.fast == result.naive == result.exhaustive

    def test_exhaustive_skipped_for_large(self):
        result = check_case(CheckCase(0, 5, "path", "loose", 40), VerifyOptions())
        assert result.ok
        assert result.exhaustive is None

    def test_broken_solver_detected(self):
        result = check_case(CheckCase(0, 5, "star", "tight", 6), VerifyOptions(), off_by_one)
        assert result.status == "mismatch"
        assert result.fast == result.naive + 1


class TestVerifier:
    """Batch runs, summaries and dumps."""

    def test_zero_count(self):
        out = io.StringIO()
        assert Verifier(VerifyOptions(count=0), out=out).run() == 0
        assert out.getvalue().strip() == "0/0 OK"

    def test_all_match(self):
        out = io.StringIO()
        verifier = Verifier(VerifyOptions(count=60, n_max=80, seed=3), out=out)
        assert verifier.run() == 0
        assert verifier.checks_passed == 60
        assert verifier.monitor.items == 60
        assert "60/60 OK" in out.getvalue()

    def test_fault_injection_dumps_instance(self):
        out = io.StringIO()
        verifier = Verifier(VerifyOptions(count=5, n_max=20), out=out, fast_solver=off_by_one)
        assert verifier.run() == 1
        text = out.getvalue()
        assert text.startswith("MISMATCH case 0")
        assert "instance:" in text
        assert "0/5 FAILED" in text
        assert verifier.first_failure is not None
        assert text.count("MISMATCH") == 1

    def test_parallel_workers(self):
        out = io.StringIO()
        verifier = Verifier(VerifyOptions(count=12, n_max=40, workers=2), out=out)
        assert verifier.run() == 0
        assert "12/12 OK" in out.getvalue()

    @pytest.mark.slow
    def test_thousand_instances(self):
        out = io.StringIO()
        assert Verifier(VerifyOptions(count=1000, n_max=200), out=out).run() == 0
        assert "1000/1000 OK" in out.getvalue()


class TestAuditLogger:
    """JSONL audit records."""

    def test_records_written(self, tmp_path):
        path = tmp_path / "audit" / "verify.jsonl"
        audit = AuditLogger(str(path))
        Verifier(VerifyOptions(count=4, n_max=10), audit=audit, out=io.StringIO()).run()
        entries = audit.load_audit_log()
        assert len(entries) == 4
        assert entries[0]["status"] == "ok"
        assert len(entries[0]["instance_hash"]) == 8
        assert entries[0]["timestamp"].endswith("Z")
        assert audit.summary() == {"ok": 4}
        json.loads(path.read_text().splitlines()[0])

    def test_hash_is_stable(self):
        assert AuditLogger.hash_text("1 5\n0 3 7\n") == AuditLogger.hash_text("1 5\n0 3 7\n")

    def test_without_file(self):
        audit = AuditLogger()
        entry = audit.log_check(1, "path", "tight", 3, "x", 6, 6)
        assert entry["exhaustive"] is None
        assert audit.load_audit_log() == []
