"""
Audit logging for verification runs.

One JSONL record per checked instance:
- timestamp: UTC ISO timestamp
- seed, shape, w0_mode, n: how the instance was generated
- instance_hash: SHA256 of the instance text (first 8 chars)
- fast, naive, exhaustive: the answers (exhaustive is null when skipped)
- status: ok | mismatch | error
"""
import hashlib
import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional


class AuditLogger:
    """
    Structured audit trail for fast-vs-oracle cross-checks.

    Args:
        audit_file: Path to JSONL audit file. If None, only logs to python logger.
        logger_name: Python logger name
    """

    def __init__(self, audit_file: Optional[str] = None, logger_name: str = "chainpart.audit"):
        self.audit_file = audit_file
        self.logger = logging.getLogger(logger_name)

        if self.audit_file:
            os.makedirs(os.path.dirname(os.path.abspath(self.audit_file)), exist_ok=True)
            self.logger.info(f"Audit logging to: {self.audit_file}")

    @staticmethod
    def hash_text(text: str) -> str:
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:8]

    def log_check(
        self,
        seed: int,
        shape: str,
        w0_mode: str,
        n: int,
        instance_text: str,
        fast: Optional[int],
        naive: Optional[int],
        exhaustive: Optional[int] = None,
        status: str = "ok",
    ) -> Dict[str, Any]:
        """
        Record one checked instance.

        Returns:
            The record as written
        """
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "seed": seed,
            "shape": shape,
            "w0_mode": w0_mode,
            "n": n,
            "instance_hash": self.hash_text(instance_text),
            "fast": fast,
            "naive": naive,
            "exhaustive": exhaustive,
            "status": status,
        }
        if self.audit_file:
            self._write_audit_entry(entry)

        if status == "ok":
            self.logger.debug(f"seed {seed} {shape}/{w0_mode} n={n}: {fast}")
        else:
            self.logger.warning(
                f"seed {seed} {shape}/{w0_mode} n={n} {entry['instance_hash']}: "
                f"fast={fast} naive={naive} exhaustive={exhaustive} ({status})"
            )
        return entry

    def _write_audit_entry(self, entry: Dict[str, Any]) -> None:
        if not self.audit_file:
            return
        try:
            with open(self.audit_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry) + "\n")
        except IOError as e:
            self.logger.error(f"Failed to write audit entry: {e}")

    def load_audit_log(self) -> List[Dict[str, Any]]:
        """Load and parse all audit log entries."""
        if not self.audit_file or not os.path.exists(self.audit_file):
            return []
        entries = []
        try:
            with open(self.audit_file, "r", encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        entries.append(json.loads(line))
        except IOError as e:
            self.logger.error(f"Failed to read audit log: {e}")
            return []
        return entries

    def summary(self) -> Dict[str, int]:
        """Count audit records by status."""
        counts: Dict[str, int] = {}
        for entry in self.load_audit_log():
            status = entry.get("status", "unknown")
            counts[status] = counts.get(status, 0) + 1
        return counts
