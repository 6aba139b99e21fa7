"""
Run monitor - wall-clock and memory tracking for long verify and bench runs.
"""
import logging
import platform
import time
from datetime import datetime, timezone
from typing import Any, Dict

import psutil

logger = logging.getLogger(__name__)


class RunMonitor:
    """Tracks elapsed time, processed items and process memory for one run."""

    def __init__(self, label: str = "run"):
        self.label = label
        self.start_time = time.perf_counter()
        self.started_at = datetime.now(timezone.utc)
        self.items = 0
        self.process = psutil.Process()
        self.peak_rss_mb = self.rss_mb()

    def rss_mb(self) -> float:
        """Current resident set size in MB."""
        return round(self.process.memory_info().rss / (1024 * 1024), 1)

    def sample(self) -> float:
        """Take a memory sample and update the peak."""
        rss = self.rss_mb()
        if rss > self.peak_rss_mb:
            self.peak_rss_mb = rss
        return rss

    def record(self, count: int = 1) -> None:
        self.items += count

    def elapsed(self) -> float:
        return time.perf_counter() - self.start_time

    def get_status(self) -> Dict[str, Any]:
        """Return run status as a JSON-serializable dict."""
        elapsed = self.elapsed()
        return {
            "label": self.label,
            "started_at": self.started_at.isoformat(),
            "elapsed_seconds": round(elapsed, 3),
            "elapsed_readable": self._format_elapsed(elapsed),
            "items": self.items,
            "items_per_second": round(self.items / elapsed, 1) if elapsed > 0 else None,
            "memory_mb": self.sample(),
            "peak_memory_mb": self.peak_rss_mb,
            "platform": platform.system(),
            "python_version": platform.python_version(),
        }

    def log_summary(self, level: int = logging.INFO) -> Dict[str, Any]:
        status = self.get_status()
        logger.log(
            level,
            f"{self.label}: {status['items']} items in {status['elapsed_readable']}, "
            f"peak RSS {status['peak_memory_mb']} MB",
        )
        return status

    @staticmethod
    def _format_elapsed(seconds: float) -> str:
        minutes, secs = divmod(seconds, 60)
        if minutes >= 1:
            return f"{int(minutes)}m {secs:.1f}s"
        return f"{secs:.2f}s"
