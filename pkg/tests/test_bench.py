"""
Tests for benchmarking and run monitoring.
"""

import io

import pytest

from chainpart.bench import CSV_HEADER, parse_sizes, run_bench, scaling_slope
from chainpart.monitor import RunMonitor


class TestParseSizes:
    """Size list parsing."""

    def test_list(self):
        assert parse_sizes("10000,20000") == [10000, 20000]

    def test_spaces_and_trailing_comma(self):
        assert parse_sizes(" 5, 6 ,") == [5, 6]

    @pytest.mark.parametrize("text", ["", "abc", "10,-3", "0"])
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            parse_sizes(text)


class TestScalingSlope:
    """Log-log slope estimate."""

    def test_linear(self):
        sizes = [1000, 2000, 4000, 8000]
        assert scaling_slope(sizes, [0.5 * n for n in sizes]) == pytest.approx(1.0)

    def test_quadratic(self):
        sizes = [100, 200, 400]
        assert scaling_slope(sizes, [n * n for n in sizes]) == pytest.approx(2.0)

    def test_single_size(self):
        assert scaling_slope([1000], [3.0]) is None


class TestRunBench:
    """CSV rows and medians."""

    def test_rows(self):
        out = io.StringIO()
        result = run_bench([50, 100], shape="star", reps=2, seed=1, warmup=False, out=out)
        lines = out.getvalue().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 5
        assert [r["n"] for r in result.rows] == [50, 50, 100, 100]
        assert [r["rep"] for r in result.rows] == [0, 1, 0, 1]
        assert set(result.medians) == {50, 100}
        assert result.slope is not None

    def test_one_rep(self):
        out = io.StringIO()
        result = run_bench([30], reps=1, out=out)
        assert len(out.getvalue().splitlines()) == 2
        assert result.slope is None
        assert result.rows[0]["solve_ms"] >= 0


class TestRunMonitor:
    """Elapsed time and memory tracking."""

    def test_initialize(self):
        monitor = RunMonitor("unit")
        assert monitor.items == 0
        assert monitor.peak_rss_mb > 0

    def test_record(self):
        monitor = RunMonitor()
        monitor.record()
        monitor.record(4)
        assert monitor.items == 5

    def test_get_status(self):
        monitor = RunMonitor("unit")
        monitor.record(3)
        status = monitor.get_status()
        assert status["label"] == "unit"
        assert status["items"] == 3
        assert status["peak_memory_mb"] >= status["memory_mb"] > 0
        assert "python_version" in status

    def test_format_elapsed(self):
        assert RunMonitor._format_elapsed(2.5) == "2.50s"
        assert RunMonitor._format_elapsed(125.0) == "2m 5.0s"

    def test_sample_tracks_peak(self):
        monitor = RunMonitor()
        monitor.peak_rss_mb = 0.0
        rss = monitor.sample()
        assert monitor.peak_rss_mb == rss > 0
