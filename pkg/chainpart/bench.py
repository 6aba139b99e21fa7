"""
Bench - wall-clock scaling measurements of the fast solver.

Only solve() is timed; generation and augmentation happen before the clock
starts. Per-size medians and the log-log slope of median time against n are
logged at the end, so the CSV on stdout stays clean.
"""
import csv
import logging
import sys
import timeit
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO

import numpy as np

from chainpart.instance import augment, generate_random
from chainpart.monitor import RunMonitor
from chainpart.solver import solve

logger = logging.getLogger(__name__)

CSV_HEADER = ("n", "shape", "seed", "rep", "solve_ms")


@dataclass
class BenchResult:
    rows: List[Dict[str, object]] = field(default_factory=list)
    medians: Dict[int, float] = field(default_factory=dict)
    slope: Optional[float] = None


def parse_sizes(text: str) -> List[int]:
    """
    Parse a comma-separated size list such as "10000,20000".

    Raises:
        ValueError: If any entry is not a positive integer
    """
    sizes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            n = int(part)
        except ValueError:
            raise ValueError(f"invalid size {part!r}") from None
        if n < 1:
            raise ValueError(f"size must be positive, got {n}")
        sizes.append(n)
    if not sizes:
        raise ValueError("empty size list")
    return sizes


def scaling_slope(sizes: Sequence[int], medians: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(median) against log(n); None with fewer than two sizes."""
    points = [(n, m) for n, m in zip(sizes, medians) if m > 0]
    if len({n for n, _ in points}) < 2:
        return None
    x = np.log([n for n, _ in points])
    y = np.log([m for _, m in points])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def run_bench(
    sizes: Sequence[int],
    shape: str = "uniform-attach",
    reps: int = 3,
    seed: int = 0,
    warmup: bool = True,
    w0_mode: str = "tight",
    w_max: int = 10,
    s_max: int = 100,
    out: Optional[TextIO] = None,
) -> BenchResult:
    """
    Time solve() on one generated instance per size.

    Args:
        sizes: Vertex counts to measure
        reps: Timed repetitions per size
        warmup: Run and discard one extra repetition first
        out: CSV destination (stdout by default)
    """
    out = out or sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    result = BenchResult()
    monitor = RunMonitor("bench")

    for n in sizes:
        inst = generate_random(n, w0_mode, shape, w_max, s_max, seed)
        t = augment(inst)
        if warmup:
            solve(t)
        times = []
        for rep in range(reps):
            start = timeit.default_timer()
            solve(t)
            elapsed_ms = (timeit.default_timer() - start) * 1000.0
            times.append(elapsed_ms)
            row = {"n": n, "shape": shape, "seed": seed, "rep": rep, "solve_ms": round(elapsed_ms, 3)}
            writer.writerow([row[k] for k in CSV_HEADER])
            result.rows.append(row)
        monitor.record(reps)
        if times:
            result.medians[n] = float(np.median(times))
            logger.info(
                f"n={n}: median {result.medians[n]:.1f} ms over {reps} reps, "
                f"RSS {monitor.sample()} MB"
            )

    ordered = sorted(result.medians)
    result.slope = scaling_slope(ordered, [result.medians[n] for n in ordered])
    if result.slope is not None:
        logger.info(f"log-log slope of median solve time vs n: {result.slope:.3f}")
    monitor.log_summary()
    return result
