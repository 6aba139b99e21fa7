"""
Verify - cross-check the fast solver against the oracles on seeded instances.

Each case is generated from (seed, index), solved by the fast solver and the
naive solver, and by the exhaustive enumerator when it is small enough. The
fast solution must also reconstruct to a partition of the same cost and pass
the amortized accounting check.
"""
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Iterable, List, Optional, TextIO

import numpy as np

from chainpart.audit import AuditLogger
from chainpart.instance import (
    SHAPES,
    W0_MODES,
    AugmentedTree,
    Infeasible,
    augment,
    emit_text,
    evaluate_partition,
    generate_random,
)
from chainpart.monitor import RunMonitor
from chainpart.oracle import exhaustive_solve, naive_solve
from chainpart.solver import Solution, reconstruct, solve

logger = logging.getLogger(__name__)

Solver = Callable[[AugmentedTree], Solution]


@dataclass(frozen=True)
class VerifyOptions:
    count: int = 1000
    n_max: int = 200
    seed: int = 0
    workers: int = 1
    exhaustive_max_n: int = 10
    exhaustive_guard: int = 12
    w_max: int = 10
    s_max: int = 100


@dataclass(frozen=True)
class CheckCase:
    index: int
    seed: int
    shape: str
    w0_mode: str
    n: int


@dataclass
class CheckResult:
    case: CheckCase
    instance_text: str
    fast: Optional[int]
    naive: Optional[int]
    exhaustive: Optional[int]
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def plan_cases(options: VerifyOptions) -> List[CheckCase]:
    """
    Deterministic case list cycling through every shape and w0 mode.

    Every other case is kept small enough for the exhaustive enumerator.
    """
    cases = []
    small = max(1, min(options.n_max, options.exhaustive_max_n))
    for k in range(options.count):
        rng = np.random.default_rng([options.seed, k])
        limit = small if k % 2 else max(1, options.n_max)
        n = int(rng.integers(1, limit + 1))
        shape = SHAPES[k % len(SHAPES)]
        mode = W0_MODES[(k // len(SHAPES)) % len(W0_MODES)]
        cases.append(CheckCase(k, int(rng.integers(0, 2**62)), shape, mode, n))
    return cases


def check_case(case: CheckCase, options: VerifyOptions, fast_solver: Solver = solve) -> CheckResult:
    """Solve one case every way available and compare."""
    inst = generate_random(
        case.n, case.w0_mode, case.shape, options.w_max, options.s_max, case.seed
    )
    text = emit_text(inst)
    fast = naive = exhaustive = None
    try:
        t = augment(inst)
        sol = fast_solver(t)
        ref = naive_solve(t)
        fast, naive = sol.optimal, ref.optimal
        if case.n <= min(options.exhaustive_max_n, options.exhaustive_guard):
            exhaustive = exhaustive_solve(inst, options.exhaustive_guard)

        if list(sol.F) != list(ref.F):
            bad = next(v for v, (a, b) in enumerate(zip(sol.F, ref.F), start=1) if a != b)
            return CheckResult(case, text, fast, naive, exhaustive, "mismatch",
                               f"F[{bad}] fast={sol.F[bad - 1]} naive={ref.F[bad - 1]}")
        if exhaustive is not None and exhaustive != fast:
            return CheckResult(case, text, fast, naive, exhaustive, "mismatch",
                               "exhaustive optimum differs")
        rebuilt = evaluate_partition(inst, reconstruct(t, sol))
        if isinstance(rebuilt, Infeasible) or rebuilt != fast:
            return CheckResult(case, text, fast, naive, exhaustive, "mismatch",
                               f"reconstructed partition evaluates to {rebuilt}")
        if sol.stats is not None:
            sol.stats.assert_amortized()
    except AssertionError as e:
        return CheckResult(case, text, fast, naive, exhaustive, "mismatch", str(e))
    except Exception as e:
        logger.error(f"Case {case.index} crashed: {e}", exc_info=True)
        return CheckResult(case, text, fast, naive, exhaustive, "error",
                           f"{type(e).__name__}: {e}")
    return CheckResult(case, text, fast, naive, exhaustive, "ok")


class Verifier:
    """
    Run a batch of checks and summarize them.

    Args:
        options: Batch parameters
        audit: Optional audit trail receiving one record per case
        out: Stream for the pass count and the mismatch dump
        fast_solver: Solver under test; anything but the default runs in-process
    """

    def __init__(
        self,
        options: VerifyOptions,
        audit: Optional[AuditLogger] = None,
        out: Optional[TextIO] = None,
        fast_solver: Solver = solve,
    ):
        self.options = options
        self.audit = audit or AuditLogger()
        self.out = out or sys.stdout
        self.fast_solver = fast_solver
        self.checks_passed = 0
        self.checks_failed = 0
        self.first_failure: Optional[CheckResult] = None
        self.monitor = RunMonitor("verify")

    def _results(self, cases: List[CheckCase]) -> Iterable[CheckResult]:
        workers = max(1, self.options.workers)
        if workers == 1 or self.fast_solver is not solve:
            return (check_case(c, self.options, self.fast_solver) for c in cases)
        logger.info(f"Checking {len(cases)} cases on {workers} workers")
        chunk = max(1, len(cases) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            check = partial(check_case, options=self.options)
            return list(executor.map(check, cases, chunksize=chunk))

    def run(self) -> int:
        """
        Check every planned case.

        Returns:
            0 if all cases match, 1 otherwise
        """
        cases = plan_cases(self.options)
        for result in self._results(cases):
            c = result.case
            self.audit.log_check(
                c.seed, c.shape, c.w0_mode, c.n, result.instance_text,
                result.fast, result.naive, result.exhaustive, result.status,
            )
            self.monitor.record()
            if result.ok:
                self.checks_passed += 1
                continue
            self.checks_failed += 1
            if self.first_failure is None:
                self.first_failure = result
                self._dump(result)
        return self._print_summary()

    def _dump(self, result: CheckResult) -> None:
        c = result.case
        print(f"MISMATCH case {c.index} (seed {c.seed}, {c.shape}, {c.w0_mode}, n={c.n})",
              file=self.out)
        print(f"  {result.detail}", file=self.out)
        print(f"  fast={result.fast} naive={result.naive} exhaustive={result.exhaustive}",
              file=self.out)
        print("  instance:", file=self.out)
        for line in result.instance_text.splitlines():
            print(f"    {line}", file=self.out)

    def _print_summary(self) -> int:
        total = self.checks_passed + self.checks_failed
        status = "OK" if self.checks_failed == 0 else "FAILED"
        print(f"{self.checks_passed}/{total} {status}", file=self.out)
        self.monitor.log_summary()
        return 0 if self.checks_failed == 0 else 1
