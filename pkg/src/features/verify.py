from __future__ import annotations

"""Batch verification: evolve a small corpus of smooth curves and run every check.

Each case is isolated: a numerical failure is captured in its CaseResult instead of
aborting the batch.
"""

import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from loguru import logger

from features.analysis import DiagnosticsReport, InitialCurveInfo, run_checks
from sobolev.curve import DiscreteCurve, circle, ellipse, star
from sobolev.errors import FlowError
from sobolev.flow import Trajectory, evolve
from sobolev.types import FlowParams, StepControl


@dataclass(frozen=True)
class CorpusCase:
    """A named initial curve builder plus what the checks may know about it."""

    name: str
    build: Callable[[int], DiscreteCurve]
    info: InitialCurveInfo = field(default_factory=InitialCurveInfo)


DEFAULT_CORPUS: tuple[CorpusCase, ...] = (
    CorpusCase("circle", lambda n: circle(1.0, n), InitialCurveInfo("circle", 1.0)),
    CorpusCase("ellipse", lambda n: ellipse(2.0, 1.0, n), InitialCurveInfo("ellipse")),
    CorpusCase("star", lambda n: star(3, 0.2, n), InitialCurveInfo("star")),
)


@dataclass
class CaseResult:
    """Outcome of one corpus case with its report, error and run metrics."""

    case: str
    lam: float
    a: float
    report: DiagnosticsReport | None = None
    trajectory: Trajectory | None = None
    error: str | None = None
    metrics: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.error is None and self.report is not None and self.report.passed


def run_case(
    case: CorpusCase,
    params: FlowParams,
    ctrl: StepControl,
    n: int,
    t_end: float,
    stride: int = 1,
) -> CaseResult:
    """Evolve one corpus curve and check the trajectory."""
    result = CaseResult(case=case.name, lam=params.lam, a=params.a)
    started = time.perf_counter()
    try:
        trajectory = evolve(case.build(n), params, ctrl, t_end, stride=stride)
        result.trajectory = trajectory
        result.report = run_checks(trajectory, params, case.info)
        result.metrics.update(
            {
                "steps": trajectory.steps,
                "rejected": trajectory.rejected,
                "termination": trajectory.termination,
                "final_length": float(trajectory.lengths[-1]),
                "extinction_time": trajectory.extinction_time,
                "failed_checks": [record.name for record in result.report.failures],
            }
        )
    except FlowError as exc:
        logger.error(f"verify case {case.name} (lambda={params.lam}, a={params.a}) failed: {exc}")
        result.error = f"{type(exc).__name__}: {exc}"
    result.metrics["elapsed_ms"] = round((time.perf_counter() - started) * 1000, 2)
    return result


def run_verification(
    lams: Sequence[float],
    a: float = 2.0,
    n: int = 512,
    t_end: float = 1.0,
    rel_tol: float | None = None,
    corpus: Sequence[CorpusCase] = DEFAULT_CORPUS,
    workers: int = 1,
) -> list[CaseResult]:
    """Run every corpus case for every lambda; results come back in corpus order."""
    jobs = [
        (case, FlowParams(lam=lam, a=a))
        for lam in lams
        for case in corpus
    ]
    logger.info(f"verify: {len(jobs)} cases, N={n}, t_end={t_end}, workers={workers}")

    def work(job: tuple[CorpusCase, FlowParams]) -> CaseResult:
        case, params = job
        ctrl = StepControl.for_params(params, rel_tol=rel_tol)
        return run_case(case, params, ctrl, n, t_end)

    if workers <= 1:
        results = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, jobs))

    passed = sum(result.passed for result in results)
    logger.info(f"verify finished: {passed}/{len(results)} cases passed")
    return results
