"""Command-line entry point: evolve, gradient, verify, circle-oracle and benchmark."""

import json
import sys
from collections.abc import Callable, Sequence

import numpy as np
from dotenv import load_dotenv
from loguru import logger

from features.analysis import (
    circle_decay_rate,
    circle_extinction_time,
    circle_radius_exact,
    run_checks,
)
from features.benchmark import time_fast_path
from features.verify import run_verification
from sobolev.curve import geometry, warn_if_rough
from sobolev.errors import FlowError, InputError, UsageError
from sobolev.flow import evolve
from sobolev.gradient import flow_velocity
from utils.config import RunConfig, parse_config
from utils.db import RunStore
from utils.helpers import configure_logging
from utils.io import write_report, write_trajectory
from utils.render import RenderOptions, render_frames

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


def run_evolve(config: RunConfig) -> int:
    spec = config.curve
    curve0 = spec.build()
    warn_if_rough(curve0)
    trajectory = evolve(curve0, config.params, config.ctrl, config.t_end, stride=config.stride)
    out = config.output_dir
    write_trajectory(trajectory, out, points_every=config.points_every)
    if config.frames:
        render_frames(
            trajectory,
            out / "frames",
            RenderOptions(size=config.frame_size, rescaled=config.rescaled),
        )

    final_length = float(trajectory.lengths[-1])
    print(f"termination: {trajectory.termination} at t={trajectory.final.t:.10g}")
    print(f"steps: {trajectory.steps} accepted, {trajectory.rejected} rejected")
    print(f"length: {trajectory.lengths[0]:.10g} -> {final_length:.10g}")
    if trajectory.extinction_time is not None:
        print(f"extinction time: {trajectory.extinction_time:.10g}")
    info = spec.info()
    if info.is_circle and config.params.a < 2:
        predicted = circle_extinction_time(info.radius, config.params)
        print(f"closed-form circle extinction time: {predicted:.10g}")

    store = RunStore.in_directory(out)
    run_id = store.add_run(
        command="evolve",
        shape=spec.label,
        lam=config.params.lam,
        a=config.params.a,
        n=curve0.n,
        termination=trajectory.termination,
        final_length=final_length,
        extinction_time=trajectory.extinction_time,
        output_dir=str(out),
    )
    if config.checks:
        report = run_checks(trajectory, trajectory.params, info)
        write_report(report, out / "report.json", include_runtime=config.timings)
        store.add_report(run_id, report.passed, [record.name for record in report.failures])
        for record in report.records:
            print(f"  {record.status:<15} {record.name:<26} margin {record.margin:+.3e}")
        print(f"checks: {'all passed' if report.passed else 'FAILED'}")
    store.close()
    return EXIT_OK


def run_gradient(config: RunConfig) -> int:
    curve = config.curve.build()
    velocity = flow_velocity(curve, config.params)
    payload = {
        "lambda": config.params.lam,
        "a": config.params.a,
        "length": geometry(curve).length,
        "points": curve.points.tolist(),
        "velocity": velocity.tolist(),
    }
    print(json.dumps(payload))
    return EXIT_OK


def run_verify(config: RunConfig) -> int:
    results = run_verification(
        config.lambdas,
        a=config.params.a,
        n=config.n,
        t_end=config.t_end,
        rel_tol=config.ctrl.rel_tol,
        workers=config.workers,
    )
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    store = RunStore.in_directory(out)
    summary = []
    for result in results:
        metrics = dict(result.metrics)
        if not config.timings:
            metrics.pop("elapsed_ms", None)
        summary.append(
            {
                "case": result.case,
                "lambda": result.lam,
                "a": result.a,
                "passed": result.passed,
                "error": result.error,
                "metrics": metrics,
                "report": (
                    result.report.to_dict(config.timings) if result.report is not None else None
                ),
            }
        )
        trajectory = result.trajectory
        run_id = store.add_run(
            command="verify",
            shape=result.case,
            lam=result.lam,
            a=result.a,
            n=config.n,
            termination=trajectory.termination if trajectory is not None else "error",
            final_length=float(trajectory.lengths[-1]) if trajectory is not None else None,
            extinction_time=trajectory.extinction_time if trajectory is not None else None,
            extra={"error": result.error},
        )
        if result.report is not None:
            store.add_report(run_id, result.report.passed, metrics.get("failed_checks", []))
        verdict = "PASS" if result.passed else "FAIL"
        print(f"{verdict} {result.case:<8} lambda={result.lam:<6g} {result.error or ''}".rstrip())
    store.close()
    (out / "verify.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")

    if any(result.error is not None for result in results):
        return EXIT_NUMERICAL
    return EXIT_OK if all(result.passed for result in results) else EXIT_CHECKS_FAILED


def run_circle_oracle(config: RunConfig) -> int:
    params = config.params
    r0 = config.radius
    print(f"b = {circle_decay_rate(params):.12g}")
    print(f"extinction time = {circle_extinction_time(r0, params):.12g}")
    print("t,radius,length")
    for t in np.linspace(0.0, config.t_end, config.samples):
        radius = circle_radius_exact(r0, float(t), params)
        print(f"{t:.12g},{radius:.12g},{2 * np.pi * radius:.12g}")
    return EXIT_OK


def run_benchmark(config: RunConfig) -> int:
    curve = config.curve.build()
    result = time_fast_path(curve, config.params, repeats=config.repeats)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(result.to_dict(), indent=2) + "\n"
    (out / "benchmark.json").write_text(payload, encoding="utf-8")
    print(json.dumps(result.to_dict()))
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "evolve": run_evolve,
    "gradient": run_gradient,
    "verify": run_verify,
    "circle-oracle": run_circle_oracle,
    "benchmark": run_benchmark,
}


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    configure_logging()
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
        configure_logging(config.log_level)
        return HANDLERS[config.command](config)
    except UsageError as exc:
        logger.error(f"usage error: {exc}")
        return EXIT_USAGE
    except (InputError, OSError) as exc:
        logger.error(f"input error: {exc}")
        return EXIT_INPUT
    except FlowError as exc:
        logger.error(f"numerical failure: {type(exc).__name__}: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
