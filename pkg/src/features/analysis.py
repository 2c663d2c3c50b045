from __future__ import annotations

"""Closed-form oracles and the bound checks run over a computed trajectory."""

import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from scipy.fft import fft, fftfreq, ifft

from sobolev.curve import (
    CurveGeometry,
    DiscreteCurve,
    central_derivative,
    curvature,
    geometry,
    is_convex,
    length_variation,
)
from sobolev.errors import ConfigurationError, DomainError, NotImmersedError
from sobolev.flow import Trajectory
from sobolev.gradient import convolve, difference_convolution, flow_velocity
from sobolev.kernel import green_integral
from sobolev.types import FlowParams

CheckStatus = Literal["pass", "fail", "not_applicable", "skipped"]

CHECK_ORDER: tuple[str, ...] = (
    "kernel_normalization",
    "kernel_row_sums",
    "velocity_sup_bound",
    "velocity_derivative_bound",
    "form_equivalence",
    "length_monotone",
    "length_decay",
    "sup_norm_monotone",
    "immersion_bound",
    "convexity_bound",
    "energy_identity",
    "circle_oracle",
    "extinction_time",
)

KERNEL_QUADRATURE_SAMPLES = 8192
KERNEL_TOL = 1e-6
ROW_SUM_TOL = 1e-3
VELOCITY_BOUND_TOL = 1e-6
FORM_TOL = 1e-3
DECAY_TOL = 1e-4
SUP_NORM_SLACK = 1e-8
IMMERSION_TOL = 1e-3
CONVEXITY_TOL = 1e-2
ENERGY_TOL = 1e-3
ENERGY_STEP_TOL = 2e-2
CIRCLE_TOL = 1e-3
EXTINCTION_TOL = 1e-2

# energy checks re-evaluate the velocity, so long trajectories are thinned
_MAX_ENERGY_STATES = 64


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def circle_decay_rate(params: FlowParams) -> float:
    """b = (2 pi)^a / (1 + (2 pi lambda)^2), so that a circle obeys r' = -b r^(a-1)."""
    two_pi = 2.0 * math.pi
    return two_pi**params.a / (1.0 + (two_pi * params.lam) ** 2)


def circle_radius_exact(r0: float, t: float, params: FlowParams) -> float:
    """Radius of a round circle at time t; 0 once a finite extinction time has passed."""
    if not (math.isfinite(r0) and r0 > 0):
        raise DomainError(f"r0 must be positive, got {r0!r}")
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"t must be finite and non-negative, got {t!r}")
    b = circle_decay_rate(params)
    if params.a == 2.0:
        return r0 * math.exp(-b * t)
    power = 2.0 - params.a
    base = r0**power - power * b * t
    if base <= 0:
        return 0.0
    return base ** (1.0 / power)


def circle_extinction_time(r0: float, params: FlowParams) -> float:
    """r0^(2-a) / ((2-a) b) for a < 2, infinite otherwise."""
    if not (math.isfinite(r0) and r0 > 0):
        raise DomainError(f"r0 must be positive, got {r0!r}")
    if params.a >= 2.0:
        return math.inf
    power = 2.0 - params.a
    return r0**power / (power * circle_decay_rate(params))


def decay_rate(lam: float) -> float:
    return 4.0 / (1.0 + 8.0 * lam**2)


def decay_envelope(L0: float, t: float, lam: float) -> float:
    """L0 exp(-4t / (1 + 8 lambda^2)), the length bound for a = 2."""
    if not (math.isfinite(L0) and L0 > 0):
        raise DomainError(f"L0 must be positive, got {L0!r}")
    return L0 * math.exp(-decay_rate(lam) * t)


def extinction_time_bound(L0: float, params: FlowParams) -> float:
    """Upper bound L0^(2-a) / ((2-a) beta) on the extinction time, beta = 4/(1+8 lambda^2)."""
    if not (math.isfinite(L0) and L0 > 0):
        raise DomainError(f"L0 must be positive, got {L0!r}")
    if params.a >= 2.0:
        return math.inf
    power = 2.0 - params.a
    return L0**power / (power * decay_rate(params.lam))


def measured_radius(curve: DiscreteCurve) -> float:
    """Mean distance of the samples to their centroid."""
    offsets = curve.points - curve.points.mean(axis=0)
    return float(np.hypot(offsets[:, 0], offsets[:, 1]).mean())


def circularity(curve: DiscreteCurve) -> float:
    """Max over min distance to the centroid; 1 for samples on a round circle."""
    offsets = curve.points - curve.points.mean(axis=0)
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    nearest = float(distances.min())
    return math.inf if nearest == 0 else float(distances.max()) / nearest


# ---------------------------------------------------------------------------
# curvature-convolution form of the velocity
# ---------------------------------------------------------------------------


def _spectral_derivative(values: NDArray[np.float64]) -> NDArray[np.float64]:
    n = values.shape[0]
    wavenumbers = fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        wavenumbers[n // 2] = 0.0
    spectrum = fft(values, axis=0)
    return ifft(2j * np.pi * wavenumbers[:, None] * spectrum, axis=0).real


def _spectral_cumulative(speed: NDArray[np.float64]) -> NDArray[np.float64]:
    # int_0^u s for a periodic s sampled at u_i = i/N
    n = speed.shape[0]
    coefficients = fft(speed) / n
    wavenumbers = fftfreq(n, d=1.0 / n)
    periodic = np.zeros(n, dtype=complex)
    nonzero = wavenumbers != 0
    if n % 2 == 0:
        nonzero[n // 2] = False
    periodic[nonzero] = coefficients[nonzero] / (2j * np.pi * wavenumbers[nonzero])
    antiderivative = ifft(periodic * n).real
    u = np.arange(n) / n
    return coefficients[0].real * u + antiderivative - antiderivative[0]


def curvature_form_velocity(curve: DiscreteCurve, params: FlowParams) -> NDArray[np.float64]:
    """Velocity -L^{a-2} (d^2 g / ds_hat^2 *_g G) from spectral derivatives.

    d/ds_hat = (L/|g'|) d/du is the derivative in normalized arc length. The
    convolution is taken in difference form against the exact kernel integral -1, so
    the kernel kink contributes no quadrature error. Only meaningful for smooth,
    well-resolved curves; independent of the central stencil used by the flow.
    """
    points = curve.points
    n = curve.n
    first = _spectral_derivative(points)
    speed = np.hypot(first[:, 0], first[:, 1])
    stalled = np.flatnonzero(speed <= 0)
    if stalled.size:
        raise NotImmersedError(
            f"curvature form needs an immersion; zero speed at sample {int(stalled[0])}",
            index=int(stalled[0]),
        )
    total = float(speed.mean())
    tangent = total * first / speed[:, None]
    second = (total / speed)[:, None] * _spectral_derivative(tangent)
    geom = CurveGeometry(
        derivative=first,
        speed=speed,
        length=total,
        xi=_spectral_cumulative(speed) / total,
        weights=speed / (n * total),
    )
    convolved = difference_convolution(second, geom, params.kernel) - second
    return -(total ** (params.a - 2.0)) * convolved


# ---------------------------------------------------------------------------
# report types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InitialCurveInfo:
    """What is known about the initial curve beyond its samples."""

    shape: str | None = None
    radius: float | None = None

    @property
    def is_circle(self) -> bool:
        return self.shape == "circle" and self.radius is not None


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check; margin >= 0 (> 0 for strict checks) means it holds."""

    name: str
    anchor: str
    status: CheckStatus
    margin: float = 0.0
    tolerance: float = 0.0
    detail: str = ""
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self, include_runtime: bool = False) -> dict:
        payload = {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "passed": self.passed,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }
        if include_runtime:
            payload["runtime"] = self.runtime
        return payload


@dataclass(frozen=True)
class DiagnosticsReport:
    lam: float
    a: float
    termination: str
    extinction_time: float | None
    records: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def failures(self) -> tuple[CheckRecord, ...]:
        return tuple(record for record in self.records if not record.passed)

    def get(self, name: str) -> CheckRecord:
        for record in self.records:
            if record.name == name:
                return record
        raise KeyError(name)

    def to_dict(self, include_runtime: bool = False) -> dict:
        return {
            "lambda": self.lam,
            "a": self.a,
            "termination": self.termination,
            "extinction_time": self.extinction_time,
            "passed": self.passed,
            "checks": [record.to_dict(include_runtime) for record in self.records],
        }


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Context:
    trajectory: Trajectory
    params: FlowParams
    info: InitialCurveInfo
    explicit: bool


_ANCHORS = {
    "kernel_normalization": "kernel integrates to -1 over one period",
    "kernel_row_sums": "discrete kernel rows sum to -1 on the initial curve",
    "velocity_sup_bound": "max |F| <= L^(a-1) / (2 lambda^2)",
    "velocity_derivative_bound": "|F'| <= L^(a-2) (2/lambda^2) |g'| pointwise and on average",
    "form_equivalence": "difference form agrees with the curvature-convolution form",
    "length_monotone": "length strictly decreases until extinction",
    "length_decay": "L(t) <= L0 exp(-4t/(1+8 lambda^2)) for a = 2",
    "sup_norm_monotone": "max |X| is non-increasing",
    "immersion_bound": "min |X'|^2 >= min |X0'|^2 exp(-4t/lambda^2) for a = 2",
    "convexity_bound": "min k >= min k0 exp(-t/lambda^2) for convex data, a = 2",
    "energy_identity": "dL/dt = -||F||^2 in the H1 metric",
    "circle_oracle": "circles shrink self-similarly with the closed-form radius",
    "extinction_time": "finite extinction for a < 2, within the closed-form bounds",
}


def _record(
    name: str,
    margin: float,
    tolerance: float,
    detail: str = "",
    strict: bool = False,
) -> CheckRecord:
    ok = margin > 0 if strict else margin >= 0
    return CheckRecord(
        name=name,
        anchor=_ANCHORS[name],
        status="pass" if ok and math.isfinite(margin) else "fail",
        margin=float(margin) if math.isfinite(margin) else -1.0,
        tolerance=tolerance,
        detail=detail,
    )


def _inactive(name: str, status: CheckStatus, detail: str) -> CheckRecord:
    return CheckRecord(name=name, anchor=_ANCHORS[name], status=status, detail=detail)


def _initial_geometry(ctx: _Context) -> tuple[DiscreteCurve, CurveGeometry]:
    curve = ctx.trajectory.initial.curve
    return curve, geometry(curve)


def _check_kernel_normalization(ctx: _Context) -> CheckRecord:
    value = green_integral(ctx.params.kernel, KERNEL_QUADRATURE_SAMPLES)
    deviation = abs(value + 1.0)
    return _record(
        "kernel_normalization",
        KERNEL_TOL - deviation,
        KERNEL_TOL,
        f"trapezoid integral {value:.12f} with {KERNEL_QUADRATURE_SAMPLES} samples",
    )


def _check_kernel_row_sums(ctx: _Context) -> CheckRecord:
    _, geom = _initial_geometry(ctx)
    if geom.length <= ctx.params.extinction_length:
        return _inactive("kernel_row_sums", "not_applicable", "initial curve has zero length")
    sums = convolve(geom, np.ones((geom.n, 1)), ctx.params)[:, 0]
    deviation = float(np.abs(sums + 1.0).max())
    return _record(
        "kernel_row_sums",
        ROW_SUM_TOL - deviation,
        ROW_SUM_TOL,
        f"max |row sum + 1| = {deviation:.3e}",
    )


def _check_velocity_sup_bound(ctx: _Context) -> CheckRecord:
    curve, geom = _initial_geometry(ctx)
    if geom.length <= ctx.params.extinction_length:
        return _inactive("velocity_sup_bound", "not_applicable", "initial curve has zero length")
    velocity = flow_velocity(curve, ctx.params, geom)
    bound = geom.length ** (ctx.params.a - 1.0) / (2.0 * ctx.params.lam**2)
    largest = float(np.hypot(velocity[:, 0], velocity[:, 1]).max())
    return _record(
        "velocity_sup_bound",
        1.0 + VELOCITY_BOUND_TOL - largest / bound,
        VELOCITY_BOUND_TOL,
        f"max |F| = {largest:.6g}, bound {bound:.6g}",
    )


def _check_velocity_derivative_bound(ctx: _Context) -> CheckRecord:
    curve, geom = _initial_geometry(ctx)
    if geom.length <= ctx.params.extinction_length:
        return _inactive(
            "velocity_derivative_bound", "not_applicable", "initial curve has zero length"
        )
    params = ctx.params
    velocity = flow_velocity(curve, params, geom)
    derivative = central_derivative(velocity)
    magnitude = np.hypot(derivative[:, 0], derivative[:, 1])
    scale = geom.length ** (params.a - 2.0) * 2.0 / params.lam**2
    pointwise = scale * geom.speed * (1.0 + VELOCITY_BOUND_TOL) - magnitude
    pointwise_margin = float(pointwise.min()) / (scale * float(geom.speed.max()))
    average = float(magnitude.mean())
    average_bound = scale * geom.length
    average_margin = 1.0 + VELOCITY_BOUND_TOL - average / average_bound
    return _record(
        "velocity_derivative_bound",
        min(pointwise_margin, average_margin),
        VELOCITY_BOUND_TOL,
        f"mean |F'| = {average:.6g}, bound {average_bound:.6g}",
    )


def _check_form_equivalence(ctx: _Context) -> CheckRecord:
    curve, geom = _initial_geometry(ctx)
    if geom.length <= ctx.params.extinction_length:
        return _inactive("form_equivalence", "not_applicable", "initial curve has zero length")
    if geom.min_speed <= 0:
        return _inactive("form_equivalence", "skipped", "initial curve is not immersed")
    velocity = flow_velocity(curve, ctx.params, geom)
    oracle = curvature_form_velocity(curve, ctx.params)
    scale = float(np.hypot(velocity[:, 0], velocity[:, 1]).max())
    difference = velocity - oracle
    gap = float(np.hypot(difference[:, 0], difference[:, 1]).max()) / max(scale, 1e-300)
    return _record(
        "form_equivalence", FORM_TOL - gap, FORM_TOL, f"relative max-norm gap {gap:.3e}"
    )


def _check_length_monotone(ctx: _Context) -> CheckRecord:
    lengths = ctx.trajectory.lengths
    if lengths.size < 2:
        return _inactive("length_monotone", "not_applicable", "fewer than two recorded states")
    drops = -np.diff(lengths) / lengths[0]
    return _record(
        "length_monotone",
        float(drops.min()),
        0.0,
        f"smallest relative drop {float(drops.min()):.3e}",
        strict=True,
    )


def _check_length_decay(ctx: _Context) -> CheckRecord:
    if ctx.params.a != 2.0:
        return _inactive("length_decay", "not_applicable", "decay envelope holds for a = 2")
    trajectory = ctx.trajectory
    lengths = trajectory.lengths
    if lengths[0] <= 0:
        return _inactive("length_decay", "not_applicable", "initial curve has zero length")
    envelope = np.array(
        [decay_envelope(float(lengths[0]), float(t), ctx.params.lam) for t in trajectory.times]
    )
    slack = (envelope * (1.0 + DECAY_TOL) - lengths) / lengths[0]
    worst = int(np.argmin(slack))
    return _record(
        "length_decay",
        float(slack[worst]),
        DECAY_TOL,
        f"tightest at t={trajectory.times[worst]:.6g}",
    )


def _check_sup_norm_monotone(ctx: _Context) -> CheckRecord:
    norms = ctx.trajectory.sup_norms
    if norms.size < 2:
        return _inactive("sup_norm_monotone", "not_applicable", "fewer than two recorded states")
    margin = float((norms[:-1] - norms[1:]).min()) + SUP_NORM_SLACK
    return _record("sup_norm_monotone", margin, SUP_NORM_SLACK)


def _check_immersion_bound(ctx: _Context) -> CheckRecord:
    if ctx.params.a != 2.0:
        return _inactive("immersion_bound", "not_applicable", "bound is stated for a = 2")
    trajectory = ctx.trajectory
    speeds = trajectory.min_speeds
    if speeds[0] <= 0:
        return _inactive("immersion_bound", "skipped", "initial curve is not immersed")
    floor = speeds[0] ** 2 * np.exp(-4.0 * trajectory.times / ctx.params.lam**2)
    slack = (speeds**2 - floor * (1.0 - IMMERSION_TOL)) / speeds[0] ** 2
    return _record("immersion_bound", float(slack.min()), IMMERSION_TOL)


def _check_convexity_bound(ctx: _Context) -> CheckRecord:
    if ctx.params.a != 2.0:
        return _inactive("convexity_bound", "not_applicable", "bound is stated for a = 2")
    trajectory = ctx.trajectory
    initial = trajectory.initial.curve
    if trajectory.min_speeds[0] <= 0 or not is_convex(initial):
        return _inactive("convexity_bound", "skipped", "initial curve is not strictly convex")
    k0 = curvature(initial)
    orientation = 1.0 if k0[0] > 0 else -1.0
    floor0 = float((orientation * k0).min())
    margins = []
    for state in trajectory.states:
        if geometry(state.curve).min_speed <= 0:
            detail = f"lost immersion at t={state.t:.6g}"
            return _record("convexity_bound", -1.0, CONVEXITY_TOL, detail)
        k = orientation * curvature(state.curve)
        floor = floor0 * math.exp(-state.t / ctx.params.lam**2) * (1.0 - CONVEXITY_TOL)
        margins.append((float(k.min()) - floor) / floor0)
    return _record("convexity_bound", min(margins), CONVEXITY_TOL)


def _log_mean(x: float, y: float) -> float:
    # exact mean of an exponential through (0, x) and (1, y)
    if abs(x - y) <= 1e-12 * max(x, y):
        return 0.5 * (x + y)
    return (x - y) / (math.log(x) - math.log(y))


def _integrated_energy_gaps(trajectory: Trajectory) -> list[float]:
    """Chord slope of L between recorded states against the mean of -||F||^2 over the step."""
    gaps = []
    diagnostics = trajectory.diagnostics
    for before, after in zip(diagnostics[:-1], diagnostics[1:], strict=True):
        e0, e1 = before.velocity_metric_norm, after.velocity_metric_norm
        if e0 is None or e1 is None or e0 <= 0 or e1 <= 0:
            continue
        slope = (after.length - before.length) / (after.t - before.t)
        mean = _log_mean(e0, e1)
        gaps.append(abs(slope + mean) / mean)
    return gaps


def _check_energy_identity(ctx: _Context) -> CheckRecord:
    trajectory = ctx.trajectory
    states = trajectory.states
    count = min(len(states), _MAX_ENERGY_STATES)
    picks = np.unique(np.linspace(0, len(states) - 1, count).astype(int))
    gaps = []
    for index in picks:
        state = states[index]
        diagnostics = trajectory.diagnostics[index]
        if diagnostics.min_speed <= 0:
            continue
        if diagnostics.velocity_metric_norm is None:
            raise ConfigurationError(
                f"state at t={state.t:.6g} has no velocity metric norm for the energy check"
            )
        energy = diagnostics.velocity_metric_norm
        if energy <= 0:
            continue
        velocity = flow_velocity(state.curve, trajectory.params)
        rate = length_variation(state.curve, velocity)
        gaps.append(abs(rate + energy) / energy)
    if not gaps:
        return _inactive("energy_identity", "not_applicable", "no immersed moving state")
    worst = max(gaps)
    step_gaps = _integrated_energy_gaps(trajectory)
    step_worst = max(step_gaps, default=0.0)
    return _record(
        "energy_identity",
        min(ENERGY_TOL - worst, ENERGY_STEP_TOL - step_worst),
        ENERGY_TOL,
        f"max |dL/dt + ||F||^2| / ||F||^2 = {worst:.3e} over {len(gaps)} states; "
        f"chord slope gap {step_worst:.3e} over {len(step_gaps)} steps",
    )


def _circle_required(ctx: _Context, name: str) -> CheckRecord | None:
    if ctx.info.is_circle:
        return None
    if ctx.explicit:
        raise ConfigurationError(
            f"{name} needs circle metadata (shape and radius) for the initial curve"
        )
    return _inactive(name, "not_applicable", "initial curve is not a known circle")


def _check_circle_oracle(ctx: _Context) -> CheckRecord:
    inactive = _circle_required(ctx, "circle_oracle")
    if inactive is not None:
        return inactive
    r0 = float(ctx.info.radius)
    horizon = 0.9 * circle_extinction_time(r0, ctx.params)
    states = [state for state in ctx.trajectory.states if state.t <= horizon]
    deviations = [
        abs(measured_radius(state.curve) - circle_radius_exact(r0, state.t, ctx.params)) / r0
        for state in states
    ]
    worst = max(deviations)
    roundness = max(circularity(state.curve) for state in states)
    return _record(
        "circle_oracle",
        min(CIRCLE_TOL - worst, CIRCLE_TOL - (roundness - 1.0)),
        CIRCLE_TOL,
        f"max relative radius error {worst:.3e}, max circularity {roundness:.9f} "
        f"over {len(deviations)} states",
    )


def _check_extinction_time(ctx: _Context) -> CheckRecord:
    trajectory = ctx.trajectory
    params = ctx.params
    if params.a >= 2.0:
        return _inactive("extinction_time", "not_applicable", "no finite extinction for a >= 2")
    if not trajectory.extinct or trajectory.extinction_time is None:
        return _inactive("extinction_time", "not_applicable", "run ended before extinction")
    observed = trajectory.extinction_time
    bound = extinction_time_bound(trajectory.lengths[0], params)
    margin = (bound - observed) / bound
    detail = f"extinct at t={observed:.6g}, bound {bound:.6g}"
    if ctx.info.is_circle:
        predicted = circle_extinction_time(float(ctx.info.radius), params)
        margin = min(margin, EXTINCTION_TOL - abs(observed - predicted) / predicted)
        detail += f", closed form {predicted:.6g}"
    return _record("extinction_time", margin, EXTINCTION_TOL, detail)


_CHECKS: dict[str, Callable[[_Context], CheckRecord]] = {
    "kernel_normalization": _check_kernel_normalization,
    "kernel_row_sums": _check_kernel_row_sums,
    "velocity_sup_bound": _check_velocity_sup_bound,
    "velocity_derivative_bound": _check_velocity_derivative_bound,
    "form_equivalence": _check_form_equivalence,
    "length_monotone": _check_length_monotone,
    "length_decay": _check_length_decay,
    "sup_norm_monotone": _check_sup_norm_monotone,
    "immersion_bound": _check_immersion_bound,
    "convexity_bound": _check_convexity_bound,
    "energy_identity": _check_energy_identity,
    "circle_oracle": _check_circle_oracle,
    "extinction_time": _check_extinction_time,
}


def run_checks(
    trajectory: Trajectory,
    params: FlowParams | None = None,
    info: InitialCurveInfo | None = None,
    checks: Sequence[str] | None = None,
) -> DiagnosticsReport:
    """Evaluate the requested checks (all by default) in the fixed CHECK_ORDER."""
    params = trajectory.params if params is None else params
    info = InitialCurveInfo() if info is None else info
    if checks is None:
        selected = CHECK_ORDER
    else:
        unknown = sorted(set(checks) - set(CHECK_ORDER))
        if unknown:
            raise ConfigurationError(f"unknown checks: {', '.join(unknown)}")
        selected = tuple(name for name in CHECK_ORDER if name in set(checks))
    ctx = _Context(trajectory=trajectory, params=params, info=info, explicit=checks is not None)

    records = []
    for name in selected:
        started = time.perf_counter()
        record = _CHECKS[name](ctx)
        runtime = time.perf_counter() - started
        record = replace(record, runtime=runtime)
        logger.debug(f"check {name}: {record.status} (margin {record.margin:.3e}, {runtime:.3f}s)")
        if not record.passed:
            logger.warning(f"check {name} failed: margin {record.margin:.3e}; {record.detail}")
        records.append(record)

    return DiagnosticsReport(
        lam=params.lam,
        a=params.a,
        termination=trajectory.termination,
        extinction_time=trajectory.extinction_time,
        records=tuple(records),
    )
