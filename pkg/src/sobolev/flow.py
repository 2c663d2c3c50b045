from __future__ import annotations

"""Time integration of the length gradient flow and the a <-> 2 time reparametrisations.

The state is integrated in the fixed parameter u (a Lagrangian grid); points are only
redistributed when `StepControl.resample_every` asks for it.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sobolev.curve import (
    DiscreteCurve,
    curvature,
    geometry,
    is_convex,
    length,
    resample_constant_speed,
    sup_norm,
)
from sobolev.errors import DomainError, StiffnessError
from sobolev.gradient import flow_velocity, metric_inner, stage_velocity
from sobolev.integrator import embedded_step, next_step_size
from sobolev.types import FlowParams, StepControl


@dataclass(frozen=True)
class FlowState:
    """Flow time and the curve at that time."""

    t: float
    curve: DiscreteCurve


@dataclass(frozen=True)
class StateDiagnostics:
    """Per-state quantities checked against the decay, sup-norm, immersion and convexity bounds.

    Curvature fields are None when the curve is not immersed.
    """

    t: float
    length: float
    sup_norm: float
    min_speed: float
    min_curvature: float | None
    convex: bool | None
    velocity_metric_norm: float | None


@dataclass(frozen=True)
class StepResult:
    """State after one embedded step and the max-norm of its local error estimate."""

    state: FlowState
    error: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states (initial and final always included) with aligned diagnostics."""

    states: tuple[FlowState, ...]
    diagnostics: tuple[StateDiagnostics, ...]
    params: FlowParams
    steps: int = 0
    rejected: int = 0
    termination: str = "t_end"
    extinction_time: float | None = None
    step_sizes: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.states:
            raise DomainError("a trajectory needs at least one state")
        if len(self.states) != len(self.diagnostics):
            raise DomainError("diagnostics must be aligned with states")
        times = np.array([state.t for state in self.states])
        if np.any(np.diff(times) <= 0):
            raise DomainError("trajectory timestamps must be strictly increasing")

    @property
    def initial(self) -> FlowState:
        return self.states[0]

    @property
    def final(self) -> FlowState:
        return self.states[-1]

    @property
    def times(self) -> NDArray[np.float64]:
        return np.array([d.t for d in self.diagnostics])

    @property
    def lengths(self) -> NDArray[np.float64]:
        return np.array([d.length for d in self.diagnostics])

    @property
    def sup_norms(self) -> NDArray[np.float64]:
        return np.array([d.sup_norm for d in self.diagnostics])

    @property
    def min_speeds(self) -> NDArray[np.float64]:
        return np.array([d.min_speed for d in self.diagnostics])

    @property
    def min_curvatures(self) -> NDArray[np.float64]:
        """NaN where the state is not immersed."""
        return np.array(
            [np.nan if d.min_curvature is None else d.min_curvature for d in self.diagnostics]
        )

    @property
    def extinct(self) -> bool:
        return self.termination == "extinction"


def diagnose(state: FlowState, params: FlowParams) -> StateDiagnostics:
    """Length, sup-norm, minimum speed, minimum curvature and ||F||^2 in the metric."""
    curve = state.curve
    geom = geometry(curve)
    min_speed = geom.min_speed
    min_curvature = None
    convex = None
    metric_norm = None
    if min_speed > 0:
        k = curvature(curve)
        min_curvature = float(k.min())
        convex = is_convex(curve)
        velocity = flow_velocity(curve, params, geom)
        metric_norm = metric_inner(geom, velocity, velocity, params)
    return StateDiagnostics(
        t=state.t,
        length=geom.length,
        sup_norm=sup_norm(curve),
        min_speed=min_speed,
        min_curvature=min_curvature,
        convex=convex,
        velocity_metric_norm=metric_norm,
    )


def build_trajectory(
    states: Sequence[FlowState], params: FlowParams, **details: object
) -> Trajectory:
    """Wrap recorded states into a Trajectory, computing the diagnostics of each."""
    return Trajectory(
        states=tuple(states),
        diagnostics=tuple(diagnose(state, params) for state in states),
        params=params,
        **details,
    )


def _velocity_rhs(params: FlowParams):
    def rhs(points: NDArray[np.float64]) -> NDArray[np.float64]:
        return stage_velocity(DiscreteCurve(points), params)

    return rhs


def step(
    state: FlowState,
    dt: float,
    params: FlowParams,
    first_stage: NDArray[np.float64] | None = None,
) -> StepResult:
    """One RKF45 step of dX/dt = F(X); a zero-length state is a fixed point."""
    if not (math.isfinite(dt) and dt > 0):
        raise DomainError(f"step size must be positive and finite, got {dt!r}")
    result = embedded_step(
        _velocity_rhs(params), state.curve.points, dt, t=state.t, first_stage=first_stage
    )
    error = float(np.hypot(result.error[:, 0], result.error[:, 1]).max())
    return StepResult(state=FlowState(state.t + dt, DiscreteCurve(result.y)), error=error)


def evolve(
    curve0: DiscreteCurve,
    params: FlowParams,
    ctrl: StepControl,
    t_end: float,
    stride: int = 1,
) -> Trajectory:
    """Integrate until t_end, extinction (length <= extinction_eps * L0) or max_steps.

    Every `stride`-th accepted step is recorded, plus the initial and the final state.
    """
    if not (math.isfinite(t_end) and t_end >= 0):
        raise DomainError(f"t_end must be finite and non-negative, got {t_end!r}")
    if stride < 1:
        raise DomainError(f"stride must be at least 1, got {stride}")

    initial_length = length(curve0)
    if initial_length > 0:
        params = replace(params, reference_length=initial_length)
    threshold = params.extinction_length
    state = FlowState(0.0, curve0)
    recorded = [state]
    step_sizes: list[float] = []
    steps = 0
    rejected = 0
    termination = "t_end"
    extinction_time: float | None = None

    logger.info(
        f"evolve: N={curve0.n}, lambda={params.lam}, a={params.a}, t_end={t_end}, "
        f"L0={initial_length:.6g}"
    )
    if initial_length <= threshold:
        logger.success("initial curve is already a constant map")
        return build_trajectory(
            recorded, params, termination="extinction", extinction_time=0.0
        )

    rhs = _velocity_rhs(params)
    current_length = initial_length
    dt = ctrl.dt_init
    next_resample = ctrl.resample_every
    first_stage: NDArray[np.float64] | None = None

    while state.t < t_end:
        if steps >= ctrl.max_steps:
            termination = "max_steps"
            logger.warning(f"stopped after max_steps={ctrl.max_steps} at t={state.t:.6g}")
            break
        if first_stage is None:
            first_stage = rhs(state.curve.points)
        remaining = t_end - state.t
        if ctrl.adaptive:
            fastest = float(np.hypot(first_stage[:, 0], first_stage[:, 1]).max())
            trial = min(dt, remaining)
            if fastest > 0:
                trial = min(trial, ctrl.max_displacement * current_length / fastest)
        else:
            trial = min(ctrl.dt_init, remaining)

        result = step(state, trial, params, first_stage=first_stage)
        error_ratio = result.error / (ctrl.rel_tol * current_length)

        if ctrl.adaptive and error_ratio > 1.0:
            rejected += 1
            if trial <= ctrl.dt_min:
                logger.error(f"step size underflow at t={state.t:.6g}")
                raise StiffnessError(state.t, trial, error_ratio)
            dt = max(next_step_size(trial, error_ratio), ctrl.dt_min)
            logger.debug(f"rejected dt={trial:.3e} (ratio {error_ratio:.3g}), retry {dt:.3e}")
            continue

        steps += 1
        step_sizes.append(trial)
        state = result.state
        first_stage = None
        if trial == remaining:
            state = FlowState(t_end, state.curve)
        if next_resample is not None and state.t >= next_resample:
            state = FlowState(state.t, resample_constant_speed(state.curve, state.curve.n))
            next_resample += ctrl.resample_every
        current_length = length(state.curve)
        if ctrl.adaptive:
            dt = min(max(next_step_size(trial, error_ratio), ctrl.dt_min), ctrl.dt_max)

        if current_length <= threshold:
            termination = "extinction"
            extinction_time = state.t
            logger.success(f"extinction at t={state.t:.6g} after {steps} steps")
            break
        if steps % stride == 0:
            recorded.append(state)

    if recorded[-1] is not state:
        recorded.append(state)
    logger.info(
        f"evolve finished: {termination} at t={state.t:.6g}, {steps} steps, {rejected} rejected"
    )
    return build_trajectory(
        recorded,
        params,
        steps=steps,
        rejected=rejected,
        termination=termination,
        extinction_time=extinction_time,
        step_sizes=tuple(step_sizes),
    )


@dataclass(frozen=True, eq=False)
class TimeMap:
    """Tabulated increasing map from one flow's time (`source`) to the other's (`target`)."""

    source: NDArray[np.float64]
    target: NDArray[np.float64]

    def __call__(self, tau: ArrayLike) -> NDArray[np.float64] | float:
        values = np.interp(tau, self.source, self.target)
        return float(values) if np.ndim(values) == 0 else values

    def inverse(self, s: ArrayLike) -> NDArray[np.float64] | float:
        values = np.interp(s, self.target, self.source)
        return float(values) if np.ndim(values) == 0 else values

    @property
    def source_end(self) -> float:
        """Source time at which the tabulated target range is exhausted."""
        return float(self.source[-1])


def _reparametrise(
    times: ArrayLike,
    lengths: ArrayLike,
    exponent: float,
    rel_tol: float = 1e-10,
    max_steps: int = 100_000,
) -> TimeMap:
    # integrates y' = l(y)^exponent, y(0) = 0, against the linear interpolant of l
    times = np.asarray(times, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    if times.ndim != 1 or times.shape != lengths.shape or times.size < 2:
        raise DomainError("need matching 1-d time and length tables with at least 2 entries")
    if times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise DomainError("times must start at 0 and increase strictly")
    if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
        raise DomainError("time reparametrisation needs positive finite lengths")
    if exponent == 0:
        return TimeMap(source=times.copy(), target=times.copy())

    horizon = float(times[-1])

    def rhs(y: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.interp(y, times, lengths) ** exponent

    tau = 0.0
    y = np.zeros(1)
    source = [0.0]
    target = [0.0]
    dt = 1e-3 * horizon / float(rhs(y)[0])
    for _ in range(max_steps):
        if y[0] >= horizon:
            break
        result = embedded_step(rhs, y, dt, t=tau)
        error_ratio = abs(float(result.error[0])) / (rel_tol * horizon)
        if error_ratio > 1.0:
            dt = next_step_size(dt, error_ratio)
            continue
        tau += dt
        y = result.y
        source.append(tau)
        target.append(float(y[0]))
        dt = next_step_size(dt, error_ratio)
    else:
        logger.warning(f"time map stopped after {max_steps} steps before the table end")

    source_arr = np.array(source)
    target_arr = np.array(target)
    if target_arr[-1] > horizon:
        # clip the overshooting last step back onto the table end
        fraction = (horizon - target_arr[-2]) / (target_arr[-1] - target_arr[-2])
        source_arr[-1] = source_arr[-2] + fraction * (source_arr[-1] - source_arr[-2])
        target_arr[-1] = horizon
    return TimeMap(source=source_arr, target=target_arr)


def time_map_to_a(times: ArrayLike, lengths: ArrayLike, a: float) -> TimeMap:
    """phi with phi' = l(phi)^{a-2}, phi(0) = 0, for lengths l of an a = 2 trajectory.

    Y(u, phi(tau)) then solves the flow with exponent a in the time tau.
    """
    return _reparametrise(times, lengths, a - 2.0)


def time_map_to_2(times: ArrayLike, lengths: ArrayLike, a: float) -> TimeMap:
    """theta with theta' = l(theta)^{2-a}, theta(0) = 0, for lengths l of an exponent-a run."""
    return _reparametrise(times, lengths, 2.0 - a)


def retime_trajectory(trajectory: Trajectory, time_map: TimeMap, params: FlowParams) -> Trajectory:
    """Relabel each state with the source time of `time_map` at its own time.

    With a map from `time_map_to_a` built on this a = 2 trajectory, the result is the
    exponent-`params.a` flow of the same initial curve. States past the tabulated range
    are dropped.
    """
    end = float(time_map.target[-1])
    states = [
        FlowState(float(time_map.inverse(state.t)), state.curve)
        for state in trajectory.states
        if state.t <= end
    ]
    initial_length = trajectory.lengths[0]
    if initial_length > 0:
        params = replace(params, reference_length=float(initial_length))
    extinction_time = trajectory.extinction_time
    if extinction_time is not None and extinction_time <= end:
        extinction_time = float(time_map.inverse(extinction_time))
    else:
        extinction_time = None
    return build_trajectory(
        states,
        params,
        steps=trajectory.steps,
        rejected=trajectory.rejected,
        termination=trajectory.termination,
        extinction_time=extinction_time,
    )
