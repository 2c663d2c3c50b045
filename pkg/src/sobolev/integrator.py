from __future__ import annotations

"""Runge-Kutta-Fehlberg 4(5) embedded pair and its step-size controller.

Six stages; the 4th-order solution is propagated and the difference to the 5th-order
solution is the local error estimate. Right-hand sides are autonomous, `rhs(y) -> dy/dt`.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from sobolev.errors import BlowUpError

NODES = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)

COUPLING: tuple[tuple[float, ...], ...] = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)

WEIGHTS = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)

# 5th-order weights minus 4th-order weights
ERROR_WEIGHTS = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

ORDER = 4

Rhs = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, eq=False)
class EmbeddedStep:
    """Propagated solution and the componentwise local error estimate."""

    y: NDArray[np.float64]
    error: NDArray[np.float64]


def embedded_step(
    rhs: Rhs,
    y: NDArray[np.float64],
    dt: float,
    t: float = 0.0,
    first_stage: NDArray[np.float64] | None = None,
) -> EmbeddedStep:
    """One RKF45 step of size dt from y; `first_stage` reuses an already evaluated rhs(y)."""
    stages: list[NDArray[np.float64]] = []
    for index, row in enumerate(COUPLING):
        if index == 0 and first_stage is not None:
            slope = first_stage
        else:
            y_stage = y
            for coefficient, slope_j in zip(row, stages, strict=False):
                if coefficient:
                    y_stage = y_stage + (dt * coefficient) * slope_j
            if not np.all(np.isfinite(y_stage)):
                raise BlowUpError(t + NODES[index] * dt, index + 1)
            slope = rhs(y_stage)
        if not np.all(np.isfinite(slope)):
            raise BlowUpError(t + NODES[index] * dt, index + 1)
        stages.append(slope)

    y_new = y + dt * sum(b * k for b, k in zip(WEIGHTS, stages, strict=True) if b)
    error = dt * sum(e * k for e, k in zip(ERROR_WEIGHTS, stages, strict=True) if e)
    if not np.all(np.isfinite(y_new)):
        raise BlowUpError(t + dt, len(stages))
    return EmbeddedStep(y=y_new, error=error)


def next_step_size(
    dt: float,
    error_ratio: float,
    safety: float = 0.9,
    min_factor: float = 0.2,
    max_factor: float = 5.0,
) -> float:
    """Proportional controller: dt * safety * ratio^(-1/(order+1)), clipped to a factor range."""
    if error_ratio <= 0:
        return dt * max_factor
    factor = safety * error_ratio ** (-1.0 / (ORDER + 1))
    return dt * min(max_factor, max(min_factor, factor))
