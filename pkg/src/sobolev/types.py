from __future__ import annotations

"""Shared parameter types for gradient evaluation and time integration."""

import math
from dataclasses import dataclass

from sobolev.errors import DomainError
from sobolev.kernel import KernelParams


def _require_positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class FlowParams:
    """Metric parameters (lambda, a) plus the length threshold of the zero-velocity branch.

    The branch is taken when the length drops to `extinction_eps * reference_length`.
    `reference_length` is 1 for standalone velocity evaluations, so `extinction_eps` is an
    absolute threshold there; `evolve` sets it to the initial length.
    """

    lam: float = 1.0
    a: float = 2.0
    extinction_eps: float = 1e-9
    reference_length: float = 1.0

    def __post_init__(self) -> None:
        _require_positive("lambda", self.lam)
        _require_positive("extinction_eps", self.extinction_eps)
        _require_positive("reference_length", self.reference_length)
        if not math.isfinite(self.a):
            raise DomainError(f"a must be finite, got {self.a!r}")

    @property
    def kernel(self) -> KernelParams:
        return KernelParams(self.lam)

    @property
    def extinction_length(self) -> float:
        return self.extinction_eps * self.reference_length


@dataclass(frozen=True)
class StepControl:
    """Controls for the embedded Runge-Kutta integrator.

    `max_displacement` caps every step so that no point moves further than that fraction
    of the current length. `resample_every` (flow time) re-distributes the points to
    constant speed periodically; None keeps the grid Lagrangian.
    """

    dt_init: float = 1e-3
    rel_tol: float = 1e-7
    dt_min: float = 1e-12
    dt_max: float = 0.5
    max_steps: int = 100_000
    max_displacement: float = 0.1
    adaptive: bool = True
    resample_every: float | None = None

    def __post_init__(self) -> None:
        for name in ("dt_init", "rel_tol", "dt_min", "dt_max", "max_displacement"):
            _require_positive(name, getattr(self, name))
        if not self.dt_min <= self.dt_init <= self.dt_max:
            raise DomainError(
                "need dt_min <= dt_init <= dt_max, "
                f"got {self.dt_min}, {self.dt_init}, {self.dt_max}"
            )
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be at least 1, got {self.max_steps}")
        if self.resample_every is not None:
            _require_positive("resample_every", self.resample_every)

    @classmethod
    def for_params(cls, params: FlowParams, **overrides: object) -> StepControl:
        """Defaults scaled to the kernel width: dt_init = min(1e-3, lambda^2 / 10)."""
        values: dict[str, object] = {"dt_init": min(1e-3, params.lam**2 / 10)}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
