from __future__ import annotations

"""Exception hierarchy shared by the numerical core, the analysis layer and the CLI."""


class FlowError(Exception):
    """Base class for every error raised by this project."""


class DomainError(FlowError, ValueError):
    """A numeric argument is non-finite or outside its admissible range."""


class DegenerateCurveError(FlowError):
    """The curve has (numerically) zero length where a positive length is required."""


class NotImmersedError(FlowError):
    """A sample has zero speed where an immersion is required."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class BlowUpError(FlowError):
    """A Runge-Kutta stage produced non-finite values."""

    def __init__(self, t: float, stage: int) -> None:
        super().__init__(f"non-finite values at t={t:.6g} in stage {stage}")
        self.t = t
        self.stage = stage


class StiffnessError(FlowError):
    """The step-size controller shrank below dt_min without meeting the tolerance."""

    def __init__(self, t: float, dt: float, error_ratio: float) -> None:
        super().__init__(
            f"step size underflow at t={t:.6g}: dt={dt:.3e}, error ratio {error_ratio:.3e}"
        )
        self.t = t
        self.dt = dt
        self.error_ratio = error_ratio


class ConfigurationError(FlowError):
    """A requested check or option cannot be evaluated with the data supplied."""


class InputError(FlowError):
    """An input file is malformed; `record` names the offending entry."""

    def __init__(self, message: str, record: str | None = None) -> None:
        super().__init__(f"{record}: {message}" if record else message)
        self.record = record


class UsageError(FlowError):
    """Command-line or config-file usage is invalid."""
