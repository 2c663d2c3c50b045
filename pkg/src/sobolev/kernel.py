from __future__ import annotations

"""Periodic Green's function of (lambda^2 d^2/dx^2 - 1) on the unit circle.

Everything is evaluated after reduction to [0, 1) and in the scaled exponential form

    G(x) = -(exp((x - 1)/lambda) + exp(-x/lambda)) / (2 lambda (1 - exp(-1/lambda))),

which equals -cosh((x - 1/2)/lambda) / (2 lambda sinh(1/(2 lambda))) but never overflows,
however small lambda is.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import trapezoid

from sobolev.errors import DomainError


@dataclass(frozen=True)
class KernelParams:
    """Kernel width lambda, in units of normalized arc length."""

    lam: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"lambda must be a positive finite number, got {self.lam!r}")


def reduce_period(x: ArrayLike) -> NDArray[np.float64] | float:
    """Map x to x - floor(x) in [0, 1); scalars in, scalars out."""
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("reduce_period needs finite input")
    reduced = values - np.floor(values)
    # x slightly below an integer can round up to exactly 1.0
    reduced = np.where(reduced >= 1.0, 0.0, reduced)
    if reduced.ndim == 0:
        return float(reduced)
    return reduced


def _scale(lam: float) -> float:
    return 2.0 * lam * -math.expm1(-1.0 / lam)


def green_eval(x: ArrayLike, params: KernelParams) -> NDArray[np.float64] | float:
    """Evaluate the periodic Green's function at x (any real, reduced mod 1)."""
    y = np.asarray(reduce_period(x), dtype=float)
    lam = params.lam
    values = -(np.exp((y - 1.0) / lam) + np.exp(-y / lam)) / _scale(lam)
    if values.ndim == 0:
        return float(values)
    return values


def green_antiderivative(x: ArrayLike, params: KernelParams) -> NDArray[np.float64] | float:
    """Antiderivative of the kernel on [0, 1]: -sinh((x - 1/2)/lambda) / (2 sinh(1/(2 lambda))).

    Not reduced mod 1; valid for x in [0, 1].
    """
    y = np.asarray(x, dtype=float)
    lam = params.lam
    values = -(np.exp((y - 1.0) / lam) - np.exp(-y / lam)) / (2.0 * -math.expm1(-1.0 / lam))
    if values.ndim == 0:
        return float(values)
    return values


def green_integral(params: KernelParams, n: int) -> float:
    """Composite trapezoid rule for the kernel over [0, 1] with n samples (tends to -1)."""
    if n < 2:
        raise DomainError(f"green_integral needs n >= 2 samples, got {n}")
    grid = np.linspace(0.0, 1.0, n)
    # evaluate the closed form on [0, 1] directly; reducing 1.0 to 0.0 would be equivalent
    values = green_eval(grid[:-1], params)
    values = np.append(values, values[0])
    return float(trapezoid(values, grid))


def green_table(n: int, params: KernelParams) -> NDArray[np.float64]:
    """Kernel samples at the uniform stations k/n, k = 0..n-1 (one circulant column)."""
    return np.asarray(green_eval(np.arange(n) / n, params))
