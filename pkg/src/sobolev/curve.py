from __future__ import annotations

"""Discrete closed plane curves sampled at uniform parameters u_i = i/N.

Derivatives use periodic second-order central differences. The stencil is robust for
curves of low regularity but its accuracy for genuinely rough (W^{1,1}-only) data is not
established; such inputs are accepted and flagged in the logs rather than special-cased.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sobolev.errors import DegenerateCurveError, DomainError, NotImmersedError

MIN_SAMPLES = 8


def _frozen(array: NDArray[np.float64]) -> NDArray[np.float64]:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    """N samples of a closed map S^1 -> R^2; closure point_N = point_0 is implicit."""

    points: NDArray[np.float64]

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise DomainError(f"points must have shape (N, 2), got {points.shape}")
        if points.shape[0] < MIN_SAMPLES:
            raise DomainError(f"need at least {MIN_SAMPLES} samples, got {points.shape[0]}")
        if not np.all(np.isfinite(points)):
            raise DomainError("curve coordinates must be finite")
        object.__setattr__(self, "points", _frozen(points))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def scaled(self, rho: float) -> DiscreteCurve:
        return DiscreteCurve(rho * self.points)

    def translated(self, offset: ArrayLike) -> DiscreteCurve:
        return DiscreteCurve(self.points + np.asarray(offset, dtype=float))

    def reparametrised(self, shift: int) -> DiscreteCurve:
        """Rotate the index origin by `shift` samples."""
        return DiscreteCurve(np.roll(self.points, -shift, axis=0))


@dataclass(frozen=True, eq=False)
class CurveGeometry:
    """Stencil derivative, speed, length, normalized arc length xi and weights |g'|/(N L)."""

    derivative: NDArray[np.float64]
    speed: NDArray[np.float64]
    length: float
    xi: NDArray[np.float64]
    weights: NDArray[np.float64]

    @property
    def n(self) -> int:
        return int(self.speed.shape[0])

    @property
    def min_speed(self) -> float:
        return float(self.speed.min())


def central_derivative(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Periodic central difference in u: N (v_{i+1} - v_{i-1}) / 2."""
    n = values.shape[0]
    return 0.5 * n * (np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0))


def central_second_derivative(values: NDArray[np.float64]) -> NDArray[np.float64]:
    n = values.shape[0]
    return n * n * (np.roll(values, -1, axis=0) - 2.0 * values + np.roll(values, 1, axis=0))


def geometry(curve: DiscreteCurve) -> CurveGeometry:
    """Stencil geometry of a curve; zero-speed samples are allowed and get zero weight."""
    n = curve.n
    derivative = central_derivative(curve.points)
    speed = np.hypot(derivative[:, 0], derivative[:, 1])
    total = float(speed.sum())
    length = total / n
    if length > 0:
        # trapezoidal cumulative sums of the speed, normalized so xi_N would be 1
        increments = 0.5 * (speed + np.roll(speed, -1))
        xi = np.concatenate(([0.0], np.cumsum(increments[:-1]))) / total
        weights = speed / total
    else:
        xi = np.arange(n) / n
        weights = np.zeros(n)
    return CurveGeometry(
        derivative=_frozen(derivative),
        speed=_frozen(speed),
        length=length,
        xi=_frozen(xi),
        weights=_frozen(weights),
    )


def length(curve: DiscreteCurve) -> float:
    """Discrete length (1/N) sum |g'(u_i)| with the central stencil."""
    derivative = central_derivative(curve.points)
    return float(np.hypot(derivative[:, 0], derivative[:, 1]).sum() / curve.n)


def length_variation(curve: DiscreteCurve, v: NDArray[np.float64]) -> float:
    """Directional derivative of the discrete length along v: (1/N) sum <g', v'> / |g'|."""
    derivative = central_derivative(curve.points)
    speed = np.hypot(derivative[:, 0], derivative[:, 1])
    stalled = np.flatnonzero(speed == 0)
    if stalled.size:
        raise NotImmersedError(
            f"length is not differentiable at zero-speed sample {int(stalled[0])}",
            index=int(stalled[0]),
        )
    dv = central_derivative(np.asarray(v, dtype=float))
    return float(np.einsum("ij,ij,i->", derivative, dv, 1.0 / speed) / curve.n)


def resample_constant_speed(curve: DiscreteCurve, m: int) -> DiscreteCurve:
    """Sample the curve at m uniform arc-length stations, station 0 anchored at u = 0.

    Inverts xi by monotone piecewise-linear interpolation, then interpolates the points
    linearly in u.
    """
    if m < MIN_SAMPLES:
        raise DomainError(f"need m >= {MIN_SAMPLES} stations, got {m}")
    geom = geometry(curve)
    if geom.length <= 0:
        raise DegenerateCurveError("cannot resample a curve of zero length")
    n = curve.n
    u_nodes = np.arange(n + 1) / n
    xi_nodes = np.append(geom.xi, 1.0)
    stations = np.arange(m) / m
    u = np.interp(stations, xi_nodes, u_nodes)
    closed = np.vstack((curve.points, curve.points[:1]))
    resampled = np.column_stack(
        (np.interp(u, u_nodes, closed[:, 0]), np.interp(u, u_nodes, closed[:, 1]))
    )
    return DiscreteCurve(resampled)


def curvature(curve: DiscreteCurve) -> NDArray[np.float64]:
    """Signed curvature (x' y'' - y' x'') / |g'|^3; positive on counter-clockwise convex curves."""
    first = central_derivative(curve.points)
    speed = np.hypot(first[:, 0], first[:, 1])
    stalled = np.flatnonzero(speed == 0)
    if stalled.size:
        raise NotImmersedError(
            f"curve has zero speed at sample {int(stalled[0])}", index=int(stalled[0])
        )
    second = central_second_derivative(curve.points)
    cross = first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0]
    return cross / speed**3


def turning_number(curve: DiscreteCurve) -> int:
    """Rotation index of the stencil tangent: +1 for a counter-clockwise simple loop."""
    first = central_derivative(curve.points)
    following = np.roll(first, -1, axis=0)
    cross = first[:, 0] * following[:, 1] - first[:, 1] * following[:, 0]
    dot = np.einsum("ij,ij->i", first, following)
    return int(round(float(np.arctan2(cross, dot).sum()) / (2.0 * math.pi)))


def is_convex(curve: DiscreteCurve) -> bool:
    """True when every curvature sample has the same strict sign and the tangent turns once.

    A limacon with an inner loop has curvature of one sign but turns twice.
    """
    k = curvature(curve)
    same_sign = bool(np.all(k > 0) or np.all(k < 0))
    return same_sign and abs(turning_number(curve)) == 1


def is_immersed(curve: DiscreteCurve) -> bool:
    return bool(geometry(curve).min_speed > 0)


def area(curve: DiscreteCurve) -> float:
    """Signed enclosed area of the sample polygon (shoelace)."""
    x, y = curve.points[:, 0], curve.points[:, 1]
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def isoperimetric_ratio(curve: DiscreteCurve) -> float:
    """4 pi |A| / L^2; equals 1 for a round circle, smaller for any other shape."""
    total = length(curve)
    if total <= 0:
        raise DegenerateCurveError("isoperimetric ratio of a zero-length curve")
    return 4.0 * math.pi * abs(area(curve)) / total**2


def sup_norm(curve: DiscreteCurve) -> float:
    return float(np.hypot(curve.points[:, 0], curve.points[:, 1]).max())


def _check_count(n: int) -> None:
    if n < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {n}")


def _angles(n: int) -> NDArray[np.float64]:
    _check_count(n)
    return 2.0 * np.pi * np.arange(n) / n


def circle(r: float, n: int) -> DiscreteCurve:
    """r (cos 2 pi u, sin 2 pi u)."""
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"radius must be positive, got {r!r}")
    theta = _angles(n)
    return DiscreteCurve(r * np.column_stack((np.cos(theta), np.sin(theta))))


def ellipse(a: float, b: float, n: int) -> DiscreteCurve:
    """(a cos 2 pi u, b sin 2 pi u)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"semi-axes must be positive, got {a!r}, {b!r}")
    theta = _angles(n)
    return DiscreteCurve(np.column_stack((a * np.cos(theta), b * np.sin(theta))))


def star(p: int, amplitude: float, n: int) -> DiscreteCurve:
    """Polar curve r = 1 + amplitude cos(p theta) with p lobes."""
    if p < 1:
        raise DomainError(f"lobe count must be at least 1, got {p}")
    if not 0 <= abs(amplitude) < 1:
        raise DomainError(f"star amplitude must lie in (-1, 1), got {amplitude!r}")
    theta = _angles(n)
    radius = 1.0 + amplitude * np.cos(p * theta)
    return DiscreteCurve(radius[:, None] * np.column_stack((np.cos(theta), np.sin(theta))))


def limacon(a: float, b: float, n: int) -> DiscreteCurve:
    """Polar curve r = b + a cos(theta); has an inner loop when a > b."""
    if a == b:
        raise DomainError("a == b gives a cardioid, which is not immersed")
    theta = _angles(n)
    radius = b + a * np.cos(theta)
    return DiscreteCurve(radius[:, None] * np.column_stack((np.cos(theta), np.sin(theta))))


def square(side: float, per_side: int) -> DiscreteCurve:
    """Axis-aligned square traversed counter-clockwise with `per_side` samples per side."""
    if per_side < 2:
        raise DomainError(f"need at least 2 samples per side, got {per_side}")
    t = np.arange(per_side) / per_side * side
    half = side / 2
    sides = (
        np.column_stack((-half + t, np.full(per_side, -half))),
        np.column_stack((np.full(per_side, half), -half + t)),
        np.column_stack((half - t, np.full(per_side, half))),
        np.column_stack((np.full(per_side, -half), half - t)),
    )
    return DiscreteCurve(np.vstack(sides))


BUILTIN_SHAPES: dict[str, Callable[..., DiscreteCurve]] = {
    "circle": circle,
    "ellipse": ellipse,
    "star": star,
    "limacon": limacon,
    "square": square,
}


def warn_if_rough(curve: DiscreteCurve, threshold: float = 0.5) -> bool:
    """Log a warning when the speed jumps by more than `threshold` (relative to the
    mean speed) between neighbouring samples."""
    geom = geometry(curve)
    if geom.length <= 0:
        return False
    # the mean stencil speed equals the length
    jumps = np.abs(np.diff(np.append(geom.speed, geom.speed[0]))) / geom.length
    rough = bool(jumps.max() > threshold)
    if rough:
        logger.warning(
            f"initial curve looks rough (max relative speed jump {jumps.max():.3g}); "
            "central differences may be inaccurate"
        )
    return rough
