from __future__ import annotations

"""The gamma-convolution, the H^1_{lambda,a} gradient of length and the flow velocity.

Dense path: O(N^2) weighted Riemann sums over the stencil geometry, evaluated in row
blocks so the N x N kernel is never held in memory at once. Row sums use `einsum`
loops (not BLAS), so results do not depend on the thread count.

Fast path: after resampling to constant speed the kernel matrix is circulant and is
applied by cyclic convolution with `scipy.fft`.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from scipy.fft import irfft, rfft

from sobolev.curve import (
    CurveGeometry,
    DiscreteCurve,
    central_derivative,
    geometry,
    resample_constant_speed,
)
from sobolev.errors import DegenerateCurveError, DomainError, NotImmersedError
from sobolev.kernel import KernelParams, green_eval, green_table
from sobolev.types import FlowParams

_BLOCK_ROWS = 64


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """M_ij = G(xi_j - xi_i) with the quadrature weights of the geometry."""

    values: NDArray[np.float64]
    weights: NDArray[np.float64]
    mode: Literal["dense", "circulant"] = "dense"

    def row_sums(self) -> NDArray[np.float64]:
        """Discrete integral of the kernel along each row; tends to -1."""
        return np.einsum("ij,j->i", self.values, self.weights)

    def apply(self, f: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.einsum("ij,jk->ik", self.values * self.weights[None, :], f)


def uniform_geometry(curve: DiscreteCurve) -> CurveGeometry:
    """Geometry of a curve taken to be sampled at constant speed: xi_i = i/N, w_i = 1/N.

    Derivative, speed and length still come from the central stencil.
    """
    geom = geometry(curve)
    n = curve.n
    xi = np.arange(n) / n
    weights = np.full(n, 1.0 / n)
    xi.setflags(write=False)
    weights.setflags(write=False)
    return CurveGeometry(
        derivative=geom.derivative,
        speed=geom.speed,
        length=geom.length,
        xi=xi,
        weights=weights,
    )


def kernel_matrix(
    geom: CurveGeometry,
    params: FlowParams,
    mode: Literal["dense", "circulant"] = "dense",
) -> KernelMatrix:
    """Full kernel table; `circulant` assumes constant-speed stations and fills it by shifts."""
    n = geom.n
    if mode == "circulant":
        column = green_table(n, params.kernel)
        offsets = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
        values = column[offsets]
        weights = np.full(n, 1.0 / n)
    elif mode == "dense":
        values = np.asarray(green_eval(geom.xi[None, :] - geom.xi[:, None], params.kernel))
        weights = np.array(geom.weights)
    else:
        raise DomainError(f"unknown kernel matrix mode {mode!r}")
    return KernelMatrix(values=values, weights=weights, mode=mode)


def _row_blocks(n: int):
    for start in range(0, n, _BLOCK_ROWS):
        yield slice(start, min(start + _BLOCK_ROWS, n))


def _weighted_kernel_rows(geom: CurveGeometry, rows: slice, kernel: KernelParams):
    values = green_eval(geom.xi[None, :] - geom.xi[rows, None], kernel)
    return values * geom.weights[None, :]


def _require_length(geom: CurveGeometry, params: FlowParams) -> None:
    if geom.length <= params.extinction_length:
        raise DegenerateCurveError(
            f"curve length {geom.length:.3e} is at or below the extinction threshold "
            f"{params.extinction_length:.3e}"
        )


def convolve(
    geom: CurveGeometry, f: NDArray[np.float64], params: FlowParams
) -> NDArray[np.float64]:
    """(f *_gamma G)(u_i) = sum_j f_j G(xi_j - xi_i) w_j."""
    _require_length(geom, params)
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    kernel = params.kernel
    for rows in _row_blocks(geom.n):
        out[rows] = np.einsum("ij,jk->ik", _weighted_kernel_rows(geom, rows, kernel), f)
    return out


def difference_convolution(
    points: NDArray[np.float64], geom: CurveGeometry, kernel: KernelParams
) -> NDArray[np.float64]:
    # sum_j (p_j - p_i) G(xi_j - xi_i) w_j; the integrand vanishes on the kernel's kink
    out = np.empty_like(points)
    for rows in _row_blocks(geom.n):
        differences = points[None, :, :] - points[rows, None, :]
        out[rows] = np.einsum(
            "ij,ijk->ik", _weighted_kernel_rows(geom, rows, kernel), differences
        )
    return out


def flow_velocity(
    curve: DiscreteCurve,
    params: FlowParams,
    geom: CurveGeometry | None = None,
) -> NDArray[np.float64]:
    """F = -(L^{a-2} / lambda^2) sum_j (p_j - p_i) G(xi_j - xi_i) w_j, zero once extinct.

    `geom` overrides the stencil geometry (e.g. `uniform_geometry`).
    """
    geom = geometry(curve) if geom is None else geom
    if geom.length <= params.extinction_length:
        return np.zeros_like(curve.points)
    return _scaled_velocity(curve, params, geom)


def stage_velocity(curve: DiscreteCurve, params: FlowParams) -> NDArray[np.float64]:
    """Difference-form velocity without the extinction branch; zero only for a constant map.

    Runge-Kutta stages use this so the right-hand side stays continuous across the
    extinction threshold.
    """
    geom = geometry(curve)
    if geom.length <= 0:
        return np.zeros_like(curve.points)
    return _scaled_velocity(curve, params, geom)


def _scaled_velocity(
    curve: DiscreteCurve, params: FlowParams, geom: CurveGeometry
) -> NDArray[np.float64]:
    factor = geom.length ** (params.a - 2.0) / params.lam**2
    return -factor * difference_convolution(curve.points, geom, params.kernel)


def gradient(curve: DiscreteCurve, params: FlowParams) -> NDArray[np.float64]:
    """The H^1_{lambda,a} gradient of length, (L^{a-2}/lambda^2)(gamma + gamma *_gamma G)."""
    geom = geometry(curve)
    _require_length(geom, params)
    return -flow_velocity(curve, params, geom)


def metric_inner(
    geom: CurveGeometry,
    v: NDArray[np.float64],
    w: NDArray[np.float64],
    params: FlowParams,
) -> float:
    """L^{-a} <v, w>_{L^2(gamma)} + lambda^2 L^{2-a} <v'/|g'|, w'/|g'|>_{L^2(gamma)}."""
    speed = geom.speed
    stalled = np.flatnonzero(speed <= 0)
    if stalled.size:
        raise NotImmersedError(
            f"metric needs an immersion; zero speed at sample {int(stalled[0])}",
            index=int(stalled[0]),
        )
    n = geom.n
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    l2 = float(np.einsum("ij,ij,i->", v, w, speed)) / n
    dv = central_derivative(v)
    dw = central_derivative(w)
    h1 = float(np.einsum("ij,ij,i->", dv, dw, 1.0 / speed)) / n
    length = geom.length
    return length ** (-params.a) * l2 + params.lam**2 * length ** (2.0 - params.a) * h1


def _circulant_apply(curve: DiscreteCurve, params: FlowParams) -> NDArray[np.float64]:
    n = curve.n
    geom = uniform_geometry(curve)
    _require_length(geom, params)
    # centring leaves the difference form unchanged and keeps the FFT sums small
    points = curve.points - curve.points.mean(axis=0)
    column = green_table(n, params.kernel)
    # the kernel column is symmetric (c_k = c_{n-k}), so correlation equals convolution
    convolved = irfft(rfft(column)[:, None] * rfft(points, axis=0), n=n, axis=0)
    difference = (convolved - points * column.sum()) / n
    factor = geom.length ** (params.a - 2.0) / params.lam**2
    return -factor * difference


def circulant_velocity(curve: DiscreteCurve, params: FlowParams) -> NDArray[np.float64]:
    """Flow velocity at the constant-speed resampling of `curve`, in O(N log N).

    The result lives on `resample_constant_speed(curve, curve.n)`, station by station.
    """
    if geometry(curve).length <= params.extinction_length:
        raise DegenerateCurveError("circulant path needs a curve of positive length")
    return _circulant_apply(resample_constant_speed(curve, curve.n), params)
