from __future__ import annotations

"""SVG frames of a trajectory: one file per stored state plus an overlay of all of them."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from sobolev.curve import DiscreteCurve, isoperimetric_ratio, length
from sobolev.errors import DegenerateCurveError
from sobolev.flow import Trajectory

_PADDING = 1.05
# a closed curve of unit length stays within 1/2 of any of its points
_RESCALED_HALF_WIDTH = 0.5


@dataclass(frozen=True)
class RenderOptions:
    """Frame size in pixels and whether states are drawn divided by their length."""

    size: int = 512
    rescaled: bool = False
    stroke: str = "#1f4e79"


@dataclass(frozen=True)
class _ViewBox:
    cx: float
    cy: float
    half: float

    def to_pixels(self, points: NDArray[np.float64], size: int) -> NDArray[np.float64]:
        scale = size / (2.0 * self.half)
        x = (points[:, 0] - self.cx + self.half) * scale
        y = (self.half - (points[:, 1] - self.cy)) * scale
        return np.column_stack((x, y))


def _display_points(curve: DiscreteCurve, rescaled: bool) -> NDArray[np.float64] | None:
    if not rescaled:
        return curve.points
    total = length(curve)
    if total <= 0:
        return None
    return (curve.points - curve.points.mean(axis=0)) / total


def _view_box(trajectory: Trajectory, rescaled: bool) -> _ViewBox:
    if rescaled:
        return _ViewBox(0.0, 0.0, _RESCALED_HALF_WIDTH * _PADDING)
    # bounding box of every stored state
    stacked = np.vstack([state.curve.points for state in trajectory.states])
    lo = stacked.min(axis=0)
    hi = stacked.max(axis=0)
    half = 0.5 * float((hi - lo).max())
    if half <= 0:
        raise DegenerateCurveError("cannot frame a trajectory whose states are all one point")
    cx, cy = 0.5 * (lo + hi)
    return _ViewBox(float(cx), float(cy), half * _PADDING)


def _path_data(pixels: NDArray[np.float64]) -> str:
    head, *rest = (f"{x:.3f},{y:.3f}" for x, y in pixels)
    return f"M {head} L " + " ".join(rest) + " Z"


def _svg(size: int, body: str) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
        f'<rect width="{size}" height="{size}" fill="white"/>\n'
        f"{body}"
        "</svg>\n"
    )


def _colour(fraction: float) -> str:
    start = np.array([31, 78, 121])
    end = np.array([192, 57, 43])
    r, g, b = (start + fraction * (end - start)).round().astype(int)
    return f"#{r:02x}{g:02x}{b:02x}"


def _label(curve: DiscreteCurve, t: float) -> str:
    try:
        return f"t={t:.6g}, isoperimetric ratio={isoperimetric_ratio(curve):.6f}"
    except DegenerateCurveError:
        return f"t={t:.6g}, extinct"


def render_frames(
    trajectory: Trajectory, out_dir: str | Path, options: RenderOptions | None = None
) -> list[Path]:
    """Write frame_00000.svg, ... and overlay.svg; returns the written paths, overlay last."""
    options = RenderOptions() if options is None else options
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    view = _view_box(trajectory, options.rescaled)
    size = options.size
    written: list[Path] = []
    overlay_paths: list[str] = []
    count = len(trajectory.states)

    for index, state in enumerate(trajectory.states):
        points = _display_points(state.curve, options.rescaled)
        label = _label(state.curve, state.t)
        if points is None:
            body = f"<title>{label}</title>\n"
        else:
            data = _path_data(view.to_pixels(points, size))
            body = (
                f"<title>{label}</title>\n"
                f'<path d="{data}" fill="none" stroke="{options.stroke}" stroke-width="1.5"/>\n'
            )
            colour = _colour(index / max(count - 1, 1))
            overlay_paths.append(
                f'<path d="{data}" fill="none" stroke="{colour}" stroke-width="1">'
                f"<title>{label}</title></path>\n"
            )
        path = out_dir / f"frame_{index:05d}.svg"
        path.write_text(_svg(size, body), encoding="utf-8")
        written.append(path)

    mode = "rescaled" if options.rescaled else "fixed"
    overlay = out_dir / "overlay.svg"
    overlay.write_text(
        _svg(size, f"<title>{count} states, {mode} view</title>\n" + "".join(overlay_paths)),
        encoding="utf-8",
    )
    written.append(overlay)
    logger.info(f"rendered {count} frames ({mode} view) into {out_dir}")
    return written
