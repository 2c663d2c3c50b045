from __future__ import annotations

"""Curve, trajectory and report serialization.

Curves are JSON objects {"points": [[x, y], ...]} with N points and implicit closure.
Trajectories are written as JSON lines plus a CSV mirror of the diagnostics.
"""

import json
import math
from pathlib import Path

import numpy as np
from loguru import logger

from features.analysis import DiagnosticsReport
from sobolev.curve import MIN_SAMPLES, DiscreteCurve
from sobolev.errors import InputError
from sobolev.flow import Trajectory

TRAJECTORY_FILE = "trajectory.jsonl"
DIAGNOSTICS_FILE = "diagnostics.csv"
CSV_COLUMNS = ("t", "length", "sup_norm", "min_speed", "min_curvature")


def _parse_point(raw: object, index: int) -> tuple[float, float]:
    record = f"points[{index}]"
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise InputError("expected an [x, y] pair", record=record)
    if any(isinstance(value, bool) for value in raw):
        raise InputError("coordinates must be numbers, not booleans", record=record)
    try:
        x, y = (float(value) for value in raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"coordinates must be numbers ({exc})", record=record) from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InputError("coordinates must be finite", record=record)
    return x, y


def parse_curve(payload: object, source: str = "curve") -> DiscreteCurve:
    """Validate a decoded {"points": [...]} object and build the curve."""
    if not isinstance(payload, dict) or "points" not in payload:
        raise InputError(f"{source} must be an object with a 'points' array", record="points")
    raw_points = payload["points"]
    if not isinstance(raw_points, list):
        raise InputError("'points' must be an array of [x, y] pairs", record="points")
    if len(raw_points) < MIN_SAMPLES:
        raise InputError(
            f"need at least {MIN_SAMPLES} points, got {len(raw_points)}", record="points"
        )
    points = np.array([_parse_point(raw, i) for i, raw in enumerate(raw_points)])
    return DiscreteCurve(points)


def read_curve(path: str | Path) -> DiscreteCurve:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read curve file ({exc.strerror})", record=str(path)) from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON: {exc.msg}", record=f"{path.name} line {exc.lineno}"
        ) from exc
    curve = parse_curve(payload, source=path.name)
    logger.debug(f"read curve with N={curve.n} from {path}")
    return curve


def curve_payload(curve: DiscreteCurve) -> dict:
    return {"points": curve.points.tolist()}


def write_curve(curve: DiscreteCurve, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(curve_payload(curve)) + "\n", encoding="utf-8")
    return path


def trajectory_records(trajectory: Trajectory, points_every: int = 1) -> list[dict]:
    """One record per stored state; points on every `points_every`-th record and the last."""
    records = []
    last = len(trajectory.states) - 1
    for index, (state, diagnostics) in enumerate(
        zip(trajectory.states, trajectory.diagnostics, strict=True)
    ):
        record: dict = {
            "t": state.t,
            "length": diagnostics.length,
            "sup_norm": diagnostics.sup_norm,
            "min_speed": diagnostics.min_speed,
        }
        if diagnostics.min_curvature is not None:
            record["min_curvature"] = diagnostics.min_curvature
        if points_every > 0 and (index % points_every == 0 or index == last):
            record["points"] = state.curve.points.tolist()
        records.append(record)
    return records


def write_trajectory(
    trajectory: Trajectory, out_dir: str | Path, points_every: int = 1
) -> tuple[Path, Path]:
    """Write trajectory.jsonl and diagnostics.csv into `out_dir`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jsonl_path = out_dir / TRAJECTORY_FILE
    with jsonl_path.open("w", encoding="utf-8") as handle:
        for record in trajectory_records(trajectory, points_every):
            handle.write(json.dumps(record) + "\n")

    table = np.column_stack(
        (
            trajectory.times,
            trajectory.lengths,
            trajectory.sup_norms,
            trajectory.min_speeds,
            trajectory.min_curvatures,
        )
    )
    csv_path = out_dir / DIAGNOSTICS_FILE
    header = ",".join(CSV_COLUMNS)
    np.savetxt(csv_path, table, fmt="%.17g", delimiter=",", header=header, comments="")
    logger.info(f"wrote {len(trajectory.states)} states to {jsonl_path} and {csv_path}")
    return jsonl_path, csv_path


def read_trajectory_records(path: str | Path) -> list[dict]:
    """Load a trajectory.jsonl file; malformed lines raise InputError naming the line."""
    path = Path(path)
    records = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read trajectory ({exc.strerror})", record=str(path)) from exc
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            record = f"{path.name} line {number}"
            raise InputError(f"malformed JSON: {exc.msg}", record=record) from exc
    return records


def render_report(report: DiagnosticsReport, include_runtime: bool = False) -> str:
    return json.dumps(report.to_dict(include_runtime), indent=2) + "\n"


def write_report(
    report: DiagnosticsReport, path: str | Path, include_runtime: bool = False
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report, include_runtime), encoding="utf-8")
    return path
