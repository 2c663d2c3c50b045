import json

import numpy as np
import pytest

from features.analysis import InitialCurveInfo, run_checks
from sobolev.curve import DiscreteCurve, circle, ellipse, star
from sobolev.errors import InputError
from sobolev.flow import FlowState, build_trajectory, evolve
from sobolev.types import FlowParams, StepControl
from utils.io import (
    CSV_COLUMNS,
    DIAGNOSTICS_FILE,
    TRAJECTORY_FILE,
    parse_curve,
    read_curve,
    read_trajectory_records,
    trajectory_records,
    write_curve,
    write_report,
    write_trajectory,
)


@pytest.fixture(scope="module")
def short_run():
    ctrl = StepControl(dt_init=1e-2, adaptive=False)
    return evolve(ellipse(2.0, 1.0, 32), FlowParams(lam=0.5), ctrl, 0.05)


class TestCurveFiles:
    def test_written_curve_reads_back_bit_exact(self, tmp_path):
        curve = star(5, 0.3, 77)
        path = write_curve(curve, tmp_path / "nested" / "star.json")
        np.testing.assert_array_equal(read_curve(path).points, curve.points)

    def test_malformed_json_names_the_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "points": [\n    [1, 2],,\n  ]\n}\n', encoding="utf-8")
        with pytest.raises(InputError) as excinfo:
            read_curve(path)
        assert excinfo.value.record == "broken.json line 3"

    def test_too_few_points(self):
        with pytest.raises(InputError) as excinfo:
            parse_curve({"points": [[0, 0]] * 7})
        assert excinfo.value.record == "points"

    @pytest.mark.parametrize(
        ("bad", "record"),
        [([1.0], "points[3]"), ([1.0, "x"], "points[3]"), ([True, 1.0], "points[3]"), ([float("nan"), 0.0], "points[3]")],
    )
    def test_bad_point_is_named(self, bad, record):
        points = circle(1.0, 8).points.tolist()
        points[3] = bad
        with pytest.raises(InputError) as excinfo:
            parse_curve({"points": points})
        assert excinfo.value.record == record

    def test_non_finite_literal_in_file(self, tmp_path):
        points = circle(1.0, 8).points.tolist()
        points[5] = ["INF", 0.0]
        text = json.dumps({"points": points}).replace('"INF"', "Infinity")
        path = tmp_path / "inf.json"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(InputError) as excinfo:
            read_curve(path)
        assert excinfo.value.record == "points[5]"

    def test_missing_points_key(self):
        with pytest.raises(InputError):
            parse_curve({"vertices": []})
        with pytest.raises(InputError):
            parse_curve([[0, 0]] * 8)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(InputError):
            read_curve(tmp_path / "absent.json")


class TestTrajectoryFiles:
    def test_one_record_per_state(self, tmp_path, short_run):
        jsonl, csv = write_trajectory(short_run, tmp_path)
        assert jsonl.name == TRAJECTORY_FILE
        assert csv.name == DIAGNOSTICS_FILE
        records = read_trajectory_records(jsonl)
        assert len(records) == len(short_run.states)
        assert [record["t"] for record in records] == list(short_run.times)
        assert all("points" in record for record in records)
        np.testing.assert_array_equal(np.array(records[-1]["points"]), short_run.final.curve.points)

    def test_csv_mirrors_the_diagnostics(self, tmp_path, short_run):
        _, csv = write_trajectory(short_run, tmp_path)
        lines = csv.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        table = np.loadtxt(csv, delimiter=",", skiprows=1)
        assert table.shape == (len(short_run.states), len(CSV_COLUMNS))
        np.testing.assert_array_equal(table[:, 1], short_run.lengths)

    def test_points_every_thins_the_curves_but_keeps_the_last(self, short_run):
        records = trajectory_records(short_run, points_every=2)
        last = len(records) - 1
        for index, record in enumerate(records):
            assert ("points" in record) == (index % 2 == 0 or index == last)

    def test_missing_curvature_is_omitted(self):
        points = circle(1.0, 16).points.copy()
        points[2] = points[0]
        trajectory = build_trajectory([FlowState(0.0, DiscreteCurve(points))], FlowParams())
        (record,) = trajectory_records(trajectory)
        assert "min_curvature" not in record
        assert record["min_speed"] == 0.0

    def test_output_is_deterministic(self, tmp_path, short_run):
        first, _ = write_trajectory(short_run, tmp_path / "a")
        second, _ = write_trajectory(short_run, tmp_path / "b")
        assert first.read_bytes() == second.read_bytes()

    def test_malformed_trajectory_line(self, tmp_path):
        path = tmp_path / TRAJECTORY_FILE
        path.write_text('{"t": 0}\n{"t": \n', encoding="utf-8")
        with pytest.raises(InputError) as excinfo:
            read_trajectory_records(path)
        assert excinfo.value.record == f"{TRAJECTORY_FILE} line 2"


def test_report_file_is_byte_stable(tmp_path, short_run):
    report = run_checks(short_run, info=InitialCurveInfo("ellipse"))
    first = write_report(report, tmp_path / "one.json")
    second = write_report(report, tmp_path / "two.json")
    assert first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text(encoding="utf-8"))
    assert [check["name"] for check in payload["checks"]] == [record.name for record in report.records]
    assert "runtime" not in payload["checks"][0]
