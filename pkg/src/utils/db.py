from pathlib import Path
from typing import Any

from tinydb import Query, TinyDB


class RunStore:
    """Lightweight wrapper around the TinyDB run registry kept next to the outputs."""

    def __init__(self, db_path: str | Path) -> None:
        path = Path(db_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.db = TinyDB(str(path), indent=2, sort_keys=True)
        self.runs = self.db.table("runs")
        self.reports = self.db.table("reports")

    @classmethod
    def in_directory(cls, output_dir: str | Path) -> "RunStore":
        return cls(Path(output_dir) / "runs.json")

    def close(self) -> None:
        self.db.close()

    # Runs ---------------------------------------------------------------------
    def add_run(
        self,
        command: str,
        shape: str | None,
        lam: float,
        a: float,
        n: int,
        termination: str,
        final_length: float | None,
        extinction_time: float | None = None,
        output_dir: str | None = None,
        extra: dict[str, Any] | None = None,
    ) -> int:
        return self.runs.insert(
            {
                "command": command,
                "shape": shape,
                "lambda": lam,
                "a": a,
                "n": n,
                "termination": termination,
                "final_length": final_length,
                "extinction_time": extinction_time,
                "output_dir": output_dir,
                **(extra or {}),
            }
        )

    def get_run(self, run_id: int) -> dict[str, Any] | None:
        return self.runs.get(doc_id=run_id)

    def delete_run(self, run_id: int) -> None:
        self.runs.remove(doc_ids=[run_id])
        Report = Query()
        self.reports.remove(Report.run_id == run_id)

    def get_all_runs(self) -> list[dict[str, Any]]:
        return self.runs.all()

    def search_runs_by_shape(self, shape: str) -> list[dict[str, Any]]:
        Run = Query()
        return self.runs.search(Run.shape == shape)

    # Reports ------------------------------------------------------------------
    def add_report(self, run_id: int, passed: bool, failed_checks: list[str]) -> int:
        return self.reports.insert(
            {"run_id": run_id, "passed": passed, "failed_checks": failed_checks}
        )

    def get_reports_for_run(self, run_id: int) -> list[dict[str, Any]]:
        Report = Query()
        return self.reports.search(Report.run_id == run_id)
