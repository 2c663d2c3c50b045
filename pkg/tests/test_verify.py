import numpy as np
import pytest

from features.benchmark import RESAMPLING_TOL, SPEEDUP_TARGET, BenchmarkResult, time_fast_path
from features.verify import DEFAULT_CORPUS, CorpusCase, run_case, run_verification
from sobolev.curve import star
from sobolev.types import FlowParams, StepControl


class TestVerification:
    def test_corpus_passes_at_moderate_resolution(self):
        results = run_verification([1.0], n=256, t_end=0.05)
        assert [result.case for result in results] == [case.name for case in DEFAULT_CORPUS]
        for result in results:
            assert result.error is None
            assert result.passed, result.metrics["failed_checks"]
            assert result.metrics["termination"] == "t_end"
            assert result.metrics["elapsed_ms"] >= 0

    def test_parallel_workers_keep_the_order(self):
        results = run_verification([1.0, 0.5], n=64, t_end=0.01, workers=3)
        assert [(result.lam, result.case) for result in results] == [
            (lam, case.name) for lam in (1.0, 0.5) for case in DEFAULT_CORPUS
        ]

    def test_evolution_errors_are_reported_not_raised(self):
        case = CorpusCase("tiny-steps", lambda n: star(3, 0.2, n))
        ctrl = StepControl(dt_init=1e-12, dt_min=1e-12, rel_tol=1e-300)
        result = run_case(case, FlowParams(), ctrl, 64, 1.0)
        assert result.error is not None
        assert result.error.startswith("StiffnessError")
        assert not result.passed
        assert "elapsed_ms" in result.metrics


class TestBenchmark:
    def test_fast_path_agrees_with_dense_sums(self):
        result = time_fast_path(star(3, 0.2, 256), FlowParams(lam=0.5), repeats=1)
        assert result.n == 256
        assert result.max_gap <= 1e-8
        payload = result.to_dict()
        assert set(payload) == {
            "n",
            "dense_seconds",
            "circulant_seconds",
            "speedup",
            "target",
            "met_target",
            "max_gap",
            "stencil_gap",
            "resampling_tol",
            "within_resampling_tol",
        }
        assert payload["target"] == SPEEDUP_TARGET

    def test_stencil_geometry_stays_within_the_resampling_tolerance(self):
        result = time_fast_path(star(3, 0.2, 1024), FlowParams(lam=0.5), repeats=1)
        assert 0.0 < result.stencil_gap <= RESAMPLING_TOL
        assert result.within_resampling_tol
        assert result.to_dict()["resampling_tol"] == RESAMPLING_TOL

    def test_speedup_and_target(self):
        result = BenchmarkResult(n=8, dense_seconds=2.0, circulant_seconds=0.1, max_gap=0.0)
        assert result.speedup == pytest.approx(20.0)
        assert result.met_target
        assert not BenchmarkResult(8, 1.0, 0.5, 0.0).met_target

    @pytest.mark.slow
    def test_fast_path_at_large_n(self):
        result = time_fast_path(star(3, 0.2, 4096), FlowParams(lam=1.0), repeats=1)
        assert result.max_gap <= 1e-8
        assert np.isfinite(result.speedup)
