import pytest

from features.verify import DEFAULT_CORPUS, run_verification

ALWAYS_PASSING = (
    "kernel_normalization",
    "kernel_row_sums",
    "velocity_sup_bound",
    "velocity_derivative_bound",
    "form_equivalence",
    "length_monotone",
    "length_decay",
    "sup_norm_monotone",
    "immersion_bound",
    "energy_identity",
)


@pytest.mark.slow
def test_bounds_hold_on_the_corpus_for_both_kernel_widths():
    results = run_verification([0.1, 1.0], n=512, t_end=2.0, workers=3)
    assert len(results) == 6
    for result in results:
        assert result.error is None, result.error
        report = result.report
        assert report.passed, (result.case, result.lam, [r.to_dict() for r in report.failures])
        for name in ALWAYS_PASSING:
            assert report.get(name).status == "pass", (result.case, result.lam, name)
        if result.case in ("circle", "ellipse"):
            assert report.get("convexity_bound").status == "pass", (result.case, result.lam)
        if result.case == "circle":
            assert report.get("circle_oracle").status == "pass", result.lam


@pytest.mark.slow
def test_circle_extinction_for_a_one_matches_the_closed_form():
    (circle_case,) = [case for case in DEFAULT_CORPUS if case.name == "circle"]
    (result,) = run_verification([1.0], a=1.0, n=256, t_end=100.0, corpus=[circle_case])
    assert result.report.passed
    record = result.report.get("extinction_time")
    assert record.status == "pass", record.to_dict()
