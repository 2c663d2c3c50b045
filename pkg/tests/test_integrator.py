import math

import numpy as np
import pytest

from sobolev.errors import BlowUpError
from sobolev.integrator import (
    COUPLING,
    ERROR_WEIGHTS,
    NODES,
    WEIGHTS,
    embedded_step,
    next_step_size,
)


def test_tableau_rows_sum_to_nodes():
    for node, row in zip(NODES, COUPLING, strict=True):
        assert sum(row) == pytest.approx(node, abs=1e-12)
    assert sum(WEIGHTS) == pytest.approx(1.0, abs=1e-12)
    assert sum(ERROR_WEIGHTS) == pytest.approx(0.0, abs=1e-12)


def test_exponential_decay_step():
    result = embedded_step(lambda y: -y, np.array([1.0]), 0.1)
    assert result.y[0] == pytest.approx(math.exp(-0.1), abs=1e-6)
    assert 0 < abs(result.error[0]) < 1e-6


def test_cubic_quadrature_is_exact():
    # y = (t, x) with x' = 4 t^3
    def rhs(y):
        return np.array([1.0, 4.0 * y[0] ** 3])

    t0, dt = 0.5, 0.3
    result = embedded_step(rhs, np.array([t0, 0.0]), dt)
    assert result.y[0] == pytest.approx(t0 + dt, abs=1e-14)
    assert result.y[1] == pytest.approx((t0 + dt) ** 4 - t0**4, abs=1e-12)


def test_first_stage_is_reused():
    calls = []

    def rhs(y):
        calls.append(y.copy())
        return -y

    y = np.array([2.0])
    embedded_step(rhs, y, 0.1, first_stage=-y)
    assert len(calls) == 5


def test_non_finite_slope_raises_blow_up_with_stage():
    with pytest.raises(BlowUpError) as excinfo:
        embedded_step(lambda y: np.full_like(y, np.inf), np.ones(3), 0.1, t=2.0)
    assert excinfo.value.stage == 1
    assert excinfo.value.t == pytest.approx(2.0)


def test_next_step_size_controller_limits():
    assert next_step_size(0.1, 1.0) == pytest.approx(0.09)
    assert next_step_size(0.1, 0.0) == pytest.approx(0.5)
    assert next_step_size(0.1, 1e12) == pytest.approx(0.02)
    assert next_step_size(0.1, 1e-12) == pytest.approx(0.5)
