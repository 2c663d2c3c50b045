import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sobolev.curve import circle, ellipse, star  # noqa: E402
from sobolev.types import FlowParams  # noqa: E402


@pytest.fixture
def unit_circle():
    return circle(1.0, 256)


@pytest.fixture
def smooth_corpus():
    return {
        "circle": circle(1.0, 512),
        "ellipse": ellipse(2.0, 1.0, 512),
        "star": star(3, 0.2, 512),
    }


@pytest.fixture
def default_params():
    return FlowParams(lam=1.0, a=2.0)
