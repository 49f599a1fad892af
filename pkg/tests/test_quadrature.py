import math

import numpy as np
import pytest

from genrabi.errors import QuadratureError
from genrabi.quadrature import CumulativeIntegral, adaptive_quad


def test_adaptive_quad_matches_analytic():
    assert adaptive_quad(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)
    assert adaptive_quad(lambda x: math.exp(-x), 0.0, 50.0) == pytest.approx(
        1.0, abs=1e-10)


def test_adaptive_quad_zero_width_interval():
    assert adaptive_quad(math.sin, 1.3, 1.3) == 0.0


def test_adaptive_quad_reports_nonconvergence():
    # divergent integrand: the subdivision limit is hit and the failure
    # carries the achieved estimate instead of silently returning it
    with pytest.raises(QuadratureError) as err:
        adaptive_quad(lambda x: 1.0 / x, 0.0, 1.0)
    assert "estimate" in str(err.value)


def test_cumulative_matches_antiderivative_on_ascending_grid():
    acc = CumulativeIntegral(math.cos)
    xs = np.linspace(0.0, 7.0, 113)
    vals = np.array([acc(float(x)) for x in xs])
    assert np.max(np.abs(vals - np.sin(xs))) < 1e-10


def test_cumulative_answers_behind_the_frontier():
    acc = CumulativeIntegral(math.cos)
    assert acc(6.0) == pytest.approx(math.sin(6.0), abs=1e-10)
    # queries behind the cached frontier reuse it rather than restarting
    assert acc(2.5) == pytest.approx(math.sin(2.5), abs=1e-10)
    assert acc(0.0) == 0.0


def test_cumulative_rejects_negative_argument():
    acc = CumulativeIntegral(math.cos)
    with pytest.raises(ValueError):
        acc(-0.1)
