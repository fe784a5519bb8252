"""Panel quadrature: exactness, adaptivity, and endpoint grading."""

import math

import numpy as np
import pytest

from chiralrmt.quadrature import adaptive_quad, fixed_quad, graded_edges, panel_points


def test_polynomial_exactness():
    val = fixed_quad(lambda x: x**2, np.array([0.0, 1.0]), npts=4)
    assert val == pytest.approx(1.0 / 3.0, rel=1e-15)


def test_gaussian_integral():
    val = adaptive_quad(lambda x: np.exp(-x * x), -10.0, 10.0, tol=1e-12)
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_negative_power_singularity():
    val = adaptive_quad(lambda x: x**-0.4, 0.0, 1.0, tol=1e-12, sing_exp=-0.4)
    assert val == pytest.approx(1.0 / 0.6, rel=1e-11)


def test_fractional_positive_power():
    # x^(1/2) has an unbounded derivative at 0; grading must still engage
    val = adaptive_quad(lambda x: np.sqrt(x), 0.0, 4.0, tol=1e-13, sing_exp=0.5)
    assert val == pytest.approx(16.0 / 3.0, rel=1e-12)


def test_complex_integrand():
    val = adaptive_quad(lambda x: np.exp(1j * x), 0.0, math.pi, tol=1e-13)
    assert val == pytest.approx(2.0j, abs=1e-12)


def test_oscillatory():
    val = adaptive_quad(lambda x: np.sin(40.0 * x), 0.0, 1.0, tol=1e-12, unit_width=0.5)
    assert val == pytest.approx((1.0 - math.cos(40.0)) / 40.0, abs=1e-12)


def test_graded_edges_cover_interval():
    edges = graded_edges(0.0, 25.0, sing_exp=-0.7)
    assert edges[0] == 0.0 and edges[-1] == 25.0
    assert np.all(np.diff(edges) > 0.0)


def test_graded_edges_uniform_for_smooth():
    edges = graded_edges(0.0, 10.0, sing_exp=2.0, unit_width=2.0)
    assert np.allclose(np.diff(edges), 2.0)


def test_panel_points_weights_sum_to_length():
    edges = graded_edges(0.0, 7.0, sing_exp=-0.4)
    _, w = panel_points(edges, 24)
    assert np.sum(w) == pytest.approx(7.0, rel=1e-14)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        graded_edges(1.0, 1.0)


def test_unresolvable_singularity_reported():
    from chiralrmt import QuadratureError

    with pytest.raises(QuadratureError):
        graded_edges(0.0, 1.0, sing_exp=-0.99)  # innermost edge would underflow
    with pytest.raises(QuadratureError):
        graded_edges(0.0, 1.0, sing_exp=-1.5)  # not integrable at all
