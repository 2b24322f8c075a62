import math

import numpy as np
import pytest

from bellqft.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, QuadratureError, integrate_1d, integrate_2d


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    # Kronrod 15 integrates x^22 exactly, Gauss 7 integrates x^12
    assert KRONROD_WEIGHTS @ NODES ** 22 == pytest.approx(2 / 23, abs=1e-15)
    assert GAUSS_WEIGHTS @ NODES ** 12 == pytest.approx(2 / 13, abs=1e-15)


def test_smooth_1d():
    res = integrate_1d(np.cos, 0.0, 2.0, 1e-13)
    assert res.converged
    assert abs(res.value - math.sin(2.0)) < 1e-13


def test_log_endpoint_graded():
    # x = s^3 turns the log endpoint into a smooth-enough integrand
    res = integrate_1d(lambda s: np.log(s ** 3) * 3 * s * s, 0.0, 1.0, 1e-10)
    assert res.converged and abs(res.value + 1.0) < 1e-10


def test_ungraded_singularity_error_is_honest():
    res = integrate_1d(lambda x: 1 / np.sqrt(x), 0.0, 1.0, 1e-8)
    assert abs(res.value - 2.0) <= res.error


def test_vector_valued_1d():
    res = integrate_1d(lambda x: np.stack([x, x * x], axis=-1), 0.0, 1.0, 1e-14)
    assert np.allclose(res.value, [0.5, 1 / 3], atol=1e-14)


def test_complex_1d():
    res = integrate_1d(lambda x: np.exp(1j * x), 0.0, math.pi, 1e-13)
    assert abs(res.value - 2j) < 1e-13


def test_empty_interval():
    assert integrate_1d(np.sin, 1.0, 1.0, 1e-10).value == 0.0


def test_bad_tolerance():
    with pytest.raises(ValueError):
        integrate_1d(np.sin, 0.0, 1.0, 0.0)


def test_depth_cap_reports_failure():
    res = integrate_1d(lambda x: 1 / np.abs(x - 0.3), 0.0, 1.0, 1e-10, max_depth=4)
    assert not res.converged
    with pytest.raises(QuadratureError) as info:
        res.require()
    assert info.value.error == res.error


def test_gaussian_2d():
    res = integrate_2d(lambda x, y: np.exp(-x * x - y * y), (-6, 6), (-6, 6), 1e-12)
    assert res.converged and abs(res.value - math.pi) < 1e-11


def test_log_corner_2d_graded():
    # int_0^1 int_0^1 log(x y) = -2, with x = s^3, y = w^3
    res = integrate_2d(lambda s, w: np.log(s ** 3 * w ** 3) * 9 * s * s * w * w, (0, 1), (0, 1), 1e-9)
    assert res.converged and abs(res.value + 2.0) < 1e-9


def test_evaluation_budget_stops_refinement():
    res = integrate_2d(lambda x, y: 1 / np.sqrt(np.abs(x - y) + 1e-12), (0, 1), (0, 1), 1e-14, max_evaluations=200_000)
    assert not res.converged
    assert res.evaluations <= 200_000
