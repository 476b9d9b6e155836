import math

import numpy as np
import pytest

from holefree.geometry import ParameterError, PointCloud, sample_binomial
from holefree.rips import CliqueCapError
from holefree.theory import (ChiParams, SeriesDivergenceError, chi_2d_stationary_lambdas,
                             empirical_chi, expected_chi_2d, expected_chi_series)


def test_series_zero_intensity():
    assert expected_chi_series(ChiParams(0.0, 1.0, 10.0)) == 0.0


def test_series_vanishes_at_unit_density():
    assert abs(expected_chi_series(ChiParams(1.0, 1.0, 10.0))) < 1e-9


def test_series_matches_closed_form_at_half():
    series = expected_chi_series(ChiParams(0.5, 1.0, 10.0))
    assert series == pytest.approx(expected_chi_2d(0.5, 1.0, 10.0), rel=1e-9)


@pytest.mark.parametrize("lam", [k / 10 for k in range(1, 51)])
def test_series_matches_closed_form_grid(lam):
    series = expected_chi_series(ChiParams(lam, 1.0, 10.0))
    closed = expected_chi_2d(lam, 1.0, 10.0)
    # relative, with a unit floor for the exact zero at lam = 1
    assert abs(series - closed) <= 1e-9 * max(abs(closed), 1.0)


def test_series_other_dimensions():
    # d = 1: sum_k (-x)^k k / k! = -x e^{-x}, so E[chi] = (a/r) x e^{-x}
    x, a, r = 0.7, 10.0, 0.5
    lam = x / r
    assert expected_chi_series(ChiParams(lam, r, a, dim_d=1)) == pytest.approx(
        (a / r) * x * math.exp(-x), rel=1e-12)
    # d = 3: sum_k (-x)^k k^3 / k! = (-x^3 + 3x^2 - x) e^{-x}
    lam, r = 0.4, 1.0
    expected = -(a / r) ** 3 * (-lam ** 3 + 3 * lam ** 2 - lam) * math.exp(-lam)
    assert expected_chi_series(ChiParams(lam, r, a, dim_d=3)) == pytest.approx(expected, rel=1e-10)


def test_series_reports_non_convergence():
    with pytest.raises(SeriesDivergenceError):
        expected_chi_series(ChiParams(400.0, 1.0, 10.0, series_terms=5))


def test_closed_form_values():
    assert expected_chi_2d(1, 1, 10) == 0
    assert expected_chi_2d(0.01, 1, 10) == pytest.approx(100 * 0.01 * 0.99 * math.exp(-0.01))
    assert expected_chi_2d(0.01, 1, 10) == pytest.approx(0.9802, abs=1e-4)
    assert expected_chi_2d(2, 1, 10) < 0
    with pytest.raises(ParameterError):
        expected_chi_2d(-1, 1, 10)


def test_sign_structure():
    for x in np.linspace(0.01, 0.99, 50):
        assert expected_chi_2d(x, 1.0, 10.0) > 0
    for x in np.linspace(1.01, 15, 100):
        assert expected_chi_2d(x, 1.0, 10.0) < 0


def test_argmax_matches_stationary_point():
    grid = np.linspace(0, 15, 150001)
    values = [expected_chi_2d(l, 1.0, 10.0) for l in grid]
    best = grid[int(np.argmax(values))]
    lam_max, lam_min = chi_2d_stationary_lambdas(1.0)
    assert best == pytest.approx(lam_max, abs=1e-4)
    # the maximum sits in the percolation window around 0.5
    assert 0.3 < best < 0.6
    # derivative check by central differences
    h = 1e-6
    for lam in (lam_max, lam_min):
        slope = (expected_chi_2d(lam + h, 1, 10) - expected_chi_2d(lam - h, 1, 10)) / (2 * h)
        assert abs(slope) < 1e-6
    assert grid[int(np.argmin(values))] == pytest.approx(lam_min, abs=1e-4)


def test_empirical_chi_fixtures(triangle_cloud, hexagon_cloud):
    assert empirical_chi(sample_binomial(0, 10, seed=0), 1.0) == 0
    assert empirical_chi(triangle_cloud, 1.0) == 1
    assert empirical_chi(hexagon_cloud, 1.2) == 0


def test_empirical_chi_cap():
    cloud = PointCloud.from_points([(1 + 0.01 * k, 1.0) for k in range(8)], 10.0)
    with pytest.raises(CliqueCapError):
        empirical_chi(cloud, 1.0, size_cap=5)
    # one 8-clique: chi of a full simplex is 1
    assert empirical_chi(cloud, 1.0, size_cap=8) == 1
