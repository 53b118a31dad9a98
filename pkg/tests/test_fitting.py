import numpy as np
import pytest

from bilinear_hilbert.errors import ConfigurationError
from bilinear_hilbert.fitting import extrapolate, fit_rate

EPS = 0.1 * 0.5 ** np.arange(10)


def test_linear_rate():
    fit = fit_rate(EPS, EPS)
    assert fit.slope == pytest.approx(1.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_quadratic_rate():
    assert fit_rate(EPS, EPS**2).slope == pytest.approx(2.0, abs=1e-12)


def test_constant_rate():
    assert fit_rate(EPS, np.full(10, 3.0)).slope == pytest.approx(0.0, abs=1e-12)


def test_zero_values_dropped():
    vals = EPS.copy()
    vals[-3:] = 0.0
    fit = fit_rate(EPS, vals)
    assert fit.degenerate and fit.n_used == 7
    assert fit.slope == pytest.approx(1.0, abs=1e-12)


def test_short_ladder_rejected():
    with pytest.raises(ConfigurationError):
        fit_rate(EPS[:3], EPS[:3])


def test_extrapolate_linear_exact():
    ex = extrapolate(EPS, 3 + 2 * EPS)
    assert ex.limit == 3.0
    assert ex.reliable


def test_extrapolate_quadratic():
    ex = extrapolate(EPS, 3 + EPS + 5 * EPS**2)
    assert abs(ex.limit - 3.0) < 1e-12


def test_extrapolate_flags_noise():
    # smooth ladder with a single outlier far above the typical step
    vals = 1.0 + 1e-4 * EPS
    vals[5] += 1e-3
    assert not extrapolate(EPS, vals).reliable
