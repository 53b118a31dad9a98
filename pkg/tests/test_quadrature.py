import math

import numpy as np
import pytest

from bilinear_hilbert.catalog import Decay
from bilinear_hilbert.errors import AccuracyError, ConfigurationError, DomainError, TailError
from bilinear_hilbert.quadrature import QuadConfig, integrate_adaptive, pv_symmetric, tail_radius

from oracles import hilbert_gaussian

TIGHT = QuadConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=4000)


def test_linear():
    assert integrate_adaptive(lambda t: t, 0.0, 1.0).value == pytest.approx(0.5, abs=1e-15)


def test_gaussian_integral():
    v = integrate_adaptive(lambda t: np.exp(-t * t), -8.0, 8.0, TIGHT).value
    assert abs(v - math.sqrt(math.pi)) < 1e-9


def test_arctan_long_range():
    pts = list(np.geomspace(1.0, 1e6, 25))
    v = integrate_adaptive(lambda t: 1 / (1 + t * t), 0.0, 1e6, TIGHT, pts).value
    assert abs(v - math.pi / 2) < 1e-6


def test_error_estimate_is_honest():
    res = integrate_adaptive(lambda t: np.sqrt(t), 0.0, 1.0, TIGHT)
    assert abs(res.value - 2 / 3) <= max(res.err_est, 1e-15)


def test_budget_exhaustion():
    with pytest.raises(AccuracyError) as info:
        integrate_adaptive(lambda t: np.sin(1 / np.maximum(t, 1e-300)), 1e-6, 1.0,
                           QuadConfig(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=5))
    assert info.value.err_est > 0


def test_nonfinite_integrand():
    with pytest.raises(DomainError):
        integrate_adaptive(lambda t: np.where(t > 0.5, np.nan, t), 0.0, 1.0)


def test_pv_even_slice_vanishes():
    assert pv_symmetric(lambda t: np.ones_like(t), 0.3, 5.0) == 0.0


def test_pv_linear_slice():
    assert pv_symmetric(lambda t: t, 0.1, 2.0) == pytest.approx(3.8, abs=1e-13)


def test_pv_gaussian_slice():
    # truncating at eps loses about 2 h'(0) eps relative to the principal value
    h = lambda t: np.exp(-(1 - t) ** 2)
    eps = 1e-4
    v = pv_symmetric(h, eps, 8.0, TIGHT)
    assert abs(v + 2 * (2 / math.e) * eps - hilbert_gaussian(1.0)) < 1e-6


def test_pv_bad_window():
    with pytest.raises(ConfigurationError):
        pv_symmetric(lambda t: t, 2.0, 1.0)


def test_tail_radius_gaussian():
    R = tail_radius(Decay("gaussian", 1.0), 1e-12)
    assert R >= 6.0
    assert R**-1 * math.exp(-R * R) / 2 < 1e-12


def test_tail_radius_compact():
    assert tail_radius(Decay("compact", 3.0), 1e-9) == 4.0


def test_tail_radius_rational():
    R = tail_radius(Decay("rational", 1.0, power=2.0), 1e-6)
    assert R >= 1e6 * (1 - 1e-12)


def test_tail_radius_nonintegrable():
    with pytest.raises(TailError):
        tail_radius(Decay("rational", 1.0, power=1.0), 1e-6)
