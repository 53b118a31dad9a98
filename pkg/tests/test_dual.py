import numpy as np
import pytest

from bilinear_hilbert import catalog
from bilinear_hilbert.catalog import make_function
from bilinear_hilbert.dual import TestPairing, leibniz_residual, norm_probe, pairing, weak_limit_residual
from bilinear_hilbert.errors import ConfigurationError
from bilinear_hilbert.fitting import fit_rate

G = catalog.gaussian()
ONE = catalog.constant(1.0)


def test_leibniz_constants():
    assert leibniz_residual(ONE, ONE, 0.2, 1.0, 0.05, 1).residual < 1e-9


def test_leibniz_first_order():
    res = leibniz_residual(G, ONE, 0.4, 1.0, 0.05, 1)
    assert res.residual < 1e-4 and not res.inconclusive


def test_leibniz_second_order():
    res = leibniz_residual(G, G, 0.0, 1.0, 0.05, 2)
    assert res.residual < 1e-3 and not res.inconclusive


def test_leibniz_needs_closed_form():
    with pytest.raises(ConfigurationError):
        leibniz_residual(catalog.sign_jump(), ONE, 0.5, 1.0, 0.05, 1)


def test_weak_residual_zero_function():
    v = weak_limit_residual(make_function(catalog.constant(0.0)), make_function(G), pairing(), 1.0, 0.01)
    assert (v.re, v.im) == (0.0, 0.0)


def test_weak_residual_constants():
    one = make_function(ONE)
    for eps in (0.1, 0.01):
        assert abs(weak_limit_residual(one, one, pairing(), 1.0, eps)) < 1e-9


def test_weak_residual_decays():
    f = make_function(G)
    eps = np.geomspace(0.1, 1e-3, 5)
    mags = [abs(weak_limit_residual(f, f, pairing(2.0), 2.0, e)) for e in eps]
    assert np.all(np.diff(mags) < 0)
    assert fit_rate(eps, mags).slope >= 0.9


def test_pairing_support_checked():
    with pytest.raises(ConfigurationError):
        TestPairing(catalog.smooth_bump(support=3.0), 1.0)


def test_norm_probe_zero():
    zero = make_function(catalog.constant(0.0))
    assert norm_probe(zero, make_function(G), 2.0, 2, 2, n_grid=101).ratio == 0.0


def test_norm_probe_needs_decay():
    with pytest.raises(ConfigurationError):
        norm_probe(make_function(ONE), make_function(G), 2.0, 2, 2)


def test_norm_probe_refinement_and_homogeneity():
    f = make_function(G)
    coarse = norm_probe(f, f, 2.0, 2, 2, n_grid=201).ratio
    fine = norm_probe(f, f, 2.0, 2, 2, n_grid=401).ratio
    assert abs(fine - coarse) / fine < 0.01
    doubled = norm_probe(make_function(catalog.gaussian(amplitude=2.0)), f, 2.0, 2, 2, n_grid=201).ratio
    assert doubled == pytest.approx(coarse, rel=1e-6)
