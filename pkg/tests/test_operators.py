import math

import mpmath
import numpy as np
import pytest

from bilinear_hilbert import catalog
from bilinear_hilbert.catalog import make_function
from bilinear_hilbert.errors import ConfigurationError, DomainError
from bilinear_hilbert.fitting import fit_rate
from bilinear_hilbert.kernels import lemma6_kernel, poisson_kernel
from bilinear_hilbert.operators import (
    BhtParams,
    bht_pv,
    bht_regularized,
    bht_truncated,
    check_alpha,
    invert_product,
    lemma6_gap,
    mollifier_pair,
    mollifier_sweep,
    poisson_residual,
    suggest_radius,
)
from bilinear_hilbert.quadrature import QuadConfig

from oracles import gauss, hilbert_gaussian, regularized_mp, truncated_mp

TIGHT = QuadConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=4000)
ONE = make_function(catalog.constant(1.0))
ZERO = make_function(catalog.constant(0.0))
G = make_function(catalog.gaussian())


@pytest.mark.parametrize("alpha", [-3.0, -0.5, 0.7, 2.0])
def test_truncated_constants(alpha):
    assert bht_truncated(ONE, ONE, 0.3, BhtParams(alpha, 0.01, 50.0)) == 0.0


def test_truncated_linear():
    f = make_function(catalog.polynomial((0.0, 1.0)))
    assert bht_truncated(f, ONE, 0.0, BhtParams(1.0, 0.1, 2.0)) == pytest.approx(-3.8, abs=1e-13)


def test_truncated_gaussian_pair_against_oracle():
    v = bht_truncated(G, G, 0.5, BhtParams(2.0, 1e-4, 8.0, TIGHT))
    assert v == bht_truncated(G, G, 0.5, BhtParams(2.0, 1e-4, 8.0, TIGHT))
    assert abs(v - truncated_mp(gauss(), gauss(), 0.5, 2.0, 1e-4, 8)) < 1e-8


def test_pv_constants():
    rep = bht_pv(ONE, ONE, 0.0, 1.0)
    assert rep.extrapolated == 0.0
    assert np.all(rep.values == 0.0)


@pytest.mark.parametrize("alpha", [1.0, -2.5])
def test_pv_linear_hilbert_case(alpha):
    rep = bht_pv(G, ONE, 1.0, alpha, quad=TIGHT)
    assert abs(rep.extrapolated - hilbert_gaussian(1.0)) < 1e-6


def test_pv_gaussian_pair_against_oracle():
    rep = bht_pv(G, G, 0.5, 2.0, quad=TIGHT)
    oracle = truncated_mp(gauss(), gauss(), 0.5, 2.0, 1e-7)
    assert abs(rep.extrapolated - oracle) < 1e-6


def test_regularized_constants():
    v = bht_regularized(ONE, ONE, 0.0, BhtParams(1.0, 0.01, 100.0))
    assert (v.re, v.im) == (0.0, -math.pi)


def test_regularized_zero():
    v = bht_regularized(ZERO, G, 0.0, BhtParams(1.0, 0.01, 100.0))
    assert (v.re, v.im) == (0.0, 0.0)


def test_regularized_gaussian_pair_against_oracle():
    v = bht_regularized(G, G, 0.5, BhtParams(2.0, 0.01, 8.0, TIGHT))
    ref = regularized_mp(gauss(), gauss(), 0.5, 2.0, 0.01)
    assert abs(complex(v) - ref) < 1e-8


def test_poisson_residual_constants():
    for eps in (0.1, 0.01, 0.001):
        assert poisson_residual(ONE, ONE, 0.0, 1.0, eps) == 0.0


def test_poisson_residual_decays_at_smooth_point():
    eps = 0.1 * 0.5 ** np.arange(8)
    vals = [abs(poisson_residual(G, ONE, 0.0, 1.0, e)) for e in eps]
    assert fit_rate(eps, vals).slope >= 0.9


def test_poisson_residual_persists_at_jump():
    jump = make_function(catalog.sign_jump())
    for eps in (0.01, 0.001, 1e-4):
        assert abs(poisson_residual(jump, ONE, 0.0, 1.0, eps, R=100.0)) > 0.1


def test_gap_constants():
    assert lemma6_gap(ONE, ONE, 0.2, 1.0, 0.05) == 0.0


def test_gap_decays():
    eps = np.geomspace(0.1, 1e-4, 7)
    vals = [abs(lemma6_gap(G, G, 0.5, 2.0, e)) for e in eps]
    assert fit_rate(eps, vals).slope >= 0.9


def test_gap_consistency_random_configs():
    rng = np.random.default_rng(11)
    kinds = [catalog.gaussian(width=1.3), catalog.lorentzian(), catalog.smooth_bump(support=2.0),
             catalog.oscillatory(frequency=2.0)]
    for _ in range(20):
        f = make_function(kinds[rng.integers(len(kinds))])
        g = make_function(kinds[rng.integers(len(kinds))])
        x, alpha, eps = rng.uniform(-1, 1), rng.choice([-2.0, -0.5, 0.7, 1.5]), 10 ** rng.uniform(-3, -1)
        R = suggest_radius(f, g, x, alpha)
        p = BhtParams(alpha, eps, R)
        direct = bht_regularized(f, g, x, p).re - bht_truncated(f, g, x, p)
        assert abs(lemma6_gap(f, g, x, alpha, eps) - direct) <= 1e-12
        # independent route: the odd difference kernel integrated directly
        kernel_route = mollifier_pair(f, g, x, alpha, lemma6_kernel(), eps, R)
        assert abs(kernel_route - direct) < 1e-8


def test_invert_constants_exact():
    recovered, rep = invert_product(ONE, ONE, 0.7, 1.3)
    assert recovered == 1.0
    assert rep.flags == ()


def test_invert_gaussian_pair():
    recovered, rep = invert_product(G, G, 0.5, 2.0)
    assert abs(recovered - math.exp(-0.5)) < 1e-5
    assert abs(rep.imag_residue) < 1e-6


def test_invert_gaussian_bump():
    bump = make_function(catalog.smooth_bump(support=3.0))
    recovered, _ = invert_product(G, bump, 0.25, 0.7)
    assert abs(recovered - G(0.25) * bump(0.25)) < 1e-5


def test_invert_rejects_bad_point():
    with pytest.raises(DomainError):
        invert_product(make_function(catalog.sign_jump()), ONE, 0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.0, -1.0, float("nan")])
def test_alpha_guard(alpha):
    with pytest.raises(ConfigurationError):
        check_alpha(alpha)


def test_mollifier_poisson_constants():
    for eps in (0.1, 0.01):
        assert mollifier_pair(ONE, ONE, 0.0, 1.0, poisson_kernel(), eps) == pytest.approx(1.0, abs=1e-15)


def test_mollifier_lemma6_to_zero():
    rep = mollifier_sweep(G, G, 0.3, 2.0, lemma6_kernel())
    assert abs(rep.extrapolated) < 1e-5


def test_mollifier_poisson_to_product():
    rep = mollifier_sweep(G, G, 0.3, 2.0, poisson_kernel())
    assert abs(rep.extrapolated - math.exp(-0.18)) < 1e-5


def test_regularized_matches_mp_on_lorentzian():
    lor = make_function(catalog.lorentzian())
    v = bht_regularized(lor, G, 0.2, BhtParams(-0.5, 0.05, suggest_radius(lor, G, 0.2, -0.5), TIGHT))
    ref = regularized_mp(lambda t: 1 / (1 + t * t), gauss(), 0.2, -0.5, 0.05)
    assert abs(complex(v) - ref) < 1e-8
