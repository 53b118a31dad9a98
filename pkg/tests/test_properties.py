"""Property-based checks of the structural invariants."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from bilinear_hilbert import catalog
from bilinear_hilbert.catalog import make_function
from bilinear_hilbert.fitting import extrapolate, fit_rate
from bilinear_hilbert.kernels import lemma6_kernel, lemma6_phi, majorant_psi
from bilinear_hilbert.lebesgue import as_fraction, check_nesting, check_product, exponent_chain, theta
from bilinear_hilbert.operators import BhtParams, bht_regularized, bht_truncated

EPS = 0.1 * 0.5 ** np.arange(8)
alphas = st.floats(-3, 3).filter(lambda a: abs(a) > 0.1 and abs(a + 1) > 0.1)
xs = st.floats(-1.5, 1.5)
G = make_function(catalog.gaussian())


@given(st.floats(0.1, 3.0), st.floats(1e-3, 1e3))
def test_power_law_slope_recovered(power, scale):
    fit = fit_rate(EPS, scale * EPS**power)
    assert math.isclose(fit.slope, power, abs_tol=1e-9)
    assert fit.r_squared > 1 - 1e-12


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_quadratic_extrapolated_exactly(a0, a1, a2):
    ex = extrapolate(EPS, a0 + a1 * EPS + a2 * EPS**2)
    assert math.isclose(ex.limit, a0, abs_tol=1e-11)


@given(st.floats(-50, 50))
def test_lemma6_kernel_odd(t):
    assert lemma6_phi(-t) == -lemma6_phi(t)


@given(st.floats(0, 30), st.floats(0, 1))
def test_majorant_dominates(x, frac):
    t = x + frac * 10
    assert majorant_psi(lemma6_kernel(), x) >= abs(lemma6_phi(t)) - 1e-16


@settings(max_examples=30, deadline=None)
@given(xs, alphas, st.floats(1e-3, 0.2), st.floats(0.1, 5.0))
def test_truncated_homogeneous(x, alpha, eps, c):
    scaled = make_function(catalog.gaussian(amplitude=c))
    p = BhtParams(alpha, eps, 12.0)
    assert math.isclose(bht_truncated(scaled, G, x, p), c * bht_truncated(G, G, x, p), rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=30, deadline=None)
@given(xs, alphas, st.floats(1e-3, 0.2))
def test_regularized_imag_is_minus_pi_times_poisson_mean(x, alpha, eps):
    # -Im(H_eps)/pi is an average of h against the Poisson kernel, so it is bounded by sup|f g|
    v = bht_regularized(G, G, x, BhtParams(alpha, eps, 12.0))
    assert -1e-12 <= -v.im / math.pi <= 1 + 1e-12


@settings(max_examples=25, deadline=None)
@given(xs, st.floats(1e-3, 0.5), st.floats(1.0, 6.0), st.floats(0, 1))
def test_nesting_margin_nonnegative(x, r, p1, frac):
    p2 = 1.0 + frac * (p1 - 1.0)
    assert check_nesting(G, x, r, p1, p2) >= -1e-9


@settings(max_examples=20, deadline=None)
@given(xs, st.floats(1e-3, 0.3), st.floats(-5.0, 5.0))
def test_theta_nonnegative_and_shift_invariant(x, r, shift):
    f = make_function(catalog.oscillatory(frequency=2.0, width=2.0))
    fs = make_function(catalog.polynomial((shift,)))
    summed = lambda t: f(t) + fs(t)  # noqa: E731
    assert theta(f, x, r, 2) >= 0
    assert math.isclose(theta(summed, x, r, 2), theta(f, x, r, 2), rel_tol=1e-8, abs_tol=1e-14)


@settings(max_examples=20, deadline=None)
@given(xs, st.floats(1e-3, 0.3), st.sampled_from([(2, 2), (3, 1.5), (4, 4), (6, 3), (8, 2)]))
def test_product_margins_nonnegative(x, r, ps):
    bump = make_function(catalog.smooth_bump(support=2.5))
    assert check_product(G, bump, x, r, *ps).min_margin >= -1e-9


@given(st.lists(st.integers(2, 12), min_size=2, max_size=5))
def test_exponent_chain_rational(ps):
    if sum(1 / as_fraction(p) for p in ps) > 1:
        return
    chain = exponent_chain(ps)
    assert 1 / chain[-1] == sum(1 / as_fraction(p) for p in ps)
    assert all(a > b for a, b in zip(chain, chain[1:]))
