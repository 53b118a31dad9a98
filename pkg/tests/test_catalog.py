import math

import numpy as np
import pytest

from bilinear_hilbert import catalog
from bilinear_hilbert.catalog import GridSignal, eval_offgrid, load_signal_csv, make_function, make_spec
from bilinear_hilbert.errors import ConfigurationError, DomainError, LoadError


def test_gaussian_at_center():
    assert make_function(catalog.gaussian())(0.0) == 1.0


def test_sign_jump_representative():
    f = make_function(catalog.sign_jump())
    assert f(0.0) == 1.0
    assert f(-1e-12) == -1.0


def test_power_cusp_value():
    assert make_function(catalog.power_cusp(0.5))(4.0) == 2.0


def test_vectorized_matches_scalar():
    f = make_function(catalog.oscillatory(frequency=3.0, width=1.5))
    xs = np.linspace(-3, 3, 17)
    assert np.array_equal(f(xs), np.array([f(x) for x in xs]))


def test_smooth_bump_peak_and_support():
    f = make_function(catalog.smooth_bump(support=3.0))
    assert f(0.0) == pytest.approx(1.0)
    assert f(3.0) == 0.0 and f(-5.0) == 0.0


def test_polynomial_coefficients_ascending():
    f = make_function(catalog.polynomial((1.0, 0.0, 2.0)))
    assert f(3.0) == pytest.approx(19.0)


def test_derivatives_match_finite_differences():
    for spec in (catalog.gaussian(width=0.7), catalog.smooth_bump(support=2.0), catalog.lorentzian()):
        f, d1, d2 = (catalog.derivative(spec, k) for k in range(3))
        x, h = 0.37, 1e-4
        assert d1(x) == pytest.approx((f(x + h) - f(x - h)) / (2 * h), rel=1e-6)
        assert d2(x) == pytest.approx((f(x + h) - 2 * f(x) + f(x - h)) / h**2, rel=1e-4)


def test_metadata():
    jump = catalog.sign_jump(center=0.5)
    assert jump.known_bad_points == (0.5,)
    assert not jump.in_lp(2) and jump.in_lp(math.inf)
    g = catalog.gaussian()
    assert g.known_bad_points == () and g.in_lp(1)
    assert g.decay is not None and catalog.constant().decay is None


def test_bad_parameters():
    with pytest.raises(ConfigurationError):
        catalog.gaussian(width=0.0)
    with pytest.raises(ConfigurationError):
        catalog.power_cusp(exponent=1.5)
    with pytest.raises(ConfigurationError):
        make_spec("no_such_kind")
    with pytest.raises(ConfigurationError):
        make_spec("gaussian", sigma=2.0)


def test_offgrid_node_exactness():
    s = GridSignal(np.array([0.0, 1.0, 2.0, 3.0]), 0.0, 1.0)
    assert eval_offgrid(s, 2.0) == 2.0


def test_offgrid_linear_midpoint():
    s = GridSignal(np.array([0.0, 1.0, 2.0, 3.0, 4.0]), 0.0, 1.0)
    assert eval_offgrid(s, 2.5) == pytest.approx(2.5, abs=1e-14)


def test_offgrid_gaussian_samples():
    xs = np.arange(-600, 601) * 0.01
    s = GridSignal(np.exp(-xs**2), -6.0, 0.01)
    assert eval_offgrid(s, 0.005) == pytest.approx(math.exp(-0.005**2), abs=1e-8)


def test_offgrid_outside_window():
    s = GridSignal(np.zeros(5), 0.0, 1.0)
    with pytest.raises(DomainError):
        eval_offgrid(s, 4.5)


def test_load_csv(tmp_path):
    p = tmp_path / "sig.csv"
    p.write_text("x,value\n" + "".join(f"{0.1 * i!r},{i * i}\n" for i in range(10)))
    s = load_signal_csv(p)
    assert s.n == 10 and s.dx == pytest.approx(0.1)
    f = make_function(catalog.sampled(s))
    assert f(0.3) == pytest.approx(9.0)
    assert f(5.0) == 0.0


def test_load_csv_rejects_nonuniform(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("0,1\n1,2\n2.001,3\n3,4\n4,5\n")
    with pytest.raises(LoadError):
        load_signal_csv(p)


def test_load_csv_rejects_garbage(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("0,1\n1,abc\n")
    with pytest.raises(LoadError):
        load_signal_csv(p)
