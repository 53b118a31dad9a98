import math

import numpy as np
import pytest

from bilinear_hilbert.catalog import GridSignal
from bilinear_hilbert.errors import TailError
from bilinear_hilbert.kernels import (
    KernelSpec,
    check_majorant,
    lemma6_kernel,
    lemma6_phi,
    majorant_integral,
    majorant_psi,
    poisson_kernel,
    table_kernel,
)


def test_lemma6_branches():
    assert lemma6_phi(0.5) == pytest.approx(0.4)
    assert lemma6_phi(2.0) == pytest.approx(-0.1)
    assert lemma6_phi(0.0) == 0.0


def test_lemma6_odd():
    t = np.random.default_rng(3).uniform(-10, 10, 100)
    assert np.array_equal(lemma6_phi(-t), -lemma6_phi(t))


def test_lemma6_majorant_values():
    k = lemma6_kernel()
    assert majorant_psi(k, 0.0) == 0.5
    assert majorant_psi(k, 2.0) == pytest.approx(0.1, abs=1e-15)


def test_lemma6_majorant_integral():
    assert abs(majorant_integral(lemma6_kernel()) - (1 + math.log(2))) < 1e-9


def test_poisson_majorant_integral():
    assert abs(majorant_integral(poisson_kernel()) - 1.0) < 1e-9


def test_majorants_dominate():
    xs = np.linspace(0, 20, 201)
    assert check_majorant(lemma6_kernel(), xs)
    assert check_majorant(poisson_kernel(), xs)


def test_numeric_majorant_matches_closed_form():
    k = lemma6_kernel()
    custom = KernelSpec("copy", k.phi, 0.0, "odd", breaks=(1.0,))
    for x in (0.0, 0.5, 1.5, 3.0):
        assert majorant_psi(custom, x) == pytest.approx(majorant_psi(k, x), rel=1e-9)


def test_slow_kernel_rejected():
    k = KernelSpec("slow", lambda t: 1.0 / (1.0 + np.abs(t)), 0.0, "even")
    with pytest.raises(TailError):
        majorant_psi(k, 1.0)


def test_table_kernel():
    t = np.linspace(-1, 1, 201)
    k = table_kernel(GridSignal(0.75 * (1 - t * t), -1.0, 0.01))
    assert k.parity == "even"
    assert k.integral == pytest.approx(1.0, abs=1e-8)
