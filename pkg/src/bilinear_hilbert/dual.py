"""Scalar checks of the distributional corollary.

* the Leibniz rule for x-derivatives of the regularized transform,
* the weak limit of ``H_eps - H + i*pi*f*g`` against a smooth test function,
* an empirical ``||H(f,g)||_p / (||f||_p1 ||g||_p2)`` probe (report only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np

from . import catalog
from .catalog import CatalogFunction, FunctionSpec
from .errors import ConfigurationError
from .operators import (
    BhtParams,
    ComplexValue,
    bht_regularized,
    bht_truncated_err,
    check_alpha,
    suggest_radius,
)
from .quadrature import DEFAULT, QuadConfig, integrate_adaptive, tail_radius

FD_QUAD = QuadConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=4000)
PAIRING_QUAD = QuadConfig(rel_tol=1e-10, abs_tol=1e-14)
LEIBNIZ_TOL = {1: 1e-4, 2: 1e-3}
# numerators of the fourth-order central differences; divide by 12 h^m
STENCILS = {1: (1.0, -8.0, 0.0, 8.0, -1.0), 2: (-1.0, 16.0, -30.0, 16.0, -1.0)}


def _spec(fn) -> FunctionSpec:
    if isinstance(fn, FunctionSpec):
        return fn
    if isinstance(fn, CatalogFunction) and fn.order == 0:
        return fn.spec
    raise ConfigurationError("closed-form derivatives need a catalog entry")


class LeibnizResult(NamedTuple):
    residual: float
    rounding_estimate: float
    inconclusive: bool


def leibniz_residual(f, g, x: float, alpha: float, eps: float, m: int, *, R=None,
                     quad: QuadConfig = FD_QUAD, tol: float | None = None) -> LeibnizResult:
    """``|FD_m of x -> H_eps(f,g)(x)  -  sum_k C(m,k) H_eps(f^(k), g^(m-k))(x)|``.

    Fourth-order central differences use step ``eps/10``.  The result is flagged
    inconclusive when the propagated quadrature error of the difference
    quotient exceeds ``tol``.
    """
    if m not in (1, 2):
        raise ConfigurationError("m must be 1 or 2")
    alpha = check_alpha(alpha)
    fs, gs = _spec(f), _spec(g)
    f0, g0 = catalog.make_function(fs), catalog.make_function(gs)
    h = eps / 10.0
    if R is None:
        R = suggest_radius(f0, g0, x, alpha, quad.abs_tol) + 4 * h
    p = BhtParams(alpha, eps, R, quad)

    def H(fn, gn, at):
        v = bht_regularized(fn, gn, at, p)
        return complex(v), v.err_re + v.err_im

    # five-point central stencils (fourth order) at offsets -2h .. 2h
    offsets = (-2, -1, 0, 1, 2)
    weights = STENCILS[m]
    fd, rounding = 0j, 0.0
    for k, w in zip(offsets, weights):
        if w == 0:
            continue
        val, err = H(f0, g0, x + k * h)
        fd += w * val
        rounding += abs(w) * err
    scale = 12.0 * h**m
    fd /= scale
    rounding /= scale
    total = 0j
    for k in range(m + 1):
        val, err = H(catalog.derivative(fs, k), catalog.derivative(gs, m - k), x)
        total += comb(m, k) * val
        rounding += comb(m, k) * err
    tol = LEIBNIZ_TOL[m] if tol is None else tol
    return LeibnizResult(abs(fd - total), rounding, rounding > tol)


@dataclass(frozen=True)
class TestPairing:
    """Smooth compactly supported test function for the dual pairings."""

    psi: FunctionSpec
    support_radius: float
    pairing_quad: QuadConfig = PAIRING_QUAD

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not self.support_radius > 0:
            raise ConfigurationError("support radius must be positive")
        fn = catalog.make_function(self.psi)
        c = self.center
        s = self.support_radius
        outside = np.concatenate([c - s * np.linspace(1.0, 3.0, 8), c + s * np.linspace(1.0, 3.0, 8)])
        if np.any(fn(outside) != 0.0):
            raise ConfigurationError("test function does not vanish outside its stated support")

    @property
    def center(self) -> float:
        return self.psi.params.get("center", 0.0)

    @property
    def interval(self) -> tuple[float, float]:
        return self.center - self.support_radius, self.center + self.support_radius


def pairing(psi_support: float = 2.0, center: float = 0.0) -> TestPairing:
    return TestPairing(catalog.smooth_bump(center=center, support=psi_support), psi_support)


def _pairing_radius(f, g, alpha, pair: TestPairing, quad: QuadConfig) -> float:
    a, b = pair.interval
    return max(suggest_radius(f, g, a, alpha, quad.abs_tol), suggest_radius(f, g, b, alpha, quad.abs_tol))


def weak_limit_residual(f, g, psi: TestPairing, alpha: float, eps: float, *,
                        quad: QuadConfig = DEFAULT) -> ComplexValue:
    """``int [H_eps(f,g)(x) - H^eps(f,g)(x) + i pi f(x) g(x)] psi(x) dx``.

    ``H^eps`` is the transform truncated at the same eps.  The bracket tends
    to zero pointwise, so the pairing tends to zero with eps.
    """
    alpha = check_alpha(alpha)
    R = _pairing_radius(f, g, alpha, psi, quad)
    p = BhtParams(alpha, eps, R, quad)
    test_fn = catalog.make_function(psi.psi)

    def bracket(x):
        reg = bht_regularized(f, g, x, p)
        trunc = bht_truncated_err(f, g, x, p).value
        return reg.re - trunc, reg.im + math.pi * f(x) * g(x)

    def component(index):
        def integrand(xs):
            flat = np.ravel(xs)
            vals = np.array([bracket(xv)[index] for xv in flat]) * test_fn(flat)
            return vals.reshape(np.shape(xs))
        return integrand

    a, b = psi.interval
    re = integrate_adaptive(component(0), a, b, psi.pairing_quad)
    im = integrate_adaptive(component(1), a, b, psi.pairing_quad)
    return ComplexValue(re.value, im.value, re.err_est, im.err_est)


# -- norm probe ----------------------------------------------------------------

def _window(fn) -> tuple[float, float]:
    d = getattr(fn, "decay", None)
    if d is None:
        raise ConfigurationError(f"{getattr(fn, 'label', fn)} does not decay; the norm probe needs L^p inputs")
    r = tail_radius(d, 1e-12)
    return d.center - r, d.center + r


def _gl_norm(fn, lo: float, hi: float, p: float, panels: int = 64, order: int = 20) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.abs(fn(pts.ravel())).reshape(pts.shape) ** p
    return float(np.sum(vals @ weights * half)) ** (1.0 / p)


@dataclass(frozen=True)
class NormProbe:
    ratio: float
    norm_h: float
    norm_f: float
    norm_g: float
    p: float
    window: tuple[float, float]
    n_grid: int


def norm_probe(f, g, alpha: float, p1: float, p2: float, *, n_grid: int = 401,
               pv_eps: float = 1e-10, quad: QuadConfig = DEFAULT) -> NormProbe:
    """Estimate ``||H(f,g)||_p / (||f||_p1 ||g||_p2)`` with ``1/p = 1/p1 + 1/p2``.

    The x-window is the union of the tail windows of ``f`` and ``g`` scaled
    by ``1 + |alpha|``; the outer norm uses composite Simpson on ``n_grid``
    points.  No claim about the boundedness constant is made.
    """
    alpha = check_alpha(alpha)
    if p1 < 1 or p2 < 1:
        raise ConfigurationError("p1, p2 must be >= 1")
    p = p1 * p2 / (p1 + p2)
    if p <= 2.0 / 3.0:
        raise ConfigurationError(f"p = {p} must exceed 2/3")
    if n_grid < 5 or n_grid % 2 == 0:
        raise ConfigurationError("n_grid must be odd and >= 5")
    fa, fb = _window(f)
    ga, gb = _window(g)
    reach = (1 + abs(alpha)) * max(abs(fa), abs(fb), abs(ga), abs(gb))
    window = (-reach, reach)
    norm_f = _gl_norm(f, fa, fb, p1)
    norm_g = _gl_norm(g, ga, gb, p2)
    xs = np.linspace(window[0], window[1], n_grid)
    vals = []
    for x in xs:
        R = suggest_radius(f, g, x, alpha, quad.abs_tol)
        vals.append(bht_truncated_err(f, g, x, BhtParams(alpha, pv_eps, max(R, 2 * pv_eps), quad)).value)
    integrand = np.abs(np.array(vals)) ** p
    dx = xs[1] - xs[0]
    w = np.ones(n_grid)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    norm_h = float(np.sum(w * integrand) * dx / 3.0) ** (1.0 / p)
    if norm_h == 0.0:
        ratio = 0.0
    else:
        ratio = norm_h / (norm_f * norm_g)
    return NormProbe(ratio, norm_h, norm_f, norm_g, p, window, n_grid)
