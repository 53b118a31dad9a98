"""Reference values computed without the package under test.

Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt has its own series
and continued-fraction evaluations here; the transform oracles go through
mpmath's tanh-sinh quadrature or QUADPACK's Cauchy-weight rule instead of the
package's Gauss-Kronrod code.
"""

import math

import mpmath
import numpy as np
from scipy.integrate import quad

mpmath.mp.dps = 30


def dawson_series(x, terms=200):
    """F(x) = sum_n (-1)^n 2^n x^(2n+1) / (2n+1)!!, good for |x| <~ 3."""
    x = mpmath.mpf(x)
    term = x
    total = term
    for n in range(1, terms):
        term *= -2 * x * x / (2 * n + 1)
        total += term
        if abs(term) < mpmath.mpf(10) ** (-mpmath.mp.dps):
            break
    return float(total)


def dawson_cf(x, depth=400):
    """F(x) = x / (1 + 2x^2/(3 - 4x^2/(5 + 6x^2/(7 - ...)))), bottom-up."""
    x = mpmath.mpf(x)
    x2 = x * x
    tail = mpmath.mpf(2 * depth + 1)
    for k in range(depth, 0, -1):
        sign = 1 if k % 2 == 1 else -1
        tail = (2 * k - 1) + sign * 2 * k * x2 / tail
    return float(x / tail)


def hilbert_gaussian(x, width=1.0):
    """p.v. int exp(-((x-t)/w)^2) / t dt = 2 sqrt(pi) F(x/w)."""
    return 2.0 * math.sqrt(math.pi) * dawson_series(x / width)


def _h(f, g, x, alpha):
    return lambda t: f(x - t) * g(x + alpha * t)


def truncated_mp(f, g, x, alpha, eps, R=mpmath.inf):
    """int_{eps<|t|<R} f(x-t) g(x+alpha t) / t dt by tanh-sinh."""
    h = _h(f, g, x, alpha)
    pts = [eps, 1, 4, R] if R == mpmath.inf or R > 4 else [eps, R]
    return float(mpmath.quad(lambda t: (h(t) - h(-t)) / t, pts))


def regularized_mp(f, g, x, alpha, eps):
    """int f(x-t) g(x+alpha t) / (t + i eps) dt as a complex number."""
    h = _h(f, g, x, alpha)
    pts = [0, eps, 10 * eps, 1, 4, mpmath.inf]
    re = mpmath.quad(lambda t: (h(t) - h(-t)) * t / (t * t + eps * eps), pts)
    im = -eps * mpmath.quad(lambda t: (h(t) + h(-t)) / (t * t + eps * eps), pts)
    return complex(float(re), float(im))


def truncated_qawc(f, g, x, alpha, eps, R):
    """Truncated transform via QUADPACK's Cauchy principal-value rule.

    p.v. int_{-R}^{R} h(t)/t dt minus the inner p.v. piece over (-eps, eps).
    """
    def h(t):
        return f(x - t) * g(x + alpha * t)

    outer = quad(h, -R, R, weight="cauchy", wvar=0.0, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
    inner = quad(h, -eps, eps, weight="cauchy", wvar=0.0, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
    return outer - inner


def gauss(center=0.0, width=1.0):
    return lambda t: mpmath.exp(-((t - center) / width) ** 2)


def np_gauss(center=0.0, width=1.0):
    return lambda t: np.exp(-((np.asarray(t) - center) / width) ** 2)
