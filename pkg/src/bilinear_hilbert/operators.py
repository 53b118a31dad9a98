"""Bilinear Hilbert transform: truncated, principal-value and regularized forms.

All operators act on the slice ``h(t) = f(x - t) * g(x + alpha*t)`` and split
it into odd and even parts on ``t > 0``:

* ``d(t) = h(t) - h(-t)`` feeds every odd kernel (``1/t``, ``t/(t^2+eps^2)``),
* ``e(t) = h(t) + h(-t)`` feeds every even kernel (the Poisson kernel).

Even integrals over the whole line use the symmetric limit: when ``e`` has a
finite far-field value ``e_inf`` its contribution is integrated in closed
form, so ``H_eps(1, 1) = -i*pi`` holds to rounding.  Odd integrals are
truncated at ``|t| <= R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError
from .fitting import extrapolate, fit_rate, ZERO_FLOOR
from .kernels import KernelSpec
from .quadrature import (
    DEFAULT,
    QuadConfig,
    QuadResult,
    graded_points,
    integrate_adaptive,
    pv_symmetric_err,
    tail_radius,
)

ALPHA_MARGIN = 1e-9
DEFAULT_FIT_POINTS = 6
FALLBACK_RADIUS = 1000.0


def default_ladder(n: int = 10, start: float = 0.1) -> np.ndarray:
    """``start * 2**-k`` for ``k = 0 .. n-1``."""
    return start * 0.5 ** np.arange(n)


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or abs(alpha) <= ALPHA_MARGIN or abs(alpha + 1.0) <= ALPHA_MARGIN:
        raise ConfigurationError(f"alpha must avoid 0 and -1, got {alpha}")
    return alpha


def check_ladder(ladder) -> np.ndarray:
    eps = np.asarray(ladder, dtype=float)
    if eps.ndim != 1 or eps.size < 5:
        raise ConfigurationError("an eps ladder needs at least 5 entries")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ConfigurationError("eps ladder must be positive and strictly decreasing")
    return eps


@dataclass(frozen=True)
class BhtParams:
    alpha: float
    eps: float
    R: float
    quad: QuadConfig = DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if not 0 < self.eps < self.R:
            raise ConfigurationError(f"need 0 < eps < R, got eps={self.eps}, R={self.R}")


@dataclass(frozen=True)
class ComplexValue:
    re: float
    im: float
    err_re: float = 0.0
    err_im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite complex value ({self.re}, {self.im})")

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)


@dataclass
class ConvergenceReport:
    eps_ladder: np.ndarray
    values: np.ndarray
    extrapolated: float | complex | None
    fitted_rate: float
    residuals: np.ndarray
    flags: tuple[str, ...] = ()
    fit_points: int = DEFAULT_FIT_POINTS
    imag_residue: float | None = None
    misfit: float = 0.0

    @property
    def converged(self) -> bool:
        return self.extrapolated is not None and not self.flags


# -- integrand plumbing -------------------------------------------------------

def _attr(fn, name, default):
    # plain callables are treated as bounded and decaying, with no breaks
    return getattr(fn, name, default)


class _Slice:
    """``h(t) = f(x - t) g(x + alpha t)`` with the metadata of both factors."""

    def __init__(self, f: Callable, g: Callable, x: float, alpha: float):
        self.f, self.g, self.x, self.alpha = f, g, float(x), float(alpha)

    def __call__(self, t):
        return self.f(self.x - t) * self.g(self.x + self.alpha * t)

    def odd(self, t):
        return self(t) - self(-t)

    def even(self, t):
        return self(t) + self(-t)

    @property
    def breaks(self) -> list[float]:
        pts = [self.x - b for b in _attr(self.f, "breaks", ())]
        pts += [(b - self.x) / self.alpha for b in _attr(self.g, "breaks", ())]
        return pts

    def abs_breaks(self) -> list[float]:
        return sorted({abs(b) for b in self.breaks})

    def _far(self, side: int) -> float | None:
        fl = _attr(self.f, "far_limits", (0.0, 0.0))
        gl = _attr(self.g, "far_limits", (0.0, 0.0))
        # t -> side*inf sends x - t to -side*inf and x + alpha t to side*sign(alpha)*inf
        fv = None if fl is None else fl[0 if side > 0 else 1]
        gv = None if gl is None else gl[1 if side * self.alpha > 0 else 0]
        if fv == 0.0 or gv == 0.0:
            return 0.0
        if fv is None or gv is None:
            return None
        return fv * gv

    @property
    def even_far(self) -> float:
        """``lim e(t)`` as ``t -> inf``; 0 when unknown (truncation applies)."""
        plus, minus = self._far(+1), self._far(-1)
        if plus is None or minus is None:
            return 0.0
        return plus + minus

    def radius(self, tol: float) -> float:
        return suggest_radius(self.f, self.g, self.x, self.alpha, tol)


def suggest_radius(f, g, x: float, alpha: float, tol: float = 1e-12) -> float:
    """Truncation radius in ``t`` from the decay classes of ``f`` and ``g``."""
    candidates = []
    df = _attr(f, "decay", None)
    dg = _attr(g, "decay", None)
    if df is not None:
        candidates.append(tail_radius(df, tol) + abs(x - df.center))
    if dg is not None:
        candidates.append((tail_radius(dg, tol) + abs(x - dg.center)) / abs(alpha))
    if not candidates:
        return FALLBACK_RADIUS
    return max(min(candidates), 2.0)


def _half_line(fn, eps, R, cfg, breaks) -> QuadResult:
    pts = graded_points(eps, R) + [b for b in breaks if 0 < b < R]
    return integrate_adaptive(fn, 0.0, R, cfg, pts)


def _resolve_radius(sl: _Slice, R, cfg: QuadConfig) -> float:
    if R is not None:
        return float(R)
    if cfg.tail_radius is not None:
        return cfg.tail_radius
    return sl.radius(cfg.abs_tol)


# -- operators -----------------------------------------------------------------

def bht_truncated_err(f, g, x: float, p: BhtParams) -> QuadResult:
    sl = _Slice(f, g, x, p.alpha)
    return pv_symmetric_err(sl, p.eps, p.R, p.quad, sl.abs_breaks())


def bht_truncated(f, g, x: float, p: BhtParams) -> float:
    """``int_{eps<=|t|<=R} f(x-t) g(x+alpha t) / t dt``."""
    return bht_truncated_err(f, g, x, p).value


def bht_regularized(f, g, x: float, p: BhtParams) -> ComplexValue:
    """``int f(x-t) g(x+alpha t) / (t + i eps) dt`` as a (re, im) pair."""
    sl = _Slice(f, g, x, p.alpha)
    eps = p.eps
    breaks = sl.abs_breaks()
    re = _half_line(lambda t: sl.odd(t) * t / (t * t + eps * eps), eps, p.R, p.quad, breaks)
    e_inf = sl.even_far
    im = _half_line(lambda t: (sl.even(t) - e_inf) * eps / (t * t + eps * eps), eps, p.R, p.quad, breaks)
    return ComplexValue(re.value, -(e_inf * math.pi / 2 + im.value), re.err_est, im.err_est)


def poisson_residual_err(f, g, x: float, alpha: float, eps: float, R=None, quad: QuadConfig = DEFAULT) -> QuadResult:
    alpha = check_alpha(alpha)
    sl = _Slice(f, g, x, alpha)
    R = _resolve_radius(sl, R, quad)
    h0 = float(sl(0.0))
    e_inf = sl.even_far
    res = _half_line(lambda t: (sl.even(t) - e_inf) * eps / (t * t + eps * eps), eps, R, quad, sl.abs_breaks())
    return QuadResult((e_inf - 2.0 * h0) * math.pi / 2 + res.value, res.err_est)


def poisson_residual(f, g, x: float, alpha: float, eps: float, R=None, quad: QuadConfig = DEFAULT) -> float:
    """``int [f(x-t) g(x+alpha t) - f(x) g(x)] eps / (t^2 + eps^2) dt``."""
    return poisson_residual_err(f, g, x, alpha, eps, R, quad).value


def lemma6_gap(f, g, x: float, alpha: float, eps: float, R=None, quad: QuadConfig = DEFAULT) -> float:
    """Smoothed odd integral minus the truncated one; tends to 0 with eps."""
    alpha = check_alpha(alpha)
    R = _resolve_radius(_Slice(f, g, x, alpha), R, quad)
    p = BhtParams(alpha, eps, R, quad)
    return bht_regularized(f, g, x, p).re - bht_truncated(f, g, x, p)


def _bad_point_guard(f, g, x):
    for fn in (f, g):
        spec = getattr(fn, "spec", None)
        if spec is not None and any(abs(x - b) < 1e-12 for b in spec.known_bad_points):
            raise DomainError(f"x={x} is a known non-Lebesgue point of {spec.label}")


def _sweep_report(eps, values, fit_points) -> tuple[float | None, np.ndarray, float, bool]:
    if not 5 <= fit_points <= eps.size:
        raise ConfigurationError(f"fit_points must lie in [5, {eps.size}]")
    tail = slice(eps.size - fit_points, None)
    ex = extrapolate(eps[tail], values[tail])
    a0, a1, a2 = ex.coefficients
    resid = values - (a0 + a1 * eps + a2 * eps**2)
    return ex.limit, resid, ex.misfit, ex.reliable


def _rate(eps, values, limit) -> float:
    dev = np.abs(values - limit)
    if np.all(dev < ZERO_FLOOR):
        return float("nan")
    fit = fit_rate(eps, dev)
    return fit.slope


def bht_pv(f, g, x: float, alpha: float, ladder=None, *, R=None, quad: QuadConfig = DEFAULT,
           fit_points: int = DEFAULT_FIT_POINTS) -> ConvergenceReport:
    """Principal value by extrapolating truncated values along an eps ladder."""
    alpha = check_alpha(alpha)
    eps = check_ladder(default_ladder() if ladder is None else ladder)
    _bad_point_guard(f, g, x)
    R = _resolve_radius(_Slice(f, g, x, alpha), R, quad)
    values = np.array([bht_truncated(f, g, x, BhtParams(alpha, e, R, quad)) for e in eps])
    limit, resid, misfit, reliable = _sweep_report(eps, values, fit_points)
    flags = () if reliable else ("unreliable_extrapolation",)
    return ConvergenceReport(
        eps_ladder=eps,
        values=values,
        extrapolated=limit if reliable else None,
        fitted_rate=_rate(eps, values, limit),
        residuals=resid,
        flags=flags,
        fit_points=fit_points,
        misfit=misfit,
    )


def inversion_bracket(f, g, x: float, p: BhtParams) -> complex:
    """``(i/pi) * (H_eps(f,g)(x) - truncated H(f,g)(x))`` at one eps."""
    reg = bht_regularized(f, g, x, p)
    trunc = bht_truncated(f, g, x, p)
    return complex(-reg.im / math.pi, (reg.re - trunc) / math.pi)


def invert_product(f, g, x: float, alpha: float, ladder=None, *, R=None, quad: QuadConfig = DEFAULT,
                   fit_points: int = DEFAULT_FIT_POINTS, imag_tol: float = 1e-6):
    """Recover ``f(x) g(x)`` from the regularized and truncated transforms.

    Both pieces use the same eps at every ladder step.  Returns
    ``(recovered, report)``; the report carries the extrapolated imaginary
    residue and an ``inversion_failure`` flag when it exceeds ``imag_tol``.
    """
    alpha = check_alpha(alpha)
    eps = check_ladder(default_ladder() if ladder is None else ladder)
    _bad_point_guard(f, g, x)
    R = _resolve_radius(_Slice(f, g, x, alpha), R, quad)
    values = np.array([inversion_bracket(f, g, x, BhtParams(alpha, e, R, quad)) for e in eps])
    re_lim, re_res, re_mis, re_ok = _sweep_report(eps, values.real, fit_points)
    im_lim, im_res, im_mis, im_ok = _sweep_report(eps, values.imag, fit_points)
    flags = []
    if not (re_ok and im_ok):
        flags.append("unreliable_extrapolation")
    if abs(im_lim) > imag_tol:
        flags.append("inversion_failure")
    report = ConvergenceReport(
        eps_ladder=eps,
        values=values,
        extrapolated=complex(re_lim, im_lim),
        fitted_rate=_rate(eps, values.real, re_lim),
        residuals=re_res + 1j * im_res,
        flags=tuple(flags),
        fit_points=fit_points,
        imag_residue=im_lim,
        misfit=max(re_mis, im_mis),
    )
    return re_lim, report


def mollifier_pair_err(f, g, x: float, alpha: float, k: KernelSpec, eps: float, R=None,
                       quad: QuadConfig = DEFAULT) -> QuadResult:
    alpha = check_alpha(alpha)
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    sl = _Slice(f, g, x, alpha)
    R = _resolve_radius(sl, R, quad)
    kernel_breaks = [eps * abs(b) for b in k.breaks]
    breaks = sl.abs_breaks() + kernel_breaks
    if k.parity == "odd":
        return _half_line(lambda t: sl.odd(t) * k.phi_eps(t, eps), eps, R, quad, breaks)
    if k.parity == "even":
        e_inf = sl.even_far
        res = _half_line(lambda t: (sl.even(t) - e_inf) * k.phi_eps(t, eps), eps, R, quad, breaks)
        return QuadResult(e_inf * k.integral / 2 + res.value, res.err_est)
    pos = _half_line(lambda t: sl(t) * k.phi_eps(t, eps), eps, R, quad, breaks)
    neg = _half_line(lambda t: sl(-t) * k.phi_eps(-t, eps), eps, R, quad, breaks)
    return QuadResult(pos.value + neg.value, pos.err_est + neg.err_est)


def mollifier_pair(f, g, x: float, alpha: float, k: KernelSpec, eps: float, R=None,
                   quad: QuadConfig = DEFAULT) -> float:
    """``int f(x-t) g(x+alpha t) phi_eps(t) dt`` with ``phi_eps = phi(t/eps)/eps``."""
    return mollifier_pair_err(f, g, x, alpha, k, eps, R, quad).value


def mollifier_sweep(f, g, x: float, alpha: float, k: KernelSpec, ladder=None, *, R=None,
                    quad: QuadConfig = DEFAULT, fit_points: int = DEFAULT_FIT_POINTS) -> ConvergenceReport:
    """Pairings along an eps ladder with the extrapolated eps -> 0 limit."""
    eps = check_ladder(default_ladder() if ladder is None else ladder)
    values = np.array([mollifier_pair(f, g, x, alpha, k, e, R, quad) for e in eps])
    limit, resid, misfit, reliable = _sweep_report(eps, values, fit_points)
    return ConvergenceReport(
        eps_ladder=eps,
        values=values,
        extrapolated=limit if reliable else None,
        fitted_rate=_rate(eps, values, limit),
        residuals=resid,
        flags=() if reliable else ("unreliable_extrapolation",),
        fit_points=fit_points,
        misfit=misfit,
    )
