"""Log-log rate fits and polynomial extrapolation to eps -> 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

ZERO_FLOOR = 1e-15


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    n_used: int
    degenerate: bool = False


@dataclass(frozen=True)
class Extrapolation:
    limit: float
    misfit: float
    coefficients: tuple[float, ...]
    reliable: bool


def fit_rate(eps_ladder, values) -> RateFit:
    """Least-squares line through ``(log eps, log value)``.

    Values below :data:`ZERO_FLOOR` count as converged and are dropped; if
    fewer than two points remain the fit is flagged degenerate.
    """
    eps = np.asarray(eps_ladder, dtype=float)
    vals = np.asarray(values, dtype=float)
    if eps.shape != vals.shape or eps.size < 4:
        raise ConfigurationError("fit_rate needs matching ladders of length >= 4")
    if np.any(eps <= 0) or np.any(vals < 0):
        raise ConfigurationError("fit_rate takes positive eps and non-negative values")
    keep = vals >= ZERO_FLOOR
    if keep.sum() < 2:
        return RateFit(float("nan"), float("nan"), 0.0, int(keep.sum()), degenerate=True)
    lx = np.log(eps[keep])
    ly = np.log(vals[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return RateFit(float(slope), float(intercept), min(r2, 1.0), int(keep.sum()), degenerate=bool((~keep).any()))


def extrapolate(eps_ladder, values, model: str = "linear_quadratic") -> Extrapolation:
    """Fit ``a0 + a1*eps + a2*eps**2`` by least squares; the limit is ``a0``.

    The fit is flagged unreliable when the largest residual exceeds ten times
    the median absolute step between consecutive values (plus a rounding
    floor).
    """
    if model != "linear_quadratic":
        raise ConfigurationError(f"unknown extrapolation model {model!r}")
    eps = np.asarray(eps_ladder, dtype=float)
    vals = np.asarray(values, dtype=float)
    if eps.shape != vals.shape or eps.size < 5:
        raise ConfigurationError("extrapolate needs matching ladders of length >= 5")
    # scale eps to O(1) so the normal matrix is well conditioned
    s = float(np.max(np.abs(eps)))
    design = np.vander(eps / s, 3, increasing=True)
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    # one step of iterative refinement removes most of the solver rounding
    coef = coef + np.linalg.lstsq(design, vals - design @ coef, rcond=None)[0]
    resid = vals - design @ coef
    misfit = float(np.max(np.abs(resid)))
    steps = np.abs(np.diff(vals))
    # rounding floor so an exactly constant ladder is not flagged
    floor = 64 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(vals))))
    reliable = bool(np.isfinite(coef).all() and misfit <= 10.0 * float(np.median(steps)) + floor)
    coefficients = (float(coef[0]), float(coef[1] / s), float(coef[2] / s**2))
    return Extrapolation(coefficients[0], misfit, coefficients, reliable)
