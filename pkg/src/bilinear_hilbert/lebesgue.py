"""p-Lebesgue-point diagnostics and the product inequalities built on them.

The basic quantity is the local mean oscillation

    theta_p(f, x, r) = (1/r) * int_{|t|<r} |f(x - t) - f(x)|**p dt,

and ``x`` is a p-Lebesgue point of ``f`` when it tends to 0 with ``r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError, ConfigurationError
from .fitting import ZERO_FLOOR, fit_rate
from .quadrature import QuadConfig, graded_points, integrate_adaptive

LEBESGUE_QUAD = QuadConfig(rel_tol=1e-12, abs_tol=1e-16, max_subdivisions=4000)

# classification thresholds
LEBESGUE_THETA = 1e-3
LEBESGUE_SLOPE = 0.2
JUMP_SLOPE = 0.05
JUMP_THETA = 1e-2
# p used as the large-p stand-in for ess.sup-based classes
SURROGATE_P = 8.0


@dataclass
class ThetaProfile:
    p: float
    x: float
    radii: np.ndarray
    theta: np.ndarray
    fitted_slope: float
    classification: str
    r_squared: float = float("nan")


def _breaks(fn) -> tuple[float, ...]:
    return tuple(getattr(fn, "breaks", ()))


def _local_mean(integrand: Callable, x: float, r: float, break_sources: Sequence, quad: QuadConfig) -> float:
    """``(1/r) * int_{-r}^{r} integrand(t) dt`` with splits at 0 and at breaks."""
    if not r > 0:
        raise ConfigurationError(f"radius must be positive, got {r}")
    near = graded_points(r * 1e-6, r)
    pts = [0.0] + near + [-p for p in near]
    for fn in break_sources:
        pts += [x - b for b in _breaks(fn)]
    return integrate_adaptive(integrand, -r, r, quad, pts).value / r


def theta(f: Callable, x: float, r: float, p: float, quad: QuadConfig = LEBESGUE_QUAD) -> float:
    """Local p-mean oscillation of ``f`` at ``x`` over radius ``r``."""
    if p < 1:
        raise ConfigurationError(f"p must be >= 1, got {p}")
    fx = f(x)
    return _local_mean(lambda t: np.abs(f(x - t) - fx) ** p, x, r, [f], quad)


def local_oscillation(f: Callable, x: float, r: float, n: int = 4001) -> float:
    """``max |f(x - t) - f(x)|`` over a sample of ``|t| <= r``."""
    t = np.linspace(-r, r, n)
    return float(np.max(np.abs(f(x - t) - f(x))))


def _classify(radii, th, slope) -> str:
    final = th[-1]
    if np.all(th[-4:] < ZERO_FLOOR):
        return "lebesgue_point"
    tail = th[-4:]
    decreasing = bool(np.all(np.diff(tail) < 0))
    if decreasing and final < LEBESGUE_THETA and slope > LEBESGUE_SLOPE:
        return "lebesgue_point"
    if abs(slope) < JUMP_SLOPE and final > JUMP_THETA:
        return "not_lebesgue"
    return "inconclusive"


def lebesgue_profile(f: Callable, x: float, p: float, radii, quad: QuadConfig = LEBESGUE_QUAD) -> ThetaProfile:
    """theta_p over a decreasing radius ladder, with log-log slope and class."""
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 6 or np.any(radii <= 0) or np.any(np.diff(radii) >= 0):
        raise ConfigurationError("radii must be positive, strictly decreasing, at least 6 entries")
    try:
        th = np.array([theta(f, x, r, p, quad) for r in radii])
    except AccuracyError:
        return ThetaProfile(p, x, radii, np.full(radii.size, np.nan), float("nan"), "inconclusive")
    fit = fit_rate(radii, th)
    slope = fit.slope if not math.isnan(fit.slope) else float("inf")
    return ThetaProfile(p, x, radii, th, fit.slope, _classify(radii, th, slope), fit.r_squared)


def infinity_profile(f: Callable, x: float, radii, quad: QuadConfig = LEBESGUE_QUAD):
    """Surrogate test for the ess.sup class: the p=8 profile must classify as
    a Lebesgue point and the sampled local oscillation must decrease to 0.

    Returns ``(is_point, profile, oscillations)``.
    """
    prof = lebesgue_profile(f, x, SURROGATE_P, radii, quad)
    osc = np.array([local_oscillation(f, x, r) for r in prof.radii])
    shrinking = bool(np.all(np.diff(osc) <= 0)) and osc[-1] < LEBESGUE_THETA
    return prof.classification == "lebesgue_point" and shrinking, prof, osc


# -- nesting ---------------------------------------------------------------------

def check_nesting(f: Callable, x: float, r: float, p1: float, p2: float, quad: QuadConfig = LEBESGUE_QUAD) -> float:
    """``2**(1 - p2/p1) * theta_p1**(p2/p1) - theta_p2`` (non-negative by Holder)."""
    if not 1 <= p2 <= p1:
        raise ConfigurationError(f"need 1 <= p2 <= p1, got p1={p1}, p2={p2}")
    a = p2 / p1
    return 2.0 ** (1.0 - a) * theta(f, x, r, p1, quad) ** a - theta(f, x, r, p2, quad)


# -- products ----------------------------------------------------------------------

def as_fraction(p) -> Fraction:
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if not math.isfinite(p) or p < 1:
        raise ConfigurationError(f"exponents must be finite and >= 1, got {p}")
    return Fraction(p).limit_denominator(10**6)


class Product:
    """Pointwise product of callables, keeping the union of their breaks."""

    def __init__(self, fns: Sequence[Callable]):
        self.fns = tuple(fns)

    def __call__(self, t):
        out = self.fns[0](t)
        for fn in self.fns[1:]:
            out = out * fn(t)
        return out

    @property
    def breaks(self):
        return tuple(b for fn in self.fns for b in _breaks(fn))


@dataclass
class ProductMargins:
    regime: str
    p1: Fraction
    p2: Fraction
    p3: Fraction
    theta_product: float
    bounds: dict = field(default_factory=dict)
    actuals: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)

    @property
    def margins(self) -> dict:
        return {k: self.bounds[k] - self.actuals[k] for k in self.bounds}

    @property
    def min_margin(self) -> float:
        return min(self.margins.values())


def check_product(f: Callable, g: Callable, x: float, r: float, p1, p2,
                  quad: QuadConfig = LEBESGUE_QUAD) -> ProductMargins:
    """Compare theta of ``f*g`` with the bounding expressions of the proof.

    Conjugate exponents (``1/p1 + 1/p2 = 1``) use the L^1 split; otherwise
    ``1/p1 + 1/p2 = 1/p3 < 1`` and the top-level split carries the convexity
    factor ``2**(p3 - 1)``.  ``margins`` holds bound minus actual per piece.
    """
    q1, q2 = as_fraction(p1), as_fraction(p2)
    s = 1 / q1 + 1 / q2
    if s > 1:
        raise ConfigurationError(f"1/p1 + 1/p2 = {s} exceeds 1")
    fp1, fp2 = float(q1), float(q2)
    fx, gx = float(f(x)), float(g(x))
    fg = Product([f, g])
    th_f1 = theta(f, x, r, fp1, quad)
    th_g2 = theta(g, x, r, fp2, quad)
    srcs = [f, g]

    if s == 1:
        K = theta(fg, x, r, 1.0, quad)
        I_act = _local_mean(lambda t: np.abs(f(x - t) - fx) * np.abs(g(x - t)), x, r, srcs, quad)
        J_act = abs(fx) * theta(g, x, r, 1.0, quad)
        I_bnd = th_f1 ** (1 / fp1) * (th_g2 ** (1 / fp2) + abs(gx) * 2.0 ** (1 / fp2))
        J_bnd = abs(fx) * 2.0 ** (1 - 1 / fp2) * th_g2 ** (1 / fp2)
        res = ProductMargins("conjugate", q1, q2, Fraction(1), K)
        res.bounds = {"split": I_act + J_act, "I": I_bnd, "J": J_bnd, "total": I_bnd + J_bnd}
        res.actuals = {"split": K, "I": I_act, "J": J_act, "total": K}
        return res

    q3 = 1 / s
    p3 = float(q3)
    K = theta(fg, x, r, p3, quad)
    I_act = _local_mean(lambda t: np.abs(g(x - t) - gx) ** p3 * np.abs(f(x - t)) ** p3, x, r, srcs, quad)
    J_act = abs(gx) ** p3 * theta(f, x, r, p3, quad)
    conv = 2.0 ** (p3 - 1)
    # Minkowski on the L^p1 norm of f(x - .) before raising to p3
    I_bnd = (th_f1 ** (1 / fp1) + 2.0 ** (1 / fp1) * abs(fx)) ** p3 * th_g2 ** (p3 / fp2)
    J_bnd = abs(gx) ** p3 * 2.0 ** (1 - p3 / fp1) * th_f1 ** (p3 / fp1)
    res = ProductMargins("sub_conjugate", q1, q2, q3, K)
    res.bounds = {"split": conv * (I_act + J_act), "I": I_bnd, "J": J_bnd, "total": conv * (I_bnd + J_bnd)}
    res.actuals = {"split": K, "I": I_act, "J": J_act, "total": K}
    # the bound in the textbook form, kept for comparison only
    res.reference = {"I_textbook": (th_f1 ** (p3 / fp1) + 2.0 ** (p3 / fp1) * abs(fx) ** p3) * th_g2 ** (p3 / fp2)}
    return res


def exponent_chain(ps: Sequence) -> list[Fraction]:
    """Intermediate exponents ``q_1 .. q_{n-1}`` of the pairwise reduction."""
    qs = [as_fraction(p) for p in ps]
    if len(qs) < 2:
        raise ConfigurationError("need at least two factors")
    total = sum(1 / q for q in qs)
    if total > 1:
        raise ConfigurationError(f"sum of 1/p_i = {total} exceeds 1")
    chain = []
    inv = 1 / qs[0]
    for q in qs[1:]:
        inv += 1 / q
        chain.append(1 / inv)
    return chain


@dataclass
class MultiProductResult:
    exponents: list[Fraction]
    steps: list[ProductMargins]
    theta_final: float

    @property
    def q_final(self) -> Fraction:
        return self.exponents[-1]

    @property
    def min_margin(self) -> float:
        return min(s.min_margin for s in self.steps)


def check_multi_product(fs: Sequence[Callable], ps: Sequence, x: float, r: float,
                        quad: QuadConfig = LEBESGUE_QUAD) -> MultiProductResult:
    """Iterate the two-factor reduction over ``f_1 * ... * f_n``.

    Step ``k`` pairs the running product (exponent ``q_{k-1}``, with
    ``q_0 = p_1``) with ``f_{k+1}``.  The final theta is that of the whole
    product at exponent ``q_{n-1}``.
    """
    if len(fs) != len(ps):
        raise ConfigurationError("one exponent per factor is required")
    chain = exponent_chain(ps)
    qs = [as_fraction(p) for p in ps]
    steps = []
    running = fs[0]
    q_prev = qs[0]
    for k in range(1, len(fs)):
        steps.append(check_product(running, fs[k], x, r, q_prev, qs[k], quad))
        running = Product([running, fs[k]])
        q_prev = chain[k - 1]
    return MultiProductResult(chain, steps, theta(running, x, r, float(chain[-1]), quad))


def product_profile(fs: Sequence[Callable], ps: Sequence, x: float, radii,
                    quad: QuadConfig = LEBESGUE_QUAD) -> ThetaProfile:
    """theta profile of the full product at the final chain exponent."""
    q = float(exponent_chain(ps)[-1])
    return lebesgue_profile(Product(fs), x, q, radii, quad)
