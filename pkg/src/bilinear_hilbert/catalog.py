"""Test-function corpus: analytic closed forms and uniformly sampled signals.

Every entry is described by an immutable :class:`FunctionSpec` and turned into
a vectorised callable with :func:`make_function`.  The callable carries the
metadata the integrators need (tail decay, far-field limits, break points) so
the operator code never has to special-case a kind.

Discontinuous entries use the right-continuous representative, so
``sign_jump(0) == 1``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigurationError, DomainError, LoadError

KINDS = (
    "constant",
    "gaussian",
    "lorentzian",
    "smooth_bump",
    "oscillatory",
    "sign_jump",
    "power_cusp",
    "polynomial",
    "sampled",
)

# "smooth" (C-infinity but not analytic) is used for the compact bump only.
SMOOTHNESS = ("analytic", "smooth", "lipschitz", "holder", "discontinuous")

INF = math.inf

_DEFAULTS = {
    "constant": {"value": 1.0},
    "gaussian": {"center": 0.0, "width": 1.0, "amplitude": 1.0},
    "lorentzian": {"center": 0.0, "width": 1.0, "amplitude": 1.0},
    "smooth_bump": {"center": 0.0, "support": 1.0, "amplitude": 1.0},
    "oscillatory": {"center": 0.0, "width": 1.0, "frequency": 1.0, "phase": 0.0, "amplitude": 1.0},
    "sign_jump": {"center": 0.0, "amplitude": 1.0},
    "power_cusp": {"center": 0.0, "exponent": 0.5, "amplitude": 1.0},
    "polynomial": {},
    "sampled": {},
}


@dataclass(frozen=True)
class Decay:
    """Tail class of a function, consumed by :func:`quadrature.tail_radius`.

    ``kind`` is ``"gaussian"`` (scale = width), ``"rational"`` (|f| <=
    (scale/|t-center|)**power) or ``"compact"`` (scale = support radius).
    """

    kind: str
    scale: float
    center: float = 0.0
    power: float = 0.0


@dataclass(frozen=True)
class GridSignal:
    """Uniformly sampled signal with local cubic interpolation."""

    samples: np.ndarray
    x0: float
    dx: float
    interpolation_order: int = 3

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 4:
            raise ConfigurationError("a GridSignal needs at least 4 samples")
        if not (self.dx > 0 and math.isfinite(self.dx)):
            raise ConfigurationError(f"grid spacing must be positive, got {self.dx}")
        if self.interpolation_order not in (1, 3):
            raise ConfigurationError("interpolation_order must be 1 or 3")

    def __eq__(self, other):
        if not isinstance(other, GridSignal):
            return NotImplemented
        return (
            self.x0 == other.x0
            and self.dx == other.dx
            and self.interpolation_order == other.interpolation_order
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x_end(self) -> float:
        return self.x0 + (self.n - 1) * self.dx

    @cached_property
    def slopes(self) -> np.ndarray:
        """Node derivatives from the degree-4 (or degree n-1) local fit."""
        n = self.n
        width = min(5, n)
        slopes = np.empty(n)
        cache = {}
        for i in range(n):
            lo = min(max(i - width // 2, 0), n - width)
            offsets = tuple(range(lo - i, lo - i + width))
            if offsets not in cache:
                cache[offsets] = _derivative_weights(offsets)
            slopes[i] = cache[offsets] @ self.samples[lo:lo + width]
        return slopes / self.dx

    def node_positions(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)


def _derivative_weights(offsets: Sequence[int]) -> np.ndarray:
    off = np.asarray(offsets, dtype=float)
    vander = np.vander(off, increasing=True).T
    rhs = np.zeros(len(off))
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs)


def eval_offgrid(s: GridSignal, x):
    """Interpolate ``s`` at ``x``; exact at nodes, no extrapolation."""
    xa = np.asarray(x, dtype=float)
    span = s.x_end - s.x0
    slack = 1e-12 * max(span, 1.0)
    if np.any(xa < s.x0 - slack) or np.any(xa > s.x_end + slack) or np.any(np.isnan(xa)):
        raise DomainError(f"x outside the sampled window [{s.x0}, {s.x_end}]")
    u = np.clip((xa - s.x0) / s.dx, 0.0, s.n - 1)
    nearest = np.rint(u)
    on_node = np.abs(u - nearest) <= 64 * np.finfo(float).eps * np.maximum(1.0, u)
    i = np.minimum(np.floor(u).astype(int), s.n - 2)
    r = u - i
    y0 = s.samples[i]
    y1 = s.samples[i + 1]
    if s.interpolation_order == 1:
        out = (1.0 - r) * y0 + r * y1
    else:
        m0 = s.slopes[i] * s.dx
        m1 = s.slopes[i + 1] * s.dx
        r2 = r * r
        r3 = r2 * r
        out = (
            (2 * r3 - 3 * r2 + 1) * y0
            + (r3 - 2 * r2 + r) * m0
            + (-2 * r3 + 3 * r2) * y1
            + (r3 - r2) * m1
        )
    out = np.where(on_node, s.samples[nearest.astype(int)], out)
    return float(out) if out.ndim == 0 else out


def load_signal_csv(path, interpolation_order: int = 3) -> GridSignal:
    """Read a two-column ``x,value`` CSV with strictly uniform spacing."""
    rows = []
    with open(Path(path), newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 1 and not rows:
                    continue  # header
                raise LoadError(f"{path}:{lineno}: expected two numeric columns")
    if len(rows) < 4:
        raise LoadError(f"{path}: need at least 4 samples, found {len(rows)}")
    xs = np.array([r[0] for r in rows])
    ys = np.array([r[1] for r in rows])
    steps = np.diff(xs)
    dx = (xs[-1] - xs[0]) / (len(xs) - 1)
    if dx <= 0:
        raise LoadError(f"{path}: x column must be increasing")
    deviation = np.max(np.abs(steps - dx)) / dx
    if deviation >= 1e-9:
        raise LoadError(f"{path}: non-uniform spacing (relative deviation {deviation:.3g})")
    return GridSignal(ys, float(xs[0]), float(dx), interpolation_order)


@dataclass(frozen=True)
class FunctionSpec:
    """Catalog entry: a kind, its parameters and derived metadata."""

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    signal: GridSignal | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown function kind {self.kind!r}")
        params = dict(_DEFAULTS[self.kind])
        unknown = set(self.params) - set(params) - ({"coefficients"} if self.kind == "polynomial" else set())
        if unknown:
            raise ConfigurationError(f"{self.kind}: unknown parameters {sorted(unknown)}")
        for key, val in self.params.items():
            params[key] = tuple(float(c) for c in val) if key == "coefficients" else float(val)
        if self.kind == "polynomial":
            params.setdefault("coefficients", (0.0,))
        object.__setattr__(self, "params", params)
        _validate(self)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items())), self.name))

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == "polynomial":
            return "polynomial(" + ",".join(f"{c:g}" for c in self.params["coefficients"]) + ")"
        if self.kind == "sampled":
            return "sampled"
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({inner})"

    # metadata -----------------------------------------------------------

    @property
    def degree(self) -> int:
        coeffs = self.params.get("coefficients", ())
        nz = [i for i, c in enumerate(coeffs) if c != 0.0]
        return nz[-1] if nz else 0

    @property
    def holder_exponent(self) -> float | None:
        if self.kind == "power_cusp":
            return self.params["exponent"]
        return None

    @property
    def smoothness(self) -> str:
        k = self.kind
        if k in ("constant", "gaussian", "lorentzian", "oscillatory", "polynomial"):
            return "analytic"
        if k == "smooth_bump":
            return "smooth"
        if k == "sign_jump":
            return "discontinuous"
        if k == "power_cusp":
            return "lipschitz" if self.params["exponent"] == 1.0 else "holder"
        s = self.signal
        return "lipschitz" if s.samples[0] == 0.0 and s.samples[-1] == 0.0 else "discontinuous"

    @property
    def lipschitz_constant(self) -> float | None:
        """A valid global Lipschitz constant, or None when there is none."""
        k, p = self.kind, self.params
        a = abs(p.get("amplitude", 1.0))
        if k == "constant":
            return 0.0
        if k == "gaussian":
            return a * math.sqrt(2.0) * math.exp(-0.5) / p["width"]
        if k == "lorentzian":
            return a * 3.0 * math.sqrt(3.0) / 8.0 / p["width"]
        if k == "oscillatory":
            return a * (2 * math.pi * abs(p["frequency"]) + math.sqrt(2.0) * math.exp(-0.5) / p["width"])
        if k == "smooth_bump":
            return a * _bump_slope_max() / p["support"]
        if k == "polynomial":
            return abs(p["coefficients"][1]) if self.degree == 1 else (0.0 if self.degree == 0 else None)
        if k == "power_cusp":
            return a if p["exponent"] == 1.0 else None
        if k == "sampled" and self.smoothness == "lipschitz":
            return _hermite_slope_bound(self.signal)
        return None

    @property
    def membership(self) -> tuple[tuple[float, bool], ...]:
        k = self.kind
        if k in ("gaussian", "lorentzian", "smooth_bump", "oscillatory", "sampled"):
            flags = (True, True, True)
        elif k == "constant" or (k == "polynomial" and self.degree == 0):
            zero = self.params.get("value", self.params.get("coefficients", (0.0,))[0]) == 0.0
            flags = (zero, zero, True)
        elif k == "sign_jump":
            flags = (False, False, True)
        else:
            flags = (False, False, False)
        return tuple(zip((1.0, 2.0, INF), flags))

    def in_lp(self, p: float) -> bool:
        """Global L^p membership for p in {1, 2, inf} or between them."""
        table = dict(self.membership)
        if p in table:
            return table[p]
        return table[1.0] and table[INF]

    @property
    def known_bad_points(self) -> tuple[float, ...]:
        if self.kind == "sign_jump":
            return (self.params["center"],)
        if self.kind == "sampled":
            s = self.signal
            return tuple(x for x, y in ((s.x0, s.samples[0]), (s.x_end, s.samples[-1])) if y != 0.0)
        return ()

    @property
    def breaks(self) -> tuple[float, ...]:
        """Points where the function is not smooth; quadrature splits there."""
        k, p = self.kind, self.params
        if k in ("sign_jump", "power_cusp"):
            return (p["center"],)
        if k == "smooth_bump":
            return (p["center"] - p["support"], p["center"] + p["support"])
        if k == "sampled":
            return (self.signal.x0, self.signal.x_end)
        return ()

    @property
    def decay(self) -> Decay | None:
        k, p = self.kind, self.params
        if k in ("gaussian", "oscillatory"):
            return Decay("gaussian", p["width"], p["center"])
        if k == "lorentzian":
            return Decay("rational", p["width"], p["center"], power=2.0)
        if k == "smooth_bump":
            return Decay("compact", p["support"], p["center"])
        if k == "sampled":
            s = self.signal
            return Decay("compact", 0.5 * (s.x_end - s.x0), 0.5 * (s.x_end + s.x0))
        if (k == "constant" and p["value"] == 0.0) or (k == "polynomial" and self.degree == 0 and p["coefficients"][0] == 0.0):
            return Decay("compact", 0.0)
        return None

    @property
    def far_limits(self) -> tuple[float, float] | None:
        """Limits at -inf and +inf, or None if they do not both exist."""
        k, p = self.kind, self.params
        if k == "constant":
            return (p["value"], p["value"])
        if k == "sign_jump":
            return (-p["amplitude"], p["amplitude"])
        if k == "polynomial":
            return (p["coefficients"][0],) * 2 if self.degree == 0 else None
        if k == "power_cusp":
            return None
        return (0.0, 0.0)

    @property
    def is_bounded(self) -> bool:
        return self.kind not in ("power_cusp",) and not (self.kind == "polynomial" and self.degree > 0)


def _validate(spec: FunctionSpec) -> None:
    k, p = spec.kind, spec.params
    for key, val in p.items():
        vals = val if isinstance(val, tuple) else (val,)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigurationError(f"{k}: parameter {key} must be finite")
    for key in ("width", "support"):
        if key in p and p[key] <= 0:
            raise ConfigurationError(f"{k}: {key} must be > 0, got {p[key]}")
    if k == "power_cusp" and not 0.0 < p["exponent"] <= 1.0:
        raise ConfigurationError(f"power_cusp exponent must lie in (0, 1], got {p['exponent']}")
    if k == "polynomial" and len(p["coefficients"]) == 0:
        raise ConfigurationError("polynomial needs at least one coefficient")
    if k == "sampled" and spec.signal is None:
        raise ConfigurationError("sampled spec requires a GridSignal")


# convenience constructors ----------------------------------------------------

def constant(value=1.0, name=None):
    return FunctionSpec("constant", {"value": value}, name=name)


def gaussian(center=0.0, width=1.0, amplitude=1.0, name=None):
    return FunctionSpec("gaussian", {"center": center, "width": width, "amplitude": amplitude}, name=name)


def lorentzian(center=0.0, width=1.0, amplitude=1.0, name=None):
    return FunctionSpec("lorentzian", {"center": center, "width": width, "amplitude": amplitude}, name=name)


def smooth_bump(center=0.0, support=1.0, amplitude=1.0, name=None):
    return FunctionSpec("smooth_bump", {"center": center, "support": support, "amplitude": amplitude}, name=name)


def oscillatory(frequency=1.0, center=0.0, width=1.0, phase=0.0, amplitude=1.0, name=None):
    params = {"frequency": frequency, "center": center, "width": width, "phase": phase, "amplitude": amplitude}
    return FunctionSpec("oscillatory", params, name=name)


def sign_jump(center=0.0, amplitude=1.0, name=None):
    return FunctionSpec("sign_jump", {"center": center, "amplitude": amplitude}, name=name)


def power_cusp(exponent=0.5, center=0.0, amplitude=1.0, name=None):
    return FunctionSpec("power_cusp", {"exponent": exponent, "center": center, "amplitude": amplitude}, name=name)


def polynomial(coefficients, name=None):
    """Polynomial with coefficients in increasing degree order."""
    return FunctionSpec("polynomial", {"coefficients": tuple(coefficients)}, name=name)


def sampled(signal: GridSignal, name=None):
    return FunctionSpec("sampled", {}, signal=signal, name=name)


# evaluation ------------------------------------------------------------------

class CatalogFunction:
    """Vectorised evaluator of ``spec`` (or of its ``order``-th derivative)."""

    def __init__(self, spec: FunctionSpec, order: int = 0):
        self.spec = spec
        self.order = order

    def __repr__(self):
        suffix = "'" * self.order
        return f"CatalogFunction({self.spec.label}{suffix})"

    def __eq__(self, other):
        return isinstance(other, CatalogFunction) and (self.spec, self.order) == (other.spec, other.order)

    def __hash__(self):
        return hash((self.spec, self.order))

    @property
    def label(self) -> str:
        return self.spec.label + "'" * self.order

    @property
    def decay(self):
        return self.spec.decay

    @property
    def breaks(self):
        return self.spec.breaks

    @property
    def far_limits(self):
        if self.order == 0:
            return self.spec.far_limits
        return (0.0, 0.0) if self.spec.far_limits is not None else None

    @property
    def is_bounded(self):
        return self.spec.is_bounded

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = _evaluate(self.spec, self.order, xa)
        if out.ndim == 0:
            return float(out)
        return out


def make_function(spec: FunctionSpec) -> CatalogFunction:
    """Return a total, deterministic, vectorised evaluator for ``spec``."""
    if not isinstance(spec, FunctionSpec):
        raise ConfigurationError(f"expected a FunctionSpec, got {type(spec).__name__}")
    _validate(spec)
    return CatalogFunction(spec)


def derivative(spec: FunctionSpec, order: int) -> CatalogFunction:
    """Closed-form derivative of a smooth catalog entry (order <= 2)."""
    if order < 0:
        raise ConfigurationError("derivative order must be >= 0")
    if order == 0:
        return make_function(spec)
    if spec.kind in ("sign_jump", "power_cusp", "sampled"):
        raise ConfigurationError(f"no closed-form derivative for {spec.kind}")
    if order > 2 and spec.kind not in ("polynomial", "constant"):
        raise ConfigurationError("closed-form derivatives are provided up to order 2")
    return CatalogFunction(spec, order)


def _evaluate(spec: FunctionSpec, order: int, x: np.ndarray) -> np.ndarray:
    k, p = spec.kind, spec.params
    a = p.get("amplitude", 1.0)
    if k == "constant":
        return np.full_like(x, p["value"] if order == 0 else 0.0)
    if k == "polynomial":
        coeffs = np.polynomial.polynomial.polyder(np.array(p["coefficients"]), order) if order else np.array(p["coefficients"])
        return np.polynomial.polynomial.polyval(x, coeffs) + 0.0 * x
    if k == "gaussian":
        w = p["width"]
        u = (x - p["center"]) / w
        return a * _gauss_derivs(u, order) / w**order
    if k == "lorentzian":
        w = p["width"]
        u = (x - p["center"]) / w
        q = 1.0 + u * u
        if order == 0:
            return a / q
        if order == 1:
            return a * (-2.0 * u / q**2) / w
        return a * ((6.0 * u * u - 2.0) / q**3) / w**2
    if k == "oscillatory":
        w = p["width"]
        omega = 2 * math.pi * p["frequency"]
        u = (x - p["center"]) / w
        arg = omega * x + p["phase"]
        c = (np.cos(arg), -omega * np.sin(arg), -omega**2 * np.cos(arg))
        e = [_gauss_derivs(u, j) / w**j for j in range(order + 1)]
        binom = (1, 1, 1) if order < 2 else (1, 2, 1)
        return a * sum(binom[j] * e[j] * c[order - j] for j in range(order + 1))
    if k == "smooth_bump":
        s = p["support"]
        u = (x - p["center"]) / s
        return a * _bump_derivs(u, order) / s**order
    if k == "sign_jump":
        return a * np.where(x >= p["center"], 1.0, -1.0)
    if k == "power_cusp":
        return a * np.abs(x - p["center"]) ** p["exponent"]
    if k == "sampled":
        s = spec.signal
        flat = np.atleast_1d(x)
        inside = (flat >= s.x0) & (flat <= s.x_end)
        out = np.zeros_like(flat)
        if np.any(inside):
            out[inside] = eval_offgrid(s, flat[inside])
        return a * out.reshape(x.shape)
    raise ConfigurationError(f"unknown kind {k!r}")


def _gauss_derivs(u, order):
    g = np.exp(-u * u)
    if order == 0:
        return g
    if order == 1:
        return -2.0 * u * g
    return (4.0 * u * u - 2.0) * g


def _bump_derivs(u, order):
    inside = np.abs(u) < 1.0
    q = np.where(inside, 1.0 - u * u, 1.0)
    b = np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)
    if order == 0:
        return b
    if order == 1:
        return b * (-2.0 * u / q**2)
    return b * (4.0 * u * u / q**4 - 2.0 / q**2 - 8.0 * u * u / q**3)


def _bump_slope_max() -> float:
    res = minimize_scalar(lambda u: -abs(float(_bump_derivs(np.asarray(u), 1))),
                          bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    return -res.fun * (1.0 + 1e-9)


def _hermite_slope_bound(s: GridSignal) -> float:
    y0, y1 = s.samples[:-1], s.samples[1:]
    if s.interpolation_order == 1:
        return float(np.max(np.abs(y1 - y0)) / s.dx)
    m0, m1 = s.slopes[:-1] * s.dx, s.slopes[1:] * s.dx
    # d/dr of the cubic Hermite cell: c2 r^2 + c1 r + c0
    c2 = 6 * y0 + 3 * m0 - 6 * y1 + 3 * m1
    c1 = -6 * y0 - 4 * m0 + 6 * y1 - 2 * m1
    c0 = m0
    best = np.maximum(np.abs(c0), np.abs(c2 + c1 + c0))
    with np.errstate(divide="ignore", invalid="ignore"):
        rv = np.where(c2 != 0, -c1 / (2 * c2), -1.0)
    ok = (rv > 0) & (rv < 1)
    best = np.where(ok, np.maximum(best, np.abs(c2 * rv * rv + c1 * rv + c0)), best)
    return float(np.max(best) / s.dx) * (1.0 + 1e-12)


def make_spec(kind: str, name: str | None = None, **params) -> FunctionSpec:
    """Build a spec from a kind name and keyword parameters (config front end)."""
    if kind == "sampled":
        path = params.pop("path", None)
        if path is None:
            raise ConfigurationError("sampled function needs a 'path' to a CSV file")
        order = int(params.pop("interpolation_order", 3))
        return sampled(load_signal_csv(path, order), name=name)
    return FunctionSpec(kind, params, name=name)
