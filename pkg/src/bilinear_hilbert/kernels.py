"""Approximate-identity kernels and their radial decreasing majorants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .catalog import GridSignal, eval_offgrid
from .errors import ConfigurationError, TailError
from .quadrature import QuadConfig, graded_points, integrate_adaptive


def lemma6_phi(t):
    """Difference kernel between the smoothed and the truncated ``1/t``.

    ``t/(t^2+1) - 1/t`` for ``|t| >= 1`` and ``t/(t^2+1)`` inside, with
    ``phi(0) = 0``.  Odd, with zero integral.
    """
    ta = np.asarray(t, dtype=float)
    outer = np.abs(ta) >= 1.0
    inv = np.divide(1.0, ta, out=np.zeros_like(ta), where=outer)
    out = ta / (ta * ta + 1.0) - inv
    return float(out) if out.ndim == 0 else out


def poisson_phi(t):
    ta = np.asarray(t, dtype=float)
    out = 1.0 / (math.pi * (1.0 + ta * ta))
    return float(out) if out.ndim == 0 else out


def _lemma6_psi(x):
    ax = np.abs(np.asarray(x, dtype=float))
    big = ax > 1.0
    safe = np.where(big, ax, 2.0)
    return np.where(big, 1.0 / (safe * (safe * safe + 1.0)), 0.5)


@dataclass(frozen=True)
class KernelSpec:
    """A mollifier ``phi`` with its stored integral and cached majorant.

    ``breaks`` lists points (in the unscaled variable) where ``phi`` is not
    smooth; ``parity`` is ``"odd"``, ``"even"`` or ``None``.
    """

    kind: str
    phi: Callable
    integral: float
    parity: str | None
    breaks: tuple[float, ...] = ()
    psi_cached: Callable | None = field(default=None, compare=False)

    def phi_eps(self, t, eps):
        return self.phi(np.asarray(t) / eps) / eps

    def psi(self, x):
        return majorant_psi(self, x)


def lemma6_kernel() -> KernelSpec:
    return KernelSpec("lemma6", lemma6_phi, 0.0, "odd", breaks=(1.0,), psi_cached=_lemma6_psi)


def poisson_kernel() -> KernelSpec:
    return KernelSpec("poisson", poisson_phi, 1.0, "even", psi_cached=poisson_phi)


def table_kernel(signal: GridSignal, quad: QuadConfig | None = None) -> KernelSpec:
    """Kernel tabulated on a grid, zero outside it; integral by quadrature."""
    quad = quad or QuadConfig(rel_tol=1e-11, abs_tol=1e-14)

    def phi(t):
        ta = np.asarray(t, dtype=float)
        flat = np.atleast_1d(ta)
        inside = (flat >= signal.x0) & (flat <= signal.x_end)
        out = np.zeros_like(flat)
        if np.any(inside):
            out[inside] = eval_offgrid(signal, flat[inside])
        out = out.reshape(ta.shape)
        return float(out) if out.ndim == 0 else out

    nodes = signal.node_positions()
    integral = integrate_adaptive(phi, signal.x0, signal.x_end, quad, nodes).value
    grid = np.linspace(0.0, max(abs(signal.x0), abs(signal.x_end)), 257)
    if np.allclose(phi(grid), phi(-grid), rtol=0, atol=1e-14):
        parity = "even"
    elif np.allclose(phi(grid), -phi(-grid), rtol=0, atol=1e-14):
        parity = "odd"
    else:
        parity = None
    return KernelSpec("custom_table", phi, integral, parity, breaks=(abs(signal.x0), abs(signal.x_end)))


def _numeric_psi(k: KernelSpec, x: float, t_max: float = 1e6) -> float:
    ax = abs(float(x))
    lo = max(ax, 1e-9)
    ts = np.unique(np.concatenate([
        [ax],
        np.geomspace(lo, t_max, 4000),
        np.linspace(ax, ax + 4.0, 2001),
        [abs(b) for b in k.breaks if abs(b) >= ax],
    ]))
    mags = np.maximum(np.abs(k.phi(ts)), np.abs(k.phi(-ts)))
    i = int(np.argmax(mags))
    best = float(mags[i])
    a = ts[max(i - 1, 0)]
    b = ts[min(i + 1, ts.size - 1)]
    if b > a:
        res = minimize_scalar(lambda s: -max(abs(k.phi(s)), abs(k.phi(-s))), bounds=(a, b),
                              method="bounded", options={"xatol": 1e-13 * max(1.0, b)})
        best = max(best, -float(res.fun))
    return best


_DECAY_CHECKED: dict[int, bool] = {}


def _check_decay(k: KernelSpec) -> None:
    key = id(k.phi)
    if key not in _DECAY_CHECKED:
        far = 1e6
        _DECAY_CHECKED[key] = far * _numeric_psi(k, far, t_max=1e8) <= 1e-2
    if not _DECAY_CHECKED[key]:
        raise TailError(f"{k.kind} kernel does not decay fast enough for an integrable majorant")


def majorant_psi(k: KernelSpec, x):
    """``sup_{|t| >= |x|} |phi(t)|``; closed form for the built-in kernels."""
    if k.psi_cached is not None:
        out = k.psi_cached(x)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out
    _check_decay(k)
    xa = np.asarray(x, dtype=float)
    if xa.ndim == 0:
        return _numeric_psi(k, float(xa))
    return np.array([_numeric_psi(k, float(v)) for v in xa.ravel()]).reshape(xa.shape)


def majorant_integral(k: KernelSpec, quad: QuadConfig | None = None) -> float:
    """``int psi`` over the real line (psi is even)."""
    quad = quad or QuadConfig(rel_tol=1e-12, abs_tol=1e-15)
    top = 1e8
    pts = graded_points(1.0, top, ratio=4.0) + [abs(b) for b in k.breaks]
    half = integrate_adaptive(lambda s: majorant_psi(k, s), 0.0, top, quad, pts).value
    # power-law tail beyond `top`, exponent read off the last octave
    p_top, p_half = float(majorant_psi(k, top)), float(majorant_psi(k, top / 2))
    if p_top > 0:
        power = math.log2(p_half / p_top)
        if power <= 1:
            raise TailError(f"{k.kind} majorant is not integrable")
        half += p_top * top / (power - 1)
    return 2.0 * half


def check_majorant(k: KernelSpec, xs) -> bool:
    """Verify ``psi(x) >= |phi(t)|`` for every ``|t| >= |x|`` on a sample grid."""
    xs = np.abs(np.asarray(xs, dtype=float))
    ts = np.unique(np.concatenate([np.geomspace(1e-6, 1e4, 3000), xs]))
    phis = np.maximum(np.abs(k.phi(ts)), np.abs(k.phi(-ts)))
    # running sup from the right: sup over t >= ts[i]
    tail_sup = np.maximum.accumulate(phis[::-1])[::-1]
    idx = np.searchsorted(ts, xs)
    psi = np.asarray(majorant_psi(k, xs), dtype=float)
    return bool(np.all(psi + 1e-15 >= tail_sup[idx]))
