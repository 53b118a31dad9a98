"""Batch driver: config parsing, experiment grids, CSV/JSON reports.

A run config is an INI file::

    [run]
    experiment = invert
    alpha = 2.0, 0.7
    x = 0.25, 0.5
    eps_ladder = geometric(0.1, 0.5, 10)

    [function.gauss]
    kind = gaussian
    width = 1

    [pairs]
    gg = gauss, gauss

Every grid cell is an independent task; results are gathered back into
config order before anything is written, so the worker count never changes
the output.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog, dual, kernels, lebesgue, operators
from .errors import AccuracyError, BhtError, ConfigurationError
from .fitting import ZERO_FLOOR, fit_rate
from .quadrature import QuadConfig

log = logging.getLogger(__name__)

EXPERIMENTS = ("invert", "sweep_gap", "sweep_poisson", "mollifier", "lebesgue", "product_lemmas", "dual", "norm_probe")

CSV_COLUMNS = ("experiment", "function_f", "function_g", "alpha", "x", "eps_or_r", "value_re", "value_im", "err_est", "status")
PROFILE_COLUMNS = ("function_id", "x", "p", "r", "theta", "slope", "class")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "invert_rel": 1e-5,
    "imag_residue": 1e-6,
    "slope_min": 0.9,
    "r2_min": 0.98,
    "persist_min": 0.1,
    "persist_eps_max": 0.01,
    "mollifier_abs": 1e-5,
    "theta_final": 1e-3,
    "margin_min": -1e-9,
    "leibniz_m1": 1e-4,
    "leibniz_m2": 1e-3,
    "zero_abs": 1e-9,
    "probe_rel_change": 0.01,
}


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    functions: dict
    groups: list
    alpha_list: tuple = (1.0,)
    x_grid: tuple = (0.0,)
    eps_ladder: tuple = tuple(operators.default_ladder())
    radius_ladder: tuple = tuple(0.2 * 0.5 ** np.arange(10))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    quad: QuadConfig = QuadConfig(rel_tol=1e-11, abs_tol=1e-14, max_subdivisions=4000)
    output_path: str = "out"
    seed: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {self.experiment!r}")
        for a in self.alpha_list:
            operators.check_alpha(a)
        for name, ladder in (("eps_ladder", self.eps_ladder), ("radius_ladder", self.radius_ladder)):
            arr = np.asarray(ladder, dtype=float)
            if arr.size and (np.any(arr <= 0) or np.any(np.diff(arr) >= 0)):
                raise ConfigurationError(f"{name} must be positive and strictly decreasing")
        for grp in self.groups:
            for name in grp:
                if name not in self.functions:
                    raise ConfigurationError(f"group refers to undefined function {name!r}")

    def resolved(self) -> dict:
        """Every setting, defaults included, in a JSON-ready form."""
        return {
            "experiment": self.experiment,
            "functions": {k: _spec_record(v) for k, v in self.functions.items()},
            "groups": [list(g) for g in self.groups],
            "alpha_list": list(self.alpha_list),
            "x_grid": list(self.x_grid),
            "eps_ladder": list(self.eps_ladder),
            "radius_ladder": list(self.radius_ladder),
            "tolerances": dict(sorted(self.tolerances.items())),
            "quad": {
                "rel_tol": self.quad.rel_tol,
                "abs_tol": self.quad.abs_tol,
                "max_subdivisions": self.quad.max_subdivisions,
                "tail_radius": self.quad.tail_radius,
            },
            "seed": self.seed,
            "options": dict(sorted(self.options.items())),
        }


def _spec_record(spec: catalog.FunctionSpec) -> dict:
    rec = {"kind": spec.kind}
    for k, v in sorted(spec.params.items()):
        rec[k] = list(v) if isinstance(v, tuple) else v
    if spec.signal is not None:
        rec.update(x0=spec.signal.x0, dx=spec.signal.dx, n=spec.signal.n)
    return rec


# -- config parsing --------------------------------------------------------------

_GEOM = re.compile(r"geometric\(\s*([^,]+),\s*([^,]+),\s*([^)]+)\)")

_OPTION_DEFAULTS = {
    "invert": {"fit_points": 6},
    "sweep_gap": {},
    "sweep_poisson": {"expect": "decay"},
    "mollifier": {"kernel": "poisson", "fit_points": 6},
    "lebesgue": {"p": 2.0},
    "product_lemmas": {"p1": 2.0, "p2": 2.0, "nesting_samples": 20},
    "dual": {"psi_support": 2.0, "leibniz_eps": 0.05},
    "norm_probe": {"p1": 2.0, "p2": 2.0, "grid_ladder": [201, 401]},
}


def _floats(text: str) -> tuple:
    text = text.strip()
    m = _GEOM.fullmatch(text)
    if m:
        start, ratio, count = float(m.group(1)), float(m.group(2)), int(m.group(3))
        return tuple(float(v) for v in start * ratio ** np.arange(count))
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _parse_value(text: str):
    text = text.strip()
    if "," in text or text.startswith("geometric("):
        return list(_floats(text))
    try:
        num = float(text)
    except ValueError:
        return text
    return int(num) if re.fullmatch(r"[+-]?\d+", text) else num


def parse_config(text: str, base_dir: Path | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from INI text."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from exc
    if "run" not in cp:
        raise ConfigurationError("config needs a [run] section")
    run = dict(cp["run"])
    experiment = run.pop("experiment", None)
    if experiment is None:
        raise ConfigurationError("[run] must name an experiment")

    functions = {}
    for section in cp.sections():
        if not section.startswith("function."):
            continue
        name = section.split(".", 1)[1]
        params = dict(cp[section])
        kind = params.pop("kind", None)
        if kind is None:
            raise ConfigurationError(f"[{section}] needs a kind")
        values = {}
        for k, v in params.items():
            if k == "coefficients":
                values[k] = _floats(v)
            elif k == "path":
                p = Path(v)
                values[k] = str(p if p.is_absolute() or base_dir is None else base_dir / p)
            else:
                values[k] = float(v)
        try:
            functions[name] = catalog.make_spec(kind, name=name, **values)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"[{section}]: {exc}") from exc

    groups = []
    if "pairs" in cp:
        for _, v in cp["pairs"].items():
            groups.append(tuple(s.strip() for s in v.split(",") if s.strip()))
    elif "functions" in run:
        groups = [(s.strip(),) for s in run.pop("functions").split(",") if s.strip()]
    run.pop("functions", None)

    kwargs = {}
    if "alpha" in run:
        kwargs["alpha_list"] = _floats(run.pop("alpha"))
    if "x" in run:
        kwargs["x_grid"] = _floats(run.pop("x"))
    if "eps_ladder" in run:
        kwargs["eps_ladder"] = _floats(run.pop("eps_ladder"))
    if "radius_ladder" in run:
        kwargs["radius_ladder"] = _floats(run.pop("radius_ladder"))
    if "seed" in run:
        kwargs["seed"] = int(run.pop("seed"))
    if "output_path" in run:
        kwargs["output_path"] = run.pop("output_path")
    quad_kw = {}
    for key, cast in (("rel_tol", float), ("abs_tol", float), ("max_subdivisions", int), ("tail_radius", float)):
        if key in run:
            quad_kw[key] = cast(run.pop(key))
    default_quad = RunConfig.__dataclass_fields__["quad"].default
    quad = QuadConfig(**{**{"rel_tol": default_quad.rel_tol, "abs_tol": default_quad.abs_tol,
                            "max_subdivisions": default_quad.max_subdivisions}, **quad_kw})
    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in cp:
        for k, v in cp["tolerances"].items():
            if k not in DEFAULT_TOLERANCES:
                raise ConfigurationError(f"unknown tolerance {k!r}")
            tolerances[k] = float(v)
    options = dict(_OPTION_DEFAULTS.get(experiment, {}))
    for k, v in run.items():
        options[k] = _parse_value(v)
    return RunConfig(experiment, functions, groups, tolerances=tolerances, quad=quad, options=options, **kwargs)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base_dir=path.parent)


# -- cells -----------------------------------------------------------------------------

@dataclass
class CellResult:
    rows: list
    summary: dict
    passed: bool
    numeric_failure: bool = False
    profile_rows: list = field(default_factory=list)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return repr(float(v))


def _row(exp, f, g, alpha, x, e, re_, im_, err, status="ok"):
    return [exp, f, g, _fmt(alpha), _fmt(x), _fmt(e), _fmt(re_), _fmt(im_), _fmt(err), status]


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating,)):
        return _clean(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _rate_summary(eps, values, tol) -> tuple[dict, bool]:
    mags = np.abs(np.asarray(values))
    if np.all(mags < tol["zero_abs"]):
        return {"slope": None, "r_squared": None, "all_zero": True}, True
    fit = fit_rate(eps, mags)
    ok = fit.slope >= tol["slope_min"] and fit.r_squared >= tol["r2_min"]
    return {"slope": fit.slope, "r_squared": fit.r_squared, "all_zero": False}, bool(ok)


def _cell_invert(cfg: RunConfig, fs, gs, alpha, x):
    f, g = catalog.make_function(fs), catalog.make_function(gs)
    eps = np.asarray(cfg.eps_ladder)
    recovered, rep = operators.invert_product(f, g, x, alpha, eps, quad=cfg.quad,
                                              fit_points=int(cfg.options["fit_points"]),
                                              imag_tol=cfg.tolerances["imag_residue"])
    target = f(x) * g(x)
    rel = abs(recovered - target) / max(abs(target), 1e-300)
    rows = [_row("invert", fs.label, gs.label, alpha, x, e, v.real, v.imag, None)
            for e, v in zip(eps, rep.values)]
    ok = rel <= cfg.tolerances["invert_rel"] and abs(rep.imag_residue) <= cfg.tolerances["imag_residue"]
    summary = {"limit": recovered, "target": target, "rel_error": rel, "imag_residue": rep.imag_residue,
               "slope": rep.fitted_rate, "flags": list(rep.flags)}
    return CellResult(rows, summary, bool(ok))


def _cell_sweep(cfg: RunConfig, fs, gs, alpha, x):
    f, g = catalog.make_function(fs), catalog.make_function(gs)
    eps = np.asarray(cfg.eps_ladder)
    exp = cfg.experiment
    values, errs = [], []
    for e in eps:
        if exp == "sweep_gap":
            values.append(operators.lemma6_gap(f, g, x, alpha, e, quad=cfg.quad))
            errs.append(None)
        else:
            r = operators.poisson_residual_err(f, g, x, alpha, e, quad=cfg.quad)
            values.append(r.value)
            errs.append(r.err_est)
    rows = [_row(exp, fs.label, gs.label, alpha, x, e, v, 0.0, er) for e, v, er in zip(eps, values, errs)]
    values = np.array(values)
    if exp == "sweep_poisson" and cfg.options.get("expect") == "persist":
        small = np.abs(values[eps <= cfg.tolerances["persist_eps_max"]])
        ok = small.size > 0 and bool(np.all(small > cfg.tolerances["persist_min"]))
        summary = {"min_abs_small_eps": float(small.min()) if small.size else None, "expect": "persist"}
        return CellResult(rows, summary, ok)
    summary, ok = _rate_summary(eps, values, cfg.tolerances)
    return CellResult(rows, summary, ok)


def _kernel(name: str) -> kernels.KernelSpec:
    if name == "poisson":
        return kernels.poisson_kernel()
    if name == "lemma6":
        return kernels.lemma6_kernel()
    raise ConfigurationError(f"unknown kernel {name!r}")


def _cell_mollifier(cfg: RunConfig, fs, gs, alpha, x):
    f, g = catalog.make_function(fs), catalog.make_function(gs)
    k = _kernel(cfg.options["kernel"])
    eps = np.asarray(cfg.eps_ladder)
    rep = operators.mollifier_sweep(f, g, x, alpha, k, eps, quad=cfg.quad, fit_points=int(cfg.options["fit_points"]))
    rows = [_row("mollifier", fs.label, gs.label, alpha, x, e, v, 0.0, None) for e, v in zip(eps, rep.values)]
    target = f(x) * g(x) * k.integral
    limit = rep.extrapolated
    ok = limit is not None and abs(limit - target) <= cfg.tolerances["mollifier_abs"]
    summary = {"limit": limit, "target": target, "kernel": k.kind, "slope": rep.fitted_rate, "flags": list(rep.flags)}
    return CellResult(rows, summary, bool(ok))


def _cell_lebesgue(cfg: RunConfig, fs, x):
    f = catalog.make_function(fs)
    p = float(cfg.options["p"])
    prof = lebesgue.lebesgue_profile(f, x, p, cfg.radius_ladder, cfg.quad)
    expected = cfg.options.get("expect")
    if expected is None:
        expected = "not_lebesgue" if any(abs(x - b) < 1e-12 for b in fs.known_bad_points) else "lebesgue_point"
    rows = [_row("lebesgue", fs.label, "", None, x, r, th, 0.0, None) for r, th in zip(prof.radii, prof.theta)]
    prows = [[fs.label, _fmt(x), _fmt(p), _fmt(r), _fmt(th), _fmt(prof.fitted_slope), prof.classification]
             for r, th in zip(prof.radii, prof.theta)]
    summary = {"classification": prof.classification, "expected": expected, "slope": prof.fitted_slope,
               "r_squared": prof.r_squared, "theta_final": float(prof.theta[-1])}
    return CellResult(rows, summary, prof.classification == expected, profile_rows=prows)


def _cell_lemmas(cfg: RunConfig, names, x):
    fns = [catalog.make_function(cfg.functions[n]) for n in names]
    labels = [cfg.functions[n].label for n in names]
    ps = cfg.options.get("ps")
    if ps is None:
        ps = [cfg.options["p1"], cfg.options["p2"]]
    if not isinstance(ps, list):
        ps = [ps]
    if len(ps) != len(fns):
        raise ConfigurationError(f"{len(fns)} factors but {len(ps)} exponents")
    rows, thetas, margins = [], [], []
    for r in cfg.radius_ladder:
        res = lebesgue.check_multi_product(fns, ps, x, r, cfg.quad)
        thetas.append(res.theta_final)
        margins.append(res.min_margin)
        rows.append(_row("product_lemmas", labels[0], "*".join(labels[1:]), None, x, r, res.theta_final,
                         res.min_margin, None))
    chain = lebesgue.exponent_chain(ps)
    exact = chain[-1] == 1 / sum(1 / lebesgue.as_fraction(p) for p in ps)
    ok = thetas[-1] < cfg.tolerances["theta_final"] and min(margins) >= cfg.tolerances["margin_min"] and exact
    summary = {"exponents": [str(q) for q in chain], "theta_final": thetas[-1], "min_margin": min(margins),
               "chain_exact": exact}
    return CellResult(rows, summary, bool(ok))


def _nesting_samples(cfg: RunConfig) -> tuple[dict, bool]:
    n = int(cfg.options.get("nesting_samples", 0))
    if n <= 0:
        return {}, True
    rng = np.random.default_rng(cfg.seed)
    out, ok = {}, True
    for name in sorted({n_ for grp in cfg.groups for n_ in grp}):
        f = catalog.make_function(cfg.functions[name])
        worst = math.inf
        for _ in range(n):
            x = float(rng.uniform(-1.0, 1.0))
            r = float(10 ** rng.uniform(-3, -0.5))
            p1 = float(rng.uniform(1.0, 6.0))
            p2 = float(rng.uniform(1.0, p1))
            worst = min(worst, lebesgue.check_nesting(f, x, r, p1, p2, cfg.quad))
        out[name] = worst
        ok = ok and worst >= cfg.tolerances["margin_min"]
    return {"nesting_min_margin": out}, ok


def _cell_dual(cfg: RunConfig, fs, gs, alpha, center):
    f, g = catalog.make_function(fs), catalog.make_function(gs)
    pair = dual.pairing(float(cfg.options["psi_support"]), center)
    eps = np.asarray(cfg.eps_ladder)
    vals = [dual.weak_limit_residual(f, g, pair, alpha, e, quad=cfg.quad) for e in eps]
    rows = [_row("dual", fs.label, gs.label, alpha, center, e, v.re, v.im, v.err_re + v.err_im)
            for e, v in zip(eps, vals)]
    summary, ok = _rate_summary(eps, [abs(v) for v in vals], cfg.tolerances)
    le = float(cfg.options["leibniz_eps"])
    leib = {}
    for m in (1, 2):
        try:
            res = dual.leibniz_residual(fs, gs, center, alpha, le, m)
        except ConfigurationError as exc:
            leib[f"m{m}"] = {"skipped": str(exc)}
            continue
        tol = cfg.tolerances[f"leibniz_m{m}"]
        leib[f"m{m}"] = {"residual": res.residual, "inconclusive": res.inconclusive}
        ok = ok and res.residual < tol and not res.inconclusive
    summary["leibniz"] = leib
    return CellResult(rows, summary, bool(ok))


def _cell_probe(cfg: RunConfig, fs, gs, alpha):
    f, g = catalog.make_function(fs), catalog.make_function(gs)
    grids = cfg.options["grid_ladder"]
    grids = grids if isinstance(grids, list) else [grids]
    p1, p2 = float(cfg.options["p1"]), float(cfg.options["p2"])
    ratios, rows = [], []
    for n in grids:
        res = dual.norm_probe(f, g, alpha, p1, p2, n_grid=int(n), quad=cfg.quad)
        ratios.append(res.ratio)
        rows.append(_row("norm_probe", fs.label, gs.label, alpha, None, int(n), res.ratio, 0.0, None))
    change = abs(ratios[-1] - ratios[0]) / max(abs(ratios[-1]), 1e-300) if ratios[-1] else 0.0
    ok = change <= cfg.tolerances["probe_rel_change"]
    return CellResult(rows, {"ratios": ratios, "rel_change": change}, bool(ok))


def _cells(cfg: RunConfig) -> list:
    exp = cfg.experiment
    out = []
    if exp == "lebesgue":
        for grp in cfg.groups:
            for x in cfg.x_grid:
                out.append((grp, (cfg.functions[grp[0]], x)))
        return out
    if exp == "product_lemmas":
        for grp in cfg.groups:
            for x in cfg.x_grid:
                out.append((grp, (grp, x)))
        return out
    for grp in cfg.groups:
        if len(grp) != 2:
            raise ConfigurationError(f"{exp} needs function pairs, got {grp}")
        fs, gs = cfg.functions[grp[0]], cfg.functions[grp[1]]
        for a in cfg.alpha_list:
            if exp == "norm_probe":
                out.append((grp, (fs, gs, a)))
                continue
            for x in cfg.x_grid:
                out.append((grp, (fs, gs, a, x)))
    return out


_DISPATCH = {
    "invert": _cell_invert,
    "sweep_gap": _cell_sweep,
    "sweep_poisson": _cell_sweep,
    "mollifier": _cell_mollifier,
    "lebesgue": _cell_lebesgue,
    "product_lemmas": _cell_lemmas,
    "dual": _cell_dual,
    "norm_probe": _cell_probe,
}


def _execute(task):
    cfg, grp, args = task
    try:
        return _DISPATCH[cfg.experiment](cfg, *args)
    except AccuracyError as exc:
        return CellResult([_row(cfg.experiment, *grp[:1], "", None, None, None, None, None, None, "accuracy_error")],
                          {"error": str(exc)}, False, numeric_failure=True)
    except ConfigurationError:
        raise
    except BhtError as exc:
        return CellResult([_row(cfg.experiment, *grp[:1], "", None, None, None, None, None, None,
                                type(exc).__name__)], {"error": str(exc)}, False, numeric_failure=True)


@dataclass
class RunResult:
    csv_text: str
    json_text: str
    profile_text: str | None
    exit_code: int


def execute(cfg: RunConfig, jobs: int = 1) -> RunResult:
    """Run every cell of ``cfg`` and render the reports (no file I/O)."""
    cells = _cells(cfg)
    tasks = [(cfg, grp, args) for grp, args in cells]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_execute, tasks))
    else:
        results = [_execute(t) for t in tasks]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    cell_summaries = []
    for (grp, args), res in zip(cells, results):
        writer.writerows(res.rows)
        key = {"group": list(grp)}
        if cfg.experiment in ("lebesgue", "product_lemmas"):
            key["x"] = args[1]
        elif cfg.experiment == "norm_probe":
            key["alpha"] = args[2]
        else:
            key["alpha"], key["x"] = args[2], args[3]
        cell_summaries.append({**key, **res.summary, "pass": res.passed})

    passed = all(r.passed for r in results)
    extra = {}
    if cfg.experiment == "product_lemmas":
        extra, nest_ok = _nesting_samples(cfg)
        passed = passed and nest_ok
    numeric = any(r.numeric_failure for r in results)
    summary = {
        "experiment": cfg.experiment,
        "config": cfg.resolved(),
        "cells": cell_summaries,
        "limits": [c.get("limit") for c in cell_summaries if "limit" in c],
        "slopes": [c.get("slope") for c in cell_summaries if "slope" in c],
        "r_squared": [c.get("r_squared") for c in cell_summaries if "r_squared" in c],
        "tolerances": dict(sorted(cfg.tolerances.items())),
        **extra,
        "pass": passed,
    }
    json_text = json.dumps(_clean(summary), indent=2, sort_keys=True) + "\n"

    profile_text = None
    if cfg.experiment == "lebesgue":
        pbuf = io.StringIO()
        pw = csv.writer(pbuf, lineterminator="\n")
        pw.writerow(PROFILE_COLUMNS)
        for res in results:
            pw.writerows(res.profile_rows)
        profile_text = pbuf.getvalue()

    code = EXIT_NUMERIC if numeric else (EXIT_PASS if passed else EXIT_FAIL)
    return RunResult(buf.getvalue(), json_text, profile_text, code)


def run(cfg: RunConfig, out_dir=None, jobs: int = 1) -> int:
    """Execute ``cfg`` and write ``evaluations.csv`` and ``summary.json``.

    Returns the process exit status: 0 pass, 1 assertion failure,
    3 numerical failure.
    """
    out = Path(out_dir if out_dir is not None else cfg.output_path)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s: %d cells, jobs=%d", cfg.experiment, len(_cells(cfg)), jobs)
    result = execute(cfg, jobs)
    (out / "evaluations.csv").write_text(result.csv_text)
    (out / "summary.json").write_text(result.json_text)
    if result.profile_text is not None:
        (out / "profiles.csv").write_text(result.profile_text)
    log.info("wrote reports to %s (exit %d)", out, result.exit_code)
    return result.exit_code
