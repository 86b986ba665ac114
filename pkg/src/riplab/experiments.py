"""Desk-scale experiments writing CSV data, SVG plots, a JSON summary and a schema.

Every experiment takes an :class:`ExperimentConfig` and writes into
``config.out``.  Repetition ``r`` of a run seeded with ``S`` draws from
``SeedSequence([S, r])``, so results do not depend on execution order.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bounds, svg
from .bases import eval_basis, legendre, sup_norms, trigonometric
from .measure import child_seed, gauss_quadrature, make_uniform, optimal_weight
from .models import bhat_sparse_quotient
from .norms import EmpiricalDesign, point_value, sobolev_stack
from .solve import (best_approximation_oracle, error_ratio_experiment, runge,
                    weighted_l1_interpolate, weighted_least_squares)

EXPERIMENTS = ("rip-dist", "weights", "l1-compare", "sobolev-bound", "sobolev-ls", "regularity")
CURVE_POINTS = 512
L1_VARIANTS = (
    "exact-30",
    "ls-15",
    "l1-uniform-omega",
    "l1-original-omega",
    "reweighted-original-omega",
    "reweighted-minimal-omega",
)

# per-experiment defaults; None in ExperimentConfig means "take it from here"
DEFAULTS = {
    "rip-dist": dict(repetitions=200, n_grid=[5, 10, 12, 15, 20, 30, 50, 100, 200, 500, 1000, 2000], m=10, runge_c=[25.0]),
    "weights": dict(repetitions=1, n_grid=[], m=100, runge_c=[25.0]),
    "l1-compare": dict(repetitions=50, n_grid=[30], m=100, runge_c=[25.0]),
    "sobolev-bound": dict(repetitions=1, n_grid=[], m=10, runge_c=[25.0]),
    "sobolev-ls": dict(repetitions=100, n_grid=[40], m=30, runge_c=[25.0]),
    "regularity": dict(repetitions=20, n_grid=[100], m=30, runge_c=[5.0, 15.0, 25.0]),
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run.

    ``m`` is the number of basis functions (polynomial degree ``m - 1``),
    ``smoothness`` the order ``M`` of the smoothness space in
    ``sobolev-bound``, ``runge_c`` the constants ``c`` of the targets
    ``1 / (1 + c x^2)``.  Fields left as None take per-experiment defaults
    from ``DEFAULTS``.
    """

    experiment: str
    seed: int = 0
    repetitions: Optional[int] = None
    n_grid: Optional[list] = None
    m: Optional[int] = None
    runge_c: Optional[list] = None
    smoothness: int = 40
    sobolev_order: int = 1
    out: Optional[str] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for key, value in DEFAULTS[self.experiment].items():
            if getattr(self, key) is None:
                setattr(self, key, list(value) if isinstance(value, list) else value)
        if self.out is None:
            self.out = os.path.join("results", self.experiment)
        if self.repetitions < 1:
            raise ConfigError("repetitions must be positive")
        if self.m < 1:
            raise ConfigError("m must be positive")
        self.n_grid = [int(n) for n in self.n_grid]
        self.runge_c = [float(c) for c in self.runge_c]

    @classmethod
    def from_dict(cls, data: dict, **overrides) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = dict(data)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**merged)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path, **overrides) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data, **overrides)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_json(path, data) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, ensure_ascii=False, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


# column name -> unit, per output file; pinned by golden tests
SCHEMAS = {
    "rip-dist": {
        "rip_dist.csv": {"n": "samples", "q10": "dimensionless", "q50": "dimensionless", "q90": "dimensionless"},
    },
    "weights": {
        "weights.csv": {"j": "index (1-based)", "sup_norm_uniform": "dimensionless", "sup_norm_adapted": "dimensionless"},
        "density.csv": {"y": "dimensionless", "density": "1/length", "weight": "dimensionless"},
    },
    "l1-compare": {
        "l1_errors.csv": {"variant": "label", "rep": "index", "l2_error": "dimensionless", "residual": "dimensionless"},
        "l1_curves.csv": {"variant": "label", "rep": "index", "x": "dimensionless", "value": "dimensionless"},
    },
    "sobolev-bound": {
        "sobolev_bound.csv": {
            "m": "Sobolev order", "kappa": "dimensionless",
            "lambda_poly": "dimensionless", "bound_poly": "dimensionless", "argmin_poly": "flag",
            "lambda_trig": "dimensionless", "bound_trig": "dimensionless", "argmin_trig": "flag",
        },
    },
    "sobolev-ls": {
        "sobolev_ls_errors.csv": {"rep": "index", "l2_fit_error": "dimensionless", "h1_fit_error": "dimensionless"},
        "sobolev_ls_curves.csv": {"norm": "label", "rep": "index", "x": "dimensionless", "value": "dimensionless"},
    },
    "regularity": {
        "regularity_errors.csv": {"c": "dimensionless", "rep": "index", "l2_error": "dimensionless", "relative_error": "dimensionless", "best_error": "dimensionless"},
        "regularity_curves.csv": {"c": "dimensionless", "rep": "index", "x": "dimensionless", "value": "dimensionless"},
    },
}


def _l2_error(rule, uq, Bq, coef) -> float:
    return float(np.sqrt(rule.weights @ (uq - Bq @ coef) ** 2))


def run_rip_dist(cfg: ExperimentConfig) -> dict:
    basis = legendre(cfg.m)
    u = runge(cfg.runge_c[0])
    measure = make_uniform()
    rows, medians = [], []
    best = None
    for k, n in enumerate(cfg.n_grid):
        res = error_ratio_experiment(u, basis, measure, n, cfg.repetitions, seed=int(child_seed(cfg.seed, k).generate_state(1)[0]))
        q10, q50, q90 = res.quantiles()
        rows.append((n, q10, q50, q90))
        medians.append(q50)
        best = res.best_error
    write_csv(os.path.join(cfg.out, "rip_dist.csv"), ["n", "q10", "q50", "q90"], rows)

    # below n = m the least-squares problem is underdetermined and the ratio says nothing about RIP
    monitor_n = None
    for n, med in zip(cfg.n_grid, medians):
        if n >= cfg.m and med + 1.0 <= bounds.indicator_threshold(n):
            monitor_n = n
            break
    ns = np.array(cfg.n_grid, dtype=float)
    med = np.array(medians)
    tail = ns >= 10 * cfg.m
    fitted_c = float(np.max(ns[tail] * med[tail])) if tail.any() else None
    slope = float(np.polyfit(np.log(ns[tail]), np.log(med[tail]), 1)[0]) if tail.sum() >= 2 else None

    fig = svg.Figure("e_n/e - 1 (median, 10%-90% band)", "n", "e_n/e - 1", logx=True, logy=True)
    fig.add(ns, med, "median", band=(np.array([r[1] for r in rows]), np.array([r[3] for r in rows])), markers=True)
    if fitted_c:
        fig.add(ns[tail], fitted_c / ns[tail], "C/n", color="#555555", width=1.0)
    svg.save(fig, os.path.join(cfg.out, "rip_dist.svg"))
    return {
        "best_error": best,
        "decay_slope": slope,
        "fitted_C": fitted_c,
        "medians": [[n, q] for n, q in zip(cfg.n_grid, medians)],
        "monitor_n": monitor_n,
    }


def l1_measures(m: int, s: float = 1.0):
    """Basis, original weights, the adapted measure of the sparse quotient and the minimal weights."""
    basis = legendre(m)
    omega = np.sqrt(2.0 * np.arange(m) + 1.0)  # ||B_j||_inf for Legendre
    adapted = optimal_weight(bhat_sparse_quotient(basis, omega, s))
    minimal = sup_norms(basis, adapted.weight)
    return basis, omega, adapted, minimal


def run_weights(cfg: ExperimentConfig) -> dict:
    basis, omega, adapted, minimal = l1_measures(cfg.m)
    uniform = sup_norms(basis)
    write_csv(os.path.join(cfg.out, "weights.csv"), ["j", "sup_norm_uniform", "sup_norm_adapted"],
              [(j + 1, a, b) for j, (a, b) in enumerate(zip(uniform, minimal))])
    y = np.linspace(-1.0, 1.0, CURVE_POINTS)
    write_csv(os.path.join(cfg.out, "density.csv"), ["y", "density", "weight"],
              zip(y, adapted.sampling_density(y), adapted.weight(y)))
    j = np.arange(1, cfg.m + 1)
    fig = svg.Figure("weight sequences", "j", "||B_j||_{w,inf}", logx=True, logy=True)
    fig.add(j, uniform, "w = 1", color="black")
    fig.add(j, minimal, "adapted w", color="#d62728")
    svg.save(fig, os.path.join(cfg.out, "weights.svg"))
    return {
        "adapted_first": float(minimal[0]),
        "adapted_max": float(minimal.max()),
        "uniform_max": float(uniform.max()),
    }


def run_l1_compare(cfg: ExperimentConfig) -> dict:
    n = cfg.n_grid[0]
    basis, omega, adapted, minimal = l1_measures(cfg.m)
    uniform = make_uniform()
    u = runge(cfg.runge_c[0])
    rule = gauss_quadrature(max(8 * cfg.m, 800))
    uq, Bq = u(rule.nodes), eval_basis(basis, rule.nodes)
    xg = np.linspace(-1.0, 1.0, CURVE_POINTS)
    Bg = eval_basis(basis, xg)
    n_exact = min(n, cfg.m)
    n_ls = max(1, n // 2)

    err_rows, curve_rows = [], []
    errors = {v: [] for v in L1_VARIANTS}
    for r in range(cfg.repetitions):
        xu, wu = uniform.sample(n, child_seed(cfg.seed, 2 * r))
        xo, _ = adapted.sample(n, child_seed(cfg.seed, 2 * r + 1))
        fits = {}
        for label, k in (("exact-30", n_exact), ("ls-15", n_ls)):
            sub = legendre(k)
            rep = weighted_least_squares(u(xu), EmpiricalDesign(xu, wu), sub)
            coef = np.zeros(cfg.m)
            coef[:k] = rep.coefficients
            fits[label] = (coef, rep.residual)
        for label, pts, om in (
            ("l1-uniform-omega", xu, None),
            ("l1-original-omega", xu, omega),
            ("reweighted-original-omega", xo, omega),
            ("reweighted-minimal-omega", xo, minimal),
        ):
            rep = weighted_l1_interpolate(pts, u(pts), basis, om)
            fits[label] = (rep.coefficients, rep.residual)
        for label in L1_VARIANTS:
            coef, resid = fits[label]
            e = _l2_error(rule, uq, Bq, coef)
            errors[label].append(e)
            err_rows.append((label, r, e, resid))
            curve_rows.extend((label, r, x, v) for x, v in zip(xg, Bg @ coef))
    write_csv(os.path.join(cfg.out, "l1_errors.csv"), ["variant", "rep", "l2_error", "residual"], err_rows)
    write_csv(os.path.join(cfg.out, "l1_curves.csv"), ["variant", "rep", "x", "value"], curve_rows)

    by_variant = {}
    for row in curve_rows:
        by_variant.setdefault(row[0], {}).setdefault(row[1], []).append(row[3])
    for label in L1_VARIANTS:
        fig = svg.Figure(label, "x", "value")
        for vals in by_variant[label].values():
            fig.add(xg, np.clip(vals, -1.0, 2.0), color="#1f77b4", width=0.6, opacity=0.4)
        fig.add(xg, u(xg), "target", color="#d62728", width=2.0)
        svg.save(fig, os.path.join(cfg.out, f"l1_{label}.svg"))
    return {
        "median_l2_error": {k: float(np.median(v)) for k, v in errors.items()},
        "n": n,
    }


def sobolev_bound_curve(basis, smoothness: int, rule=None):
    """``kappa_m``, ``lambda_m`` and ``kappa_m^2 lambda_m^2`` for ``m = 0 .. smoothness - 1``."""
    rule = rule or gauss_quadrature(400, basis.domain)
    h = sobolev_stack(smoothness)
    ms = np.arange(smoothness)
    kappa = np.array([bounds.kappa_sobolev(smoothness, m, 1) for m in ms])
    lam = np.array([bounds.lambda_embedding(basis, sobolev_stack(m) if m else point_value(), h, rule) for m in ms])
    return ms, kappa, lam, kappa**2 * lam**2


def run_sobolev_bound(cfg: ExperimentConfig) -> dict:
    M = cfg.smoothness
    ms, kappa, lam_p, bnd_p = sobolev_bound_curve(legendre(cfg.m), M)
    _, _, lam_t, bnd_t = sobolev_bound_curve(trigonometric(cfg.m), M)
    ip, it = int(np.argmin(bnd_p)), int(np.argmin(bnd_t))
    write_csv(os.path.join(cfg.out, "sobolev_bound.csv"),
              ["m", "kappa", "lambda_poly", "bound_poly", "argmin_poly", "lambda_trig", "bound_trig", "argmin_trig"],
              [(int(m), kappa[m], lam_p[m], bnd_p[m], int(m == ip), lam_t[m], bnd_t[m], int(m == it)) for m in ms])
    fig = svg.Figure(f"kappa_m^2 lambda_m^2, M = {M}", "m", "bound", logy=True)
    fig.add(ms, bnd_p, "polynomials", markers=True)
    fig.add(ms, bnd_t, "trigonometric", markers=True)
    fig.highlight = [(ms[ip], bnd_p[ip]), (ms[it], bnd_t[it])]
    svg.save(fig, os.path.join(cfg.out, "sobolev_bound.svg"))
    return {"argmin_poly": ip, "argmin_trig": it, "min_bound_poly": float(bnd_p[ip]), "min_bound_trig": float(bnd_t[it])}


def run_sobolev_ls(cfg: ExperimentConfig) -> dict:
    n = cfg.n_grid[0]
    basis = legendre(cfg.m)
    u = runge(cfg.runge_c[0])
    measure = make_uniform()
    rule = gauss_quadrature(max(8 * cfg.m, 800))
    uq, Bq = u(rule.nodes), eval_basis(basis, rule.nodes)
    xg = np.linspace(-1.0, 1.0, CURVE_POINTS)
    Bg = eval_basis(basis, xg)
    order = cfg.sobolev_order
    rows, curves = [], []
    e_l2, e_h = [], []
    for r in range(cfg.repetitions):
        x, w = measure.sample(n, child_seed(cfg.seed, r))
        c0 = weighted_least_squares(u(x), EmpiricalDesign(x, w), basis).coefficients
        c1 = weighted_least_squares(u.samples(x, order), EmpiricalDesign(x, w, sobolev_stack(order)), basis).coefficients
        a, b = _l2_error(rule, uq, Bq, c0), _l2_error(rule, uq, Bq, c1)
        e_l2.append(a)
        e_h.append(b)
        rows.append((r, a, b))
        curves.extend(("L2", r, xx, v) for xx, v in zip(xg, Bg @ c0))
        curves.extend((f"H{order}", r, xx, v) for xx, v in zip(xg, Bg @ c1))
    write_csv(os.path.join(cfg.out, "sobolev_ls_errors.csv"), ["rep", "l2_fit_error", "h1_fit_error"], rows)
    write_csv(os.path.join(cfg.out, "sobolev_ls_curves.csv"), ["norm", "rep", "x", "value"], curves)
    for label in ("L2", f"H{order}"):
        fig = svg.Figure(f"least squares, {label}-norm", "x", "value")
        for r in range(cfg.repetitions):
            vals = [c[3] for c in curves if c[0] == label and c[1] == r]
            fig.add(xg, np.clip(vals, -1.0, 2.0), color="#1f77b4", width=0.6, opacity=0.4)
        fig.add(xg, u(xg), "target", color="#d62728", width=2.0)
        svg.save(fig, os.path.join(cfg.out, f"sobolev_ls_{label}.svg"))
    q = (0.1, 0.5, 0.9)
    return {
        "h1_fit_quantiles": dict(zip(map(str, q), np.quantile(e_h, q))),
        "l2_fit_quantiles": dict(zip(map(str, q), np.quantile(e_l2, q))),
        "n": n,
    }


def run_regularity(cfg: ExperimentConfig) -> dict:
    n = cfg.n_grid[0]
    basis = legendre(cfg.m)
    measure = make_uniform()
    rule = gauss_quadrature(max(8 * cfg.m, 800))
    Bq = eval_basis(basis, rule.nodes)
    xg = np.linspace(-1.0, 1.0, CURVE_POINTS)
    Bg = eval_basis(basis, xg)
    rows, curves, summary = [], [], {}
    for ci, c in enumerate(cfg.runge_c):
        u = runge(c)
        uq = u(rule.nodes)
        norm_u = float(np.sqrt(rule.weights @ uq**2))
        _, best = best_approximation_oracle(u, basis, rule=rule)
        errs = []
        fig = svg.Figure(f"1/(1+{c:g}x^2)", "x", "value")
        for r in range(cfg.repetitions):
            x, w = measure.sample(n, child_seed(cfg.seed, ci * cfg.repetitions + r))
            coef = weighted_least_squares(u(x), EmpiricalDesign(x, w), basis).coefficients
            e = _l2_error(rule, uq, Bq, coef)
            errs.append(e)
            rows.append((c, r, e, e / norm_u, best))
            vals = Bg @ coef
            curves.extend((c, r, xx, v) for xx, v in zip(xg, vals))
            fig.add(xg, np.clip(vals, -1.0, 2.0), color="#1f77b4", width=0.6, opacity=0.4)
        fig.add(xg, u(xg), "target", color="#d62728", width=2.0)
        svg.save(fig, os.path.join(cfg.out, f"regularity_c{c:g}.svg"))
        summary[f"{c:g}"] = {"best_error": best, "median_relative_error": float(np.median(errs) / norm_u)}
    write_csv(os.path.join(cfg.out, "regularity_errors.csv"), ["c", "rep", "l2_error", "relative_error", "best_error"], rows)
    write_csv(os.path.join(cfg.out, "regularity_curves.csv"), ["c", "rep", "x", "value"], curves)
    return summary


RUNNERS = {
    "rip-dist": run_rip_dist,
    "weights": run_weights,
    "l1-compare": run_l1_compare,
    "sobolev-bound": run_sobolev_bound,
    "sobolev-ls": run_sobolev_ls,
    "regularity": run_regularity,
}


def run(cfg: ExperimentConfig) -> dict:
    """Run one experiment and write its artifacts; returns the summary."""
    os.makedirs(cfg.out, exist_ok=True)
    if not os.access(cfg.out, os.W_OK):
        raise PermissionError(f"output directory {cfg.out} is not writable")
    result = RUNNERS[cfg.experiment](cfg)
    summary = {"config": cfg.to_dict(), "experiment": cfg.experiment, "result": result}
    write_json(os.path.join(cfg.out, "summary.json"), summary)
    write_json(os.path.join(cfg.out, "schema.json"), schema_document(cfg.experiment))
    return summary


def schema_document(experiment: str) -> dict:
    return {
        "experiment": experiment,
        "files": {
            name: {"columns": [{"name": col, "unit": unit} for col, unit in cols.items()]}
            for name, cols in SCHEMAS[experiment].items()
        },
    }
