"""Convergence studies and accuracy checks driven by an ExperimentConfig."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .contour import SectorParams, default_step, g_lambda, sinc_integrate
from .errors import ConfigError, DomainError, HpFracError
from .hpfem1d import Coefficients1D, l2_distance
from .mlf import MLParams, ml_eval_array, ml_reference
from .presets import PRESETS, coefficient_preset, make_problem
from .solver import DiscretizationConfig, FracProblem, prepare
from .spectral import discrete_eigenpairs, exact_eigenpairs, spacetime_error

CONVERGENCE_COLUMNS = [
    "p", "n_q", "n_hp", "ndof", "t", "err_L2", "err_Hbeta", "err_spacetime", "wall_ms", "factorizations",
]
SINC_COLUMNS = ["n_q", "k", "scalar_quad_error"]
MLF_COLUMNS = ["gamma", "mu", "n_points", "max_rel_error", "max_abs_w"]
SOLVE_COLUMNS = ["t", "x", "u"]


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    resolved: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in self.columns])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# problem construction


def build_problem(cfg: ExperimentConfig):
    """FracProblem and exact solution (or None) from the problem block."""
    spec = cfg.problem
    cs = spec.coefficients
    coeffs = coefficient_preset(cs.preset) if cs.preset else Coefficients1D.constant(cs.A, cs.c)
    a, b = spec.interval
    try:
        return make_problem(spec.preset, spec.gamma, spec.beta, spec.T, a, b, coeffs)
    except DomainError as err:
        raise ConfigError(str(err)) from None


def discretization(cfg: ExperimentConfig, problem: FracProblem, p: int) -> DiscretizationConfig:
    sw = cfg.sweep
    n_q = sw.n_q_factor * p * p
    return DiscretizationConfig(
        p=p,
        mesh_layers=p,
        mesh_sigma=sw.mesh_sigma,
        n_q=n_q,
        k=default_step(problem.beta, n_q, sw.H),
        n_hp=p + sw.n_hp_offset,
        quad_sigma=sw.quad_sigma,
        b=sw.b,
        combine_rhs=sw.combine_rhs,
    )


def _resolved_dict(sol) -> dict:
    c = sol.config
    return {
        "p": c.p, "mesh_layers": c.mesh_layers, "mesh_sigma": c.mesh_sigma, "n_q": c.n_q,
        "k": c.k, "n_hp": c.n_hp, "quad_sigma": c.quad_sigma, "b": c.b,
        "ndof": sol.space.ndof, "z0": sol.sector.z0, "eps0": sol.sector.eps0,
    }


# ---------------------------------------------------------------------------
# convergence


class _ExactReference:
    """Errors against a closed-form solution, norms in the sine basis."""

    def __init__(self, problem, exact, n_modes):
        co = problem.coeffs
        self.problem = problem
        self.exact = exact
        self.basis = exact_eigenpairs(problem.a, problem.b, co.A0, co.c0, n_modes)

    def at(self, t):
        return lambda x: self.exact(t, x)

    def errors(self, u, t):
        ref = self.at(t)
        e2 = l2_distance(u, ref, extra=20)
        d = self.basis.coefficients(u) - self.basis.coefficients(ref)
        eh = math.sqrt(float(np.sum(self.basis.eigenvalues**self.problem.beta * d**2)))
        return e2, eh


class _SelfReference:
    """Errors against the finest discretization, norms in its eigenbasis."""

    def __init__(self, problem, ref_sol):
        self.problem = problem
        self.sol = ref_sol
        self.basis = discrete_eigenpairs(ref_sol.space, problem.coeffs)
        self._cache = {}

    def at(self, t):
        if t not in self._cache:
            self._cache[t] = self.sol.eval(t)
        return self._cache[t]

    def errors(self, u, t):
        ref = self.at(t)
        e2 = l2_distance(u, ref)
        d = self.basis.coefficients(u) - self.basis.coefficients(ref)
        eh = math.sqrt(float(np.sum(self.basis.eigenvalues**self.problem.beta * d**2)))
        return e2, eh


def make_reference(cfg: ExperimentConfig, problem, exact):
    if exact is not None:
        if not problem.coeffs.is_constant:
            raise ConfigError("closed-form references need constant coefficients")
        return _ExactReference(problem, exact, cfg.sweep.spectral_modes)
    p_ref = cfg.sweep.reference_p
    ref_sol = prepare(problem, discretization(cfg, problem, p_ref))
    return _SelfReference(problem, ref_sol)


def _convergence_rows(cfg, problem, reference, p):
    t_start = time.perf_counter()
    sol = prepare(problem, discretization(cfg, problem, p))
    rows = []
    st = float("nan")
    if cfg.sweep.spacetime_samples > 0:
        val = spacetime_error(
            reference.basis, problem, sol, problem.T, cfg.sweep.spacetime_samples, reference=reference.at
        )
        st = math.sqrt(max(val, 0.0))
    for t in cfg.sweep.times:
        u = sol.eval(t)
        e2, eh = reference.errors(u, t)
        now = time.perf_counter()
        rows.append(
            {
                "p": p, "n_q": sol.config.n_q, "n_hp": sol.config.n_hp, "ndof": sol.space.ndof,
                "t": float(t), "err_L2": float(e2), "err_Hbeta": float(eh), "err_spacetime": st,
                "wall_ms": round(1000.0 * (now - t_start), 3), "factorizations": sol.factorizations,
            }
        )
        t_start = now
    return rows, _resolved_dict(sol)


def run_convergence(cfg: ExperimentConfig, threads: int = 1) -> Table:
    """One row per (p, t); failures are recorded and the sweep continues."""
    table = Table("convergence", CONVERGENCE_COLUMNS)
    if not cfg.sweep.p:
        return table
    problem, exact = build_problem(cfg)
    reference = make_reference(cfg, problem, exact)

    def job(p):
        try:
            return _convergence_rows(cfg, problem, reference, p), None
        except HpFracError as err:
            return None, f"p={p}: {type(err).__name__}: {err}"

    if threads > 1:
        # the reference cache is filled up front so workers only read it
        if isinstance(reference, _SelfReference):
            for t in cfg.sweep.times:
                reference.at(t)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, cfg.sweep.p))
    else:
        results = [job(p) for p in cfg.sweep.p]
    for res, diag in results:
        if diag is not None:
            table.diagnostics.append(diag)
            continue
        rows, resolved = res
        table.rows.extend(rows)
        table.resolved.append(resolved)
    return table


# ---------------------------------------------------------------------------
# scalar studies


def _problem_exponents(cfg: ExperimentConfig):
    info = PRESETS[cfg.problem.preset]
    g = cfg.problem.gamma if cfg.problem.gamma is not None else info.gamma
    be = cfg.problem.beta if cfg.problem.beta is not None else info.beta
    return g, be


def sinc_value(lam, t, gamma, beta, b, n_q, k):
    f = lambda y: g_lambda(lam, y, t, gamma, beta, b)
    return sinc_integrate(f, k, n_q, vectorized=True)


def run_sinc_study(cfg: ExperimentConfig) -> Table:
    """Sinc quadrature error of the scalar kernel against a long reference rule."""
    table = Table("sinc-study", SINC_COLUMNS)
    g, be = _problem_exponents(cfg)
    sc = cfg.sinc
    a, b_int = cfg.problem.interval
    cs = cfg.problem.coefficients
    a_min = coefficient_preset(cs.preset).a_min if cs.preset else cs.A
    b = sc.b if sc.b is not None else SectorParams.for_interval(a, b_int, a_min).default_b
    n_ref = sc.reference_n_q
    ref = sinc_value(sc.lam, sc.t, g, be, b, n_ref, default_step(be, n_ref, sc.H))
    for n_q in sc.n_q:
        k = default_step(be, n_q, sc.H)
        try:
            val = sinc_value(sc.lam, sc.t, g, be, b, n_q, k)
            table.rows.append({"n_q": n_q, "k": k, "scalar_quad_error": abs(val - ref)})
        except HpFracError as err:
            table.diagnostics.append(f"n_q={n_q}: {type(err).__name__}: {err}")
    return table


def mlf_sample_points(spec) -> np.ndarray:
    """Deterministic grid in the sector |Arg w| in [3 pi/4, pi], mirrored."""
    r = np.geomspace(spec.r_min, spec.r_max, spec.radii)
    th = np.linspace(0.75 * math.pi, math.pi, spec.angles)
    w = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    return np.concatenate([w, np.conj(w[np.abs(w.imag) > 0])])


def run_mlf_check(cfg: ExperimentConfig) -> Table:
    table = Table("mlf-check", MLF_COLUMNS)
    pts = mlf_sample_points(cfg.mlf)
    for gamma, mu in cfg.mlf.params:
        params = MLParams(gamma, mu)
        try:
            vals = ml_eval_array(params, pts, cfg.mlf.tol)
            errs = []
            for w, v in zip(pts, vals):
                ref = ml_reference(params, complex(w))
                errs.append(abs(v - ref) / max(abs(ref), 1e-300))
            i = int(np.argmax(errs))
            table.rows.append(
                {"gamma": gamma, "mu": mu, "n_points": int(pts.size),
                 "max_rel_error": float(errs[i]), "max_abs_w": float(np.max(np.abs(pts)))}
            )
        except HpFracError as err:
            table.diagnostics.append(f"gamma={gamma}, mu={mu}: {type(err).__name__}: {err}")
    return table


def solve_sample(cfg: ExperimentConfig, p: int, times, n_points: int = 11) -> Table:
    """Sampled values of the discrete solution at ``times``."""
    table = Table("solve", SOLVE_COLUMNS)
    problem, _ = build_problem(cfg)
    sol = prepare(problem, discretization(cfg, problem, p))
    table.resolved.append(_resolved_dict(sol))
    x = np.linspace(problem.a, problem.b, n_points)
    for t in times:
        u = sol.eval(t)(x)
        for xi, ui in zip(x, u):
            table.rows.append({"t": float(t), "x": float(xi), "u": float(ui)})
    return table


# ---------------------------------------------------------------------------
# output


def write_outputs(table: Table, cfg: ExperimentConfig, out_dir: str | Path, wall_s: float) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{table.name}.csv"
    csv_path.write_text(table.to_csv())
    manifest = {
        "experiment": table.name,
        "config_sha256": cfg.digest(),
        "version": __version__,
        "wall_time_s": wall_s,
        "rows": len(table.rows),
        "columns": table.columns,
        "diagnostics": table.diagnostics,
        "resolved_parameters": table.resolved,
        "config": cfg.model_dump(mode="json"),
    }
    man_path = out / f"{table.name}.manifest.json"
    man_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return csv_path, man_path


__all__ = [
    "CONVERGENCE_COLUMNS",
    "Table",
    "build_problem",
    "discretization",
    "run_convergence",
    "run_mlf_check",
    "run_sinc_study",
    "solve_sample",
    "write_outputs",
]
