"""Fully discrete solution of the space-time fractional problem.

The homogeneous part is a sinc-quadrature of the contour integral

    u(t) = (1/2 pi i) int_C e_{gamma,1}(-t^gamma z^beta) (z - L)^{-1} u0 dz,

with hp-FEM resolvents, and the inhomogeneous part applies the same contour
sum with the e_{gamma,gamma} kernel inside a geometric Gauss rule for the
time convolution.  All contour sums are taken counterclockwise around the
spectrum; with z(y) traversed in increasing y this means a factor -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .contour import (
    DEFAULT_H,
    HyperbolicContour,
    SectorParams,
    build_contour,
    default_step,
    validate_sector,
)
from .errors import AccuracyError, DomainError
from .hpfem1d import (
    Coefficients1D,
    FemFunction,
    HpSpace1D,
    ResolventCache,
    assemble,
    build_mesh,
    build_space,
    load_matrix,
    load_vector,
    project_initial_condition,
)
from .mlf import MLParams, ml_kernel
from .timequad import build_hp_rule

#: Orientation of the sinc sum: z(y) runs clockwise around the spectrum.
ORIENTATION = -1.0
REALNESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FracProblem:
    """d_t^gamma u + L^beta u = f on (a, b), u = 0 at a and b, u(0) = u0.

    ``u0(x)`` and ``f(t, x)`` are vectorized in x; either may be None.
    """

    gamma: float
    beta: float
    T: float = 1.0
    a: float = 0.0
    b: float = 1.0
    coeffs: Coefficients1D = field(default_factory=Coefficients1D.constant)
    u0: Callable | None = None
    f: Callable | None = None
    du0: Callable | None = None

    def __post_init__(self):
        if not 0 < self.gamma <= 1 or not 0 < self.beta <= 1:
            raise DomainError("gamma and beta must lie in (0, 1]")
        if not self.T > 0:
            raise DomainError("T must be positive")
        if not self.b > self.a:
            raise DomainError("need a < b")

    def with_data(self, u0=None, f=None, du0=None) -> "FracProblem":
        return replace(self, u0=u0, f=f, du0=du0)


@dataclass(frozen=True)
class DiscretizationConfig:
    """Discretization parameters; None entries take the standard couplings.

    Defaults: mesh_layers = p, n_q = 6 p^2, k = sqrt(pi H/(beta n_q)) with
    H = pi/5, n_hp = p, b = midpoint of the admissible contour scales.
    ``combine_rhs`` sums the time-quadrature right-hand sides before the
    back-substitution (one solve per contour node and time instead of one
    per time node).
    """

    p: int
    mesh_layers: int | None = None
    mesh_sigma: float = 0.125
    n_q: int | None = None
    k: float | None = None
    n_hp: int | None = None
    quad_sigma: float = 0.125
    b: float | None = None
    combine_rhs: bool = False

    def resolved(self, problem: FracProblem) -> "DiscretizationConfig":
        if self.p < 1:
            raise DomainError("p must be >= 1")
        n_q = self.n_q if self.n_q is not None else 6 * self.p**2
        k = self.k if self.k is not None else default_step(problem.beta, n_q, DEFAULT_H)
        b = self.b
        if b is None:
            b = sector_for(problem).default_b
        return replace(
            self,
            mesh_layers=self.p if self.mesh_layers is None else self.mesh_layers,
            n_q=n_q,
            k=k,
            n_hp=self.p if self.n_hp is None else self.n_hp,
            b=b,
        )


def sector_for(problem: FracProblem) -> SectorParams:
    return SectorParams.for_interval(problem.a, problem.b, problem.coeffs.a_min)


@dataclass(eq=False)
class DiscreteSolution:
    problem: FracProblem
    config: DiscretizationConfig
    space: HpSpace1D
    contour: HyperbolicContour
    sector: SectorParams
    cache: ResolventCache
    uh0: FemFunction
    node_vectors: np.ndarray  # (2 n_q + 1, ndof) = R_h(z_n) M u_h0
    weights: np.ndarray  # -(k / 2 pi i) z'(y_n)

    @property
    def factorizations(self) -> int:
        return self.cache.factorizations

    @property
    def back_substitutions(self) -> int:
        return self.cache.back_substitutions

    def eval_homogeneous(self, t: float) -> FemFunction:
        return eval_homogeneous(self, t)

    def apply_W(self, tau: float, g: FemFunction) -> FemFunction:
        return apply_W(self, tau, g)

    def eval_inhomogeneous(self, t: float) -> FemFunction:
        return eval_inhomogeneous(self, t)

    def eval(self, t: float) -> FemFunction:
        return eval(self, t)


def prepare(problem: FracProblem, config: DiscretizationConfig) -> DiscreteSolution:
    """Build mesh, space, contour, factorizations and the homogeneous node vectors."""
    cfg = config.resolved(problem)
    if cfg.n_hp < 0:
        raise DomainError("n_hp must be non-negative")
    sector = sector_for(problem)
    contour = build_contour(cfg.b, cfg.n_q, cfg.k)
    if not validate_sector(contour, sector):
        raise DomainError(
            f"contour with b={cfg.b!r} is not inside the sector (eps0={sector.eps0!r}, z0={sector.z0!r})"
        )
    mesh = build_mesh(problem.a, problem.b, cfg.mesh_sigma, cfg.mesh_layers)
    space = build_space(mesh, cfg.p)
    cache = ResolventCache(space, problem.coeffs, contour)

    if problem.u0 is None:
        uh0 = FemFunction(space, np.zeros(space.ndof))
    else:
        uh0 = project_initial_condition(space, problem.u0, problem.du0)
    mats = assemble(space, problem.coeffs)
    rhs = mats.mass @ uh0.coeffs
    vecs = np.empty((contour.n_nodes, space.ndof), dtype=complex)
    for i in range(contour.n_nodes):
        vecs[i] = cache.solve(i, rhs)
    weights = ORIENTATION * cfg.k * contour.dweights / (2j * math.pi)
    return DiscreteSolution(problem, cfg, space, contour, sector, cache, uh0, vecs, weights)


def _real_part(coeffs: np.ndarray, what: str) -> np.ndarray:
    scale = np.linalg.norm(coeffs)
    if scale > 0 and np.linalg.norm(coeffs.imag) > REALNESS_TOL * scale:
        raise AccuracyError(
            f"{what}: imaginary residual {np.linalg.norm(coeffs.imag) / scale:.2e} exceeds {REALNESS_TOL}"
        )
    return coeffs.real.copy()


def _check_time(sol: DiscreteSolution, t: float):
    if t < 0:
        raise DomainError("t must be non-negative")


def eval_homogeneous(sol: DiscreteSolution, t: float) -> FemFunction:
    """u^{q,h}(t) = sum_n w_n e_{gamma,1}(-t^gamma z_n^beta) v_n; t = 0 gives u_h0."""
    _check_time(sol, t)
    if t == 0:
        return sol.uh0
    pb = sol.problem
    e = ml_kernel(MLParams(pb.gamma, 1.0), t, sol.contour.nodes, pb.beta)
    coeffs = (sol.weights * e) @ sol.node_vectors
    return FemFunction(sol.space, _real_part(coeffs, "homogeneous part"))


def apply_W(sol: DiscreteSolution, tau: float, g: FemFunction) -> FemFunction:
    """W(tau) g = tau^{gamma-1} sum_n w_n e_{gamma,gamma}(-tau^gamma z_n^beta) R_h(z_n) M g."""
    if not tau > 0:
        raise DomainError("tau must be positive")
    pb = sol.problem
    rhs = load_vector(sol.space, g)
    e = ml_kernel(MLParams(pb.gamma, pb.gamma), tau, sol.contour.nodes, pb.beta)
    coef = tau ** (pb.gamma - 1.0) * sol.weights * e
    out = np.zeros(sol.space.ndof, dtype=complex)
    for i in range(sol.contour.n_nodes):
        out += coef[i] * sol.cache.solve(i, rhs)
    return FemFunction(sol.space, out)


def _source_loads(sol: DiscreteSolution, times: np.ndarray) -> np.ndarray:
    """Load vectors of f(s, .) for each s in ``times``, shape (ndof, len(times))."""
    x, _, _, _ = sol.space.quadrature()
    f = sol.problem.f
    vals = np.stack([np.asarray(f(float(s), x)) * np.ones_like(x) for s in times])
    if not np.all(np.isfinite(vals)):
        raise DomainError("source term is not finite at some quadrature point")
    return load_matrix(sol.space, vals)


def eval_inhomogeneous(sol: DiscreteSolution, t: float) -> FemFunction:
    """Geometric Gauss rule on (0, t) applied to tau -> W(tau) f_h(t - tau).

    The outer loop runs over contour nodes; each node back-substitutes all
    time-node loads as one block.
    """
    _check_time(sol, t)
    space = sol.space
    if sol.problem.f is None or t == 0:
        return FemFunction(space, np.zeros(space.ndof))
    pb, cfg = sol.problem, sol.config
    rule = build_hp_rule(t, cfg.quad_sigma, cfg.n_hp, cfg.n_hp)
    tau, omega = rule.nodes, rule.weights
    F = _source_loads(sol, t - tau).astype(complex)
    # E[n, j] = e_{gamma,gamma}(-tau_j^gamma z_n^beta)
    E = ml_kernel(
        MLParams(pb.gamma, pb.gamma), tau[None, :], sol.contour.nodes[:, None], pb.beta
    )
    C = sol.weights[:, None] * E * (omega * tau ** (pb.gamma - 1.0))[None, :]
    out = np.zeros(space.ndof, dtype=complex)
    for i in range(sol.contour.n_nodes):
        if cfg.combine_rhs:
            out += sol.cache.solve(i, F @ C[i])
        else:
            out += sol.cache.solve(i, F) @ C[i]
    return FemFunction(space, _real_part(out, "inhomogeneous part"))


def eval(sol: DiscreteSolution, t: float) -> FemFunction:
    """u^fd(t) = homogeneous + inhomogeneous part."""
    uh = eval_homogeneous(sol, t)
    ui = eval_inhomogeneous(sol, t)
    return FemFunction(sol.space, uh.coeffs + ui.coeffs)


__all__ = [
    "DiscreteSolution",
    "DiscretizationConfig",
    "FracProblem",
    "ORIENTATION",
    "apply_W",
    "eval",
    "eval_homogeneous",
    "eval_inhomogeneous",
    "prepare",
    "sector_for",
]
