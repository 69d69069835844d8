"""Eigenfunction expansions: reference solutions and spectral norms.

Two bases are supported: closed-form sine modes for constant coefficients,
and mass-orthonormal eigenvectors of a discrete space.  The reference
solution is the mode-wise formula

    u_j(t) = e_{gamma,1}(-t^gamma lam_j^beta) u0_j
             + int_0^t tau^(gamma-1) e_{gamma,gamma}(-tau^gamma lam_j^beta) f_j(t - tau) dtau.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, TruncationError
from .hpfem1d import (
    Coefficients1D,
    FemFunction,
    HpSpace1D,
    assemble,
    load_matrix,
    load_vector,
    prolong,
)
from .mlf import MLParams, ml_kernel
from .timequad import build_hp_rule, gauss_rule, two_sided_rule

REFERENCE_LAYERS = 30
REFERENCE_DEGREE = 30
CHECK_INCREMENT = 10
_MODE_CHUNK = 256


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    kind: str  # "exact" or "discrete"
    eigenvalues: np.ndarray
    a: float
    b: float
    space: HpSpace1D | None = None
    vectors: np.ndarray | None = field(default=None, repr=False)  # (ndof, J)
    # (operator, mass) matrices of the discrete space
    matrices: tuple | None = field(default=None, repr=False)

    @property
    def J(self) -> int:
        return self.eigenvalues.size

    @property
    def length(self) -> float:
        return self.b - self.a

    def modes(self, x) -> np.ndarray:
        """Mode values, shape (len(x), J)."""
        x = np.asarray(x, dtype=float).ravel()
        if self.kind == "exact":
            j = np.arange(1, self.J + 1)
            return math.sqrt(2.0 / self.length) * np.sin(
                np.pi * np.outer(x - self.a, j) / self.length
            )
        return np.stack(
            [self.space.evaluate(self.vectors[:, j], x) for j in range(self.J)], axis=1
        )

    # -- projections ------------------------------------------------------

    def _exact_rule(self, breaks=None, extra: int = 0):
        """Gauss points resolving every mode; mesh breakpoints are honoured."""
        n_sub = max(1, math.ceil(self.J / 8))
        br = np.linspace(self.a, self.b, n_sub + 1)
        if breaks is not None:
            br = np.unique(np.concatenate([br, breaks]))
        xi, w = gauss_rule(23 + extra)
        h = np.diff(br)
        x = br[:-1, None] + 0.5 * h[:, None] * (xi[None, :] + 1.0)
        return x.ravel(), (0.5 * h[:, None] * w[None, :]).ravel()

    def _project_samples(self, x, w, vals) -> np.ndarray:
        """Coefficients from samples ``vals`` (..., len(x)) at rule (x, w)."""
        vals = np.asarray(vals)
        out = np.empty(vals.shape[:-1] + (self.J,), dtype=np.result_type(vals.dtype, float))
        wv = vals * w
        j_all = np.arange(1, self.J + 1)
        scale = math.sqrt(2.0 / self.length)
        for s in range(0, self.J, _MODE_CHUNK):
            j = j_all[s : s + _MODE_CHUNK]
            phi = scale * np.sin(np.pi * np.outer(x - self.a, j) / self.length)
            out[..., s : s + j.size] = wv @ phi
        return out

    def coefficients(self, v) -> np.ndarray:
        """(v, phi_j) for a FemFunction, SpectralFunction, callable or coefficient array."""
        if isinstance(v, SpectralFunction):
            if v.basis is not self:
                raise DomainError("spectral function belongs to another basis")
            return v.coeffs
        if isinstance(v, np.ndarray) and v.shape == (self.J,):
            return v
        if self.kind == "discrete":
            if isinstance(v, FemFunction):
                if v.space is not self.space:
                    v = prolong(v, self.space)
                return self.coefficients_of_vector(v.coeffs)
            return self.coefficients_of_load(load_vector(self.space, v))
        breaks = None
        extra = 0
        if isinstance(v, FemFunction):
            breaks = v.space.mesh.nodes
            extra = v.space.p
        x, w = self._exact_rule(breaks, extra)
        return self._project_samples(x, w, np.asarray(v(x)) * np.ones_like(x))

    def coefficients_of_vector(self, c) -> np.ndarray:
        """Discrete basis: coefficients of the FEM coefficient vector(s) ``c``.

        Uses (phi_j, v) = (K phi_j, v)/lam_j, which stays accurate where the
        mass matrix is ill conditioned.
        """
        K, _ = self.matrices
        return (self.vectors.T @ (K @ c)) / _col(self.eigenvalues, np.ndim(c))

    def coefficients_of_load(self, b) -> np.ndarray:
        """Discrete basis: coefficients of the L2 projection with load vector(s) ``b``."""
        _, M = self.matrices
        d = 1.0 / np.sqrt(np.diag(M))
        cho = scipy.linalg.cho_factor(d[:, None] * M * d[None, :])
        scale = d if np.ndim(b) == 1 else d[:, None]
        return self.coefficients_of_vector(scale * scipy.linalg.cho_solve(cho, scale * b))

    def l2_tail(self, v, coeffs=None) -> float:
        """L2 norm of the part of ``v`` outside the span (zero for complete bases)."""
        if self.kind == "discrete" and self.J == self.space.ndof:
            return 0.0
        if coeffs is None:
            coeffs = self.coefficients(v)
        if self.kind == "discrete":
            raise DomainError("tail estimate needs a complete discrete basis")
        breaks, extra = None, 0
        if isinstance(v, FemFunction):
            breaks, extra = v.space.mesh.nodes, v.space.p
        x, w = self._exact_rule(breaks, extra)
        total = float(np.sum(w * np.abs(np.asarray(v(x)) * np.ones_like(x)) ** 2))
        return math.sqrt(max(total - float(np.sum(np.abs(coeffs) ** 2)), 0.0))


def _col(lam, ndim):
    return lam if ndim == 1 else lam[:, None]


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    basis: SpectralBasis
    coeffs: np.ndarray
    tail: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        keep = np.flatnonzero(np.abs(self.coeffs) > 1e-18 * max(np.max(np.abs(self.coeffs)), 1e-300))
        if self.basis.kind == "exact":
            j = keep + 1
            phi = math.sqrt(2.0 / self.basis.length) * np.sin(
                np.pi * np.outer(x.ravel() - self.basis.a, j) / self.basis.length
            )
            return (phi @ self.coeffs[keep]).reshape(x.shape)
        vec = self.basis.vectors[:, keep] @ self.coeffs[keep]
        return self.basis.space.evaluate(vec, x)


def exact_eigenpairs(a: float, b: float, A0: float, c0: float, J: int) -> SpectralBasis:
    """lam_j = A0 (j pi/(b-a))^2 + c0 with sqrt(2/(b-a)) sin(j pi (x-a)/(b-a))."""
    if not b > a or not A0 > 0 or c0 < 0 or J < 1:
        raise DomainError("need a < b, A0 > 0, c0 >= 0 and J >= 1")
    j = np.arange(1, J + 1)
    lam = A0 * (j * np.pi / (b - a)) ** 2 + c0
    lam.setflags(write=False)
    return SpectralBasis("exact", lam, float(a), float(b))


def discrete_eigenpairs(space: HpSpace1D, coeffs: Coefficients1D, J: int | None = None) -> SpectralBasis:
    """Lowest J pairs of (K + Mc) phi = lam M phi with M-normalized phi.

    Boundary-layer elements spread the spectrum over many decades, which no
    single dense reduction resolves.  Low modes come from the inverted
    pencil M psi = mu K psi (Cholesky of the diagonally scaled K, condition
    number O(1) for this basis) and high modes from the direct pencil with
    diagonally scaled M; each index takes the variant with the smaller
    relative error bound.
    """
    n = space.ndof
    J = n if J is None else J
    if not 1 <= J <= n:
        raise DomainError(f"need 1 <= J <= ndof={n}")
    mats = assemble(space, coeffs)
    K = (mats.stiff + mats.massc).toarray()
    M = mats.mass.toarray()

    s = 1.0 / np.sqrt(np.diag(K))
    R = scipy.linalg.cholesky(s[:, None] * K * s[None, :])
    Ms = s[:, None] * M * s[None, :]
    C = scipy.linalg.solve_triangular(R, scipy.linalg.solve_triangular(R, Ms, trans="T").T, trans="T")
    mu, W = scipy.linalg.eigh(0.5 * (C + C.T))
    mu, W = mu[::-1], W[:, ::-1]
    mu = np.maximum(mu, np.finfo(float).eps * mu[0])
    lam_low = 1.0 / mu
    phi_low = s[:, None] * scipy.linalg.solve_triangular(R, W) * np.sqrt(lam_low)[None, :]

    d = 1.0 / np.sqrt(np.diag(M))
    lam_high, phi_high = scipy.linalg.eigh(d[:, None] * K * d[None, :], d[:, None] * M * d[None, :])
    phi_high = d[:, None] * phi_high

    # relative errors scale like eps*lam/lam_1 (low) and eps*lam_max/lam (high)
    use_low = lam_low < math.sqrt(lam_low[0] * lam_high[-1])
    lam = np.where(use_low, lam_low, lam_high)[:J].copy()
    phi = np.where(use_low[None, :], phi_low, phi_high)[:, :J].copy()
    if np.any(lam <= 0):
        raise DomainError("discrete operator is not positive definite")
    lam.setflags(write=False)
    return SpectralBasis("discrete", lam, space.mesh.a, space.mesh.b, space, phi, (K, M))


def _kernel_weights(problem, lam, t, layers, degree):
    """Weights W[i, j] with sum_i W[i, j] g(t - tau_i) ~ convolution of mode j."""
    tau, omega = two_sided_rule(t, layers, degree)
    E = ml_kernel(MLParams(problem.gamma, problem.gamma), tau[:, None], lam[None, :], problem.beta)
    return tau, (omega * tau ** (problem.gamma - 1.0))[:, None] * E.real


def _source_coefficients(basis: SpectralBasis, problem, times) -> np.ndarray:
    """f(s, .) projected on the basis for each s, shape (len(times), J)."""
    f = problem.f
    if basis.kind == "exact":
        x, w = basis._exact_rule()
        vals = np.stack([np.asarray(f(float(s), x)) * np.ones_like(x) for s in times])
        return basis._project_samples(x, w, vals)
    xq, _, _, _ = basis.space.quadrature()
    vals = np.stack([np.asarray(f(float(s), xq)) * np.ones_like(xq) for s in times])
    return basis.coefficients_of_load(load_matrix(basis.space, vals)).T


def reference_solution(
    basis: SpectralBasis,
    problem,
    t: float,
    time_tol: float = 1e-10,
    layers: int = REFERENCE_LAYERS,
    degree: int = REFERENCE_DEGREE,
    check: bool = True,
    on_truncation: str = "raise",
) -> SpectralFunction:
    """Mode-series solution at time ``t``.

    The convolution uses a geometric Gauss rule graded toward both ends of
    (0, t) and is repeated with ``CHECK_INCREMENT`` more layers and degree
    when ``check`` is set.  For the exact basis the truncation tail is
    bounded through the complete monotonicity of the kernels.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    lam = basis.eigenvalues
    gam, beta = problem.gamma, problem.beta
    coeffs = np.zeros(basis.J)
    tail = 0.0
    if problem.u0 is not None:
        c0 = basis.coefficients(problem.u0)
        decay = ml_kernel(MLParams(gam, 1.0), t, lam, beta).real if t > 0 else np.ones_like(lam)
        coeffs = coeffs + decay * c0
        if basis.kind == "exact":
            lam_next = lam[-1] + (lam[-1] - lam[-2] if basis.J > 1 else lam[-1])
            d_next = ml_kernel(MLParams(gam, 1.0), t, lam_next, beta).real if t > 0 else 1.0
            tail += abs(d_next) * basis.l2_tail(problem.u0, c0)
    if problem.f is not None and t > 0:
        def conv(nl, nd):
            tau, _ = two_sided_rule(t, nl, nd)
            F = _source_coefficients(basis, problem, t - tau)
            # modes the source never excites contribute nothing
            mag = np.max(np.abs(F), axis=0)
            active = np.flatnonzero(mag > 1e-17 * max(float(np.max(mag)), 1e-300))
            out = np.zeros(basis.J)
            if active.size:
                _, W = _kernel_weights(problem, lam[active], t, nl, nd)
                out[active] = np.sum(W * F[:, active], axis=0)
            return out

        ci = conv(layers, degree)
        if check:
            cc = conv(layers + CHECK_INCREMENT, degree + CHECK_INCREMENT)
            diff = float(np.linalg.norm(ci - cc))
            if diff > time_tol * max(1.0, float(np.linalg.norm(ci))):
                raise TruncationError(
                    f"convolution quadrature self-check differs by {diff:.2e} > {time_tol:.1e}", diff
                )
        coeffs = coeffs + ci
        if basis.kind == "exact":
            # int_0^inf tau^(gamma-1) e_{gamma,gamma}(-tau^gamma lam^beta) = lam^(-beta)
            x, w = basis._exact_rule()
            s_grid = np.linspace(0.0, t, 9)
            vals = np.stack([np.asarray(problem.f(float(s), x)) * np.ones_like(x) for s in s_grid])
            fc = basis._project_samples(x, w, vals)
            f_tail = np.sqrt(np.maximum(np.sum(w * vals**2, axis=1) - np.sum(fc**2, axis=1), 0.0))
            lam_next = lam[-1] + (lam[-1] - lam[-2] if basis.J > 1 else lam[-1])
            tail += lam_next ** (-beta) * float(np.max(f_tail))
    if tail > time_tol:
        msg = f"spectral truncation tail {tail:.2e} exceeds {time_tol:.1e} at J={basis.J}"
        if on_truncation == "raise":
            raise TruncationError(msg, tail)
        if on_truncation == "warn":
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return SpectralFunction(basis, coeffs, tail)


def htilde_norm(basis: SpectralBasis, v, theta: float) -> float:
    """(sum_j lam_j^theta |(v, phi_j)|^2)^(1/2)."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError("theta must lie in [0, 1]")
    c = basis.coefficients(v)
    total = float(np.sum(basis.eigenvalues**theta * np.abs(c) ** 2))
    if basis.kind == "exact" and not isinstance(v, (SpectralFunction, np.ndarray)):
        tail = basis.eigenvalues[-1] ** theta * basis.l2_tail(v, c) ** 2
        if tail > 1e-6 * total:
            warnings.warn(
                f"spectral norm truncated: tail estimate {math.sqrt(tail):.2e} vs {math.sqrt(total):.2e}",
                RuntimeWarning,
                stacklevel=2,
            )
    return math.sqrt(total)


def spacetime_error(basis, problem, sol, T: float, n_samples: int, reference=None) -> float:
    """int_0^T t^(gamma-1) ||u(t) - u_fd(t)||^2_{H^beta} dt by a geometric rule.

    ``reference(t)`` may supply u(t) as anything ``basis.coefficients``
    accepts; by default the mode series is used.
    """
    rule = build_hp_rule(T, 0.125, n_samples, n_samples)
    lam_b = basis.eigenvalues**problem.beta
    total = 0.0
    for t, w in zip(rule.nodes, rule.weights):
        ref = reference(t) if reference is not None else reference_solution(basis, problem, t)
        d = basis.coefficients(sol.eval(t)) - basis.coefficients(ref)
        total += w * t ** (problem.gamma - 1.0) * float(np.sum(lam_b * np.abs(d) ** 2))
    return total


__all__ = [
    "SpectralBasis",
    "SpectralFunction",
    "discrete_eigenpairs",
    "exact_eigenpairs",
    "htilde_norm",
    "reference_solution",
    "spacetime_error",
]
