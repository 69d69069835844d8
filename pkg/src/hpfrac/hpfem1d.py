"""hp finite elements on geometrically graded interval meshes.

Shape functions are integrated Legendre polynomials on the reference
element (-1, 1): the two vertex hats (1 -+ xi)/2 and the bubbles

    N_j = (P_j - P_{j-2}) / sqrt(2 (2j - 1)),   N_j' = sqrt((2j - 1)/2) P_{j-1},

so the bubble derivatives are L2-orthonormal.  Degrees of freedom are
numbered element by element (left vertex, bubbles, right vertex), which keeps
the half bandwidth equal to p.  The two boundary vertices are removed to
impose homogeneous Dirichlet conditions.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import legendre
from scipy.linalg import lapack

from .contour import HyperbolicContour, SectorParams
from .errors import AssemblyError, DomainError, RangeError, SingularSystemError
from .timequad import gauss_rule

# ---------------------------------------------------------------------------
# mesh


@dataclass(frozen=True, eq=False)
class GeometricMesh1D:
    a: float
    b: float
    sigma: float
    layers: int
    nodes: np.ndarray = field(repr=False)

    @property
    def n_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def h(self) -> np.ndarray:
        return np.diff(self.nodes)


def reference_mesh_nodes(sigma: float, layers: int) -> np.ndarray:
    """Geometric nodes on (-1, 1) refined toward both endpoints."""
    L = layers
    inner_left = [-1.0 + sigma ** (L - i + 1) for i in range(1, L + 1)]
    inner_right = [1.0 - sigma ** (i - L) for i in range(L + 1, 2 * L + 1)]
    return np.array([-1.0] + inner_left + inner_right + [1.0])


def build_mesh(a: float, b: float, sigma: float, layers: int) -> GeometricMesh1D:
    if not b > a:
        raise DomainError("need a < b")
    if not 0.0 < sigma < 1.0:
        raise DomainError("sigma must lie in (0, 1)")
    if layers < 0 or int(layers) != layers:
        raise DomainError("layers must be a non-negative integer")
    layers = int(layers)
    if layers and 0.5 * sigma**layers < np.finfo(float).eps:
        raise RangeError(
            f"smallest element sigma^{layers}*(b-a)/2 is below machine precision; use fewer layers"
        )
    ref = reference_mesh_nodes(sigma, layers)
    half = 0.5 * (b - a)
    nodes = a + half * (ref + 1.0)
    # keep the endpoints exact and build the right layer from b so tiny elements keep accuracy
    nodes[0], nodes[-1] = a, b
    if layers:
        nodes[layers + 1 : -1] = b - half * sigma ** np.arange(1, layers + 1)
        nodes[1 : layers + 1] = a + half * sigma ** np.arange(layers, 0, -1)
    if np.any(np.diff(nodes) <= 0):
        raise RangeError("mesh nodes are not strictly increasing; use fewer layers")
    nodes.setflags(write=False)
    return GeometricMesh1D(float(a), float(b), float(sigma), layers, nodes)


# ---------------------------------------------------------------------------
# reference shape functions


def shape_functions(p: int, xi, derivative: int = 0) -> np.ndarray:
    """Values (derivative 0, 1 or 2) of the p+1 local shapes, shape (p+1, m).

    Local order is [left vertex, right vertex, N_2, ..., N_p].
    """
    xi = np.asarray(xi, dtype=float)
    m = xi.size
    out = np.zeros((p + 1, m))
    if derivative == 0:
        out[0] = 0.5 * (1.0 - xi)
        out[1] = 0.5 * (1.0 + xi)
        if p >= 2:
            P = legendre.legvander(xi, p).T
            j = np.arange(2, p + 1)
            out[2:] = (P[2:] - P[:-2]) / np.sqrt(2.0 * (2 * j - 1))[:, None]
    elif derivative == 1:
        out[0] = -0.5
        out[1] = 0.5
        if p >= 2:
            P = legendre.legvander(xi, p - 1).T
            j = np.arange(2, p + 1)
            out[2:] = np.sqrt((2 * j - 1) / 2.0)[:, None] * P[1:]
    elif derivative == 2:
        if p >= 2:
            j = np.arange(2, p + 1)
            for r, jj in enumerate(j):
                c = np.zeros(jj)
                c[-1] = 1.0
                out[2 + r] = math.sqrt((2 * jj - 1) / 2.0) * legendre.legval(xi, legendre.legder(c))
    else:
        raise DomainError("derivative must be 0, 1 or 2")
    return out


# ---------------------------------------------------------------------------
# space


@dataclass(frozen=True, eq=False)
class HpSpace1D:
    """Continuous piecewise polynomials of degree p vanishing at both endpoints."""

    mesh: GeometricMesh1D
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("polynomial degree must be >= 1")

    @property
    def n_full(self) -> int:
        """Dof count including the two boundary vertices."""
        return self.mesh.n_elements * self.p + 1

    @property
    def ndof(self) -> int:
        return self.n_full - 2

    @property
    def bandwidth(self) -> int:
        return self.p

    def local_to_full(self, e: int) -> np.ndarray:
        p = self.p
        base = e * p
        return np.concatenate(([base, base + p], base + np.arange(1, p)))

    @property
    def dof_table(self) -> np.ndarray:
        """(n_elements, p+1) table of full indices in local shape order."""
        return np.array([self.local_to_full(e) for e in range(self.mesh.n_elements)])

    def full_coeffs(self, c) -> np.ndarray:
        c = np.asarray(c)
        out = np.zeros(self.n_full, dtype=c.dtype)
        out[1:-1] = c
        return out

    def quadrature(self, extra: int = 4):
        """Per-element Gauss data with p+extra+1 points.

        Returns points (n_el, nq), weights (n_el, nq) and shape values
        (p+1, nq) plus derivatives (p+1, nq) on the reference element.
        """
        xi, w = gauss_rule(self.p + extra)
        nodes = self.mesh.nodes
        h = np.diff(nodes)
        x = nodes[:-1, None] + 0.5 * h[:, None] * (xi[None, :] + 1.0)
        wx = 0.5 * h[:, None] * w[None, :]
        return x, wx, shape_functions(self.p, xi), shape_functions(self.p, xi, 1)

    def locate(self, x):
        """Element index and reference coordinate of each point in [a, b]."""
        x = np.asarray(x, dtype=float)
        nodes = self.mesh.nodes
        if np.any(x < nodes[0] - 1e-14 * (nodes[-1] - nodes[0])) or np.any(
            x > nodes[-1] + 1e-14 * (nodes[-1] - nodes[0])
        ):
            raise DomainError("evaluation point outside the mesh")
        e = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, self.mesh.n_elements - 1)
        h = nodes[e + 1] - nodes[e]
        xi = np.clip(2.0 * (x - nodes[e]) / h - 1.0, -1.0, 1.0)
        return e, xi

    def evaluate(self, coeffs, x, derivative: int = 0) -> np.ndarray:
        """Evaluate the function with free coefficients ``coeffs`` at ``x``."""
        full = self.full_coeffs(coeffs)
        x = np.asarray(x, dtype=float)
        shape = x.shape
        e, xi = self.locate(x.ravel())
        phi = shape_functions(self.p, xi, derivative)
        vals = np.einsum("km,mk->m", phi, full[self.dof_table[e]])
        if derivative:
            h = self.mesh.h[e]
            vals = vals * (2.0 / h) ** derivative
        return vals.reshape(shape)


def build_space(mesh: GeometricMesh1D, p: int) -> HpSpace1D:
    return HpSpace1D(mesh, int(p))


@dataclass(frozen=True, eq=False)
class Coefficients1D:
    """Diffusion A(x) >= a_min > 0 and reaction c(x) >= 0."""

    A: Callable
    c: Callable
    a_min: float
    A0: float | None = None
    c0: float | None = None

    def __post_init__(self):
        if not self.a_min > 0:
            raise DomainError("a_min must be positive")

    @classmethod
    def constant(cls, A0: float = 1.0, c0: float = 0.0) -> "Coefficients1D":
        if not A0 > 0 or c0 < 0:
            raise DomainError("need A0 > 0 and c0 >= 0")
        A0, c0 = float(A0), float(c0)
        return cls(
            A=lambda x: np.full(np.shape(x), A0),
            c=lambda x: np.full(np.shape(x), c0),
            a_min=A0,
            A0=A0,
            c0=c0,
        )

    @property
    def is_constant(self) -> bool:
        return self.A0 is not None and self.c0 is not None


@dataclass(frozen=True, eq=False)
class SystemMatrices:
    """Sparse symmetric matrices on the free dofs."""

    stiff: sp.csr_array
    massc: sp.csr_array
    mass: sp.csr_array
    bandwidth: int


def _assemble_dense(space: HpSpace1D, A_vals, c_vals, x, wx, phi, dphi):
    n = space.n_full
    K = np.zeros((n, n))
    Mc = np.zeros((n, n))
    M = np.zeros((n, n))
    h = space.mesh.h
    for e in range(space.mesh.n_elements):
        idx = space.local_to_full(e)
        ix = np.ix_(idx, idx)
        scale = 2.0 / h[e]
        K[ix] += (dphi * (wx[e] * A_vals[e])) @ dphi.T * scale**2
        Mc[ix] += (phi * (wx[e] * c_vals[e])) @ phi.T
        M[ix] += (phi * wx[e]) @ phi.T
    return K, Mc, M


@lru_cache(maxsize=16)
def assemble(space: HpSpace1D, coeffs: Coefficients1D, extra: int = 4) -> SystemMatrices:
    """Stiffness (A u', v'), reaction mass (c u, v) and mass (u, v).

    Gauss-Legendre with p + extra + 1 points per element; exact for constant
    coefficients when extra >= 1.
    """
    h = space.mesh.h
    if np.any(h <= 0):
        raise AssemblyError("degenerate mesh element")
    x, wx, phi, dphi = space.quadrature(extra)
    A_vals = np.asarray(coeffs.A(x), dtype=float) * np.ones_like(x)
    c_vals = np.asarray(coeffs.c(x), dtype=float) * np.ones_like(x)
    if not (np.all(np.isfinite(A_vals)) and np.all(np.isfinite(c_vals))):
        raise AssemblyError("coefficients are not finite at quadrature points")
    if np.any(A_vals < coeffs.a_min * (1 - 1e-12)):
        raise AssemblyError("A(x) falls below the certified bound a_min")
    if np.any(c_vals < 0):
        raise AssemblyError("reaction coefficient c(x) is negative")
    K, Mc, M = _assemble_dense(space, A_vals, c_vals, x, wx, phi, dphi)
    inner = slice(1, -1)
    M = M[inner, inner]
    if M.size and np.min(np.diag(M)) <= 0:
        raise AssemblyError("singular mass matrix")
    mats = SystemMatrices(
        sp.csr_array(K[inner, inner]),
        sp.csr_array(Mc[inner, inner]),
        sp.csr_array(M),
        space.p,
    )
    return mats


def laplace_matrices(space: HpSpace1D) -> SystemMatrices:
    """Matrices for A = 1, c = 0; used for seminorms."""
    return assemble(space, _UNIT_COEFFS)


_UNIT_COEFFS = Coefficients1D.constant(1.0, 0.0)


# ---------------------------------------------------------------------------
# functions


@dataclass(frozen=True, eq=False)
class FemFunction:
    space: HpSpace1D
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (self.space.ndof,):
            raise DomainError(f"expected {self.space.ndof} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        return self.space.evaluate(self.coeffs, x)

    def derivative(self, x):
        return self.space.evaluate(self.coeffs, x, 1)

    @property
    def real(self) -> "FemFunction":
        return FemFunction(self.space, self.coeffs.real.copy())

    @property
    def imag(self) -> "FemFunction":
        return FemFunction(self.space, self.coeffs.imag.copy())

    def conj(self) -> "FemFunction":
        return FemFunction(self.space, np.conj(self.coeffs))

    def __add__(self, other):
        _check_same(self, other)
        return FemFunction(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_same(self, other)
        return FemFunction(self.space, self.coeffs - other.coeffs)

    def __mul__(self, s):
        return FemFunction(self.space, s * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return FemFunction(self.space, -self.coeffs)

    def l2_norm(self) -> float:
        M = laplace_matrices(self.space).mass
        c = self.coeffs
        return math.sqrt(max(float(np.real(np.vdot(c, M @ c))), 0.0))

    def h1_seminorm(self) -> float:
        K = laplace_matrices(self.space).stiff
        c = self.coeffs
        return math.sqrt(max(float(np.real(np.vdot(c, K @ c))), 0.0))


def _check_same(u: FemFunction, v: FemFunction):
    if u.space is not v.space:
        raise DomainError("functions live on different spaces")


def zero_function(space: HpSpace1D, dtype=float) -> FemFunction:
    return FemFunction(space, np.zeros(space.ndof, dtype=dtype))


def load_vector(space: HpSpace1D, g, extra: int = 4) -> np.ndarray:
    """Entries (g, phi_i) over the free dofs.

    ``g`` is a vectorized callable of x or a FemFunction; for a FemFunction
    on the same space the result is exact (mass times coefficients).
    """
    if isinstance(g, FemFunction) and g.space is space:
        return laplace_matrices(space).mass @ g.coeffs
    x, wx, phi, _ = space.quadrature(extra)
    vals = np.asarray(g(x)) * np.ones_like(x)
    return _load_from_values(space, wx * vals, phi)


def load_matrix(space: HpSpace1D, values, extra: int = 4) -> np.ndarray:
    """Load vectors for several functions sampled at the quadrature points.

    ``values`` has shape (m, n_el, nq) matching ``space.quadrature(extra)``;
    the result has shape (ndof, m).
    """
    x, wx, phi, _ = space.quadrature(extra)
    values = np.asarray(values)
    n_el, nq = x.shape
    m = values.shape[0]
    weighted = (values * wx[None]).reshape(m, n_el, nq)
    out = np.zeros((space.n_full, m), dtype=np.result_type(values.dtype, float))
    for e in range(n_el):
        idx = space.local_to_full(e)
        out[idx] += phi @ weighted[:, e, :].T
    return out[1:-1]


def _load_from_values(space, weighted, phi):
    out = np.zeros(space.n_full, dtype=np.result_type(weighted.dtype, float))
    for e in range(space.mesh.n_elements):
        out[space.local_to_full(e)] += phi @ weighted[e]
    return out[1:-1]


def interpolate(space: HpSpace1D, fun, dfun, keep_boundary: bool = False):
    """Vertex interpolation plus H1_0-projection of the bubbles per element.

    Exact for functions that are piecewise polynomials of degree <= p on the
    mesh.  With ``keep_boundary=True`` the full coefficient vector (including
    the boundary vertex values) is returned instead of a FemFunction.
    """
    nodes = space.mesh.nodes
    p = space.p
    full = np.zeros(space.n_full, dtype=complex)
    full[:: p] = fun(nodes)
    if p >= 2:
        xi, w = gauss_rule(p + 4)
        dphi = shape_functions(p, xi, 1)[2:]
        h = space.mesh.h
        x = nodes[:-1, None] + 0.5 * h[:, None] * (xi[None, :] + 1.0)
        # d/dxi of fun(F(xi)) is (h/2) fun'(x); vertex part has constant derivative
        dvals = 0.5 * h[:, None] * np.asarray(dfun(x)) * np.ones_like(x)
        vert = 0.5 * (full[p::p] - full[:-1:p])
        bub = (dvals - vert[:, None]) * w[None, :] @ dphi.T
        for e in range(space.mesh.n_elements):
            full[e * p + 1 : e * p + p] = bub[e]
    if not np.iscomplexobj(fun(nodes[:1])) and not np.iscomplexobj(dfun(nodes[:1])):
        full = full.real
    if keep_boundary:
        return full
    return FemFunction(space, full[1:-1].copy())


def prolong(u: FemFunction, fine: HpSpace1D) -> FemFunction:
    """Represent ``u`` on ``fine``; exact when the spaces are nested."""
    full = interpolate(fine, u, u.derivative, keep_boundary=True)
    return FemFunction(fine, full[1:-1].copy())


def _merged_rule(nodes_list, npts):
    br = np.unique(np.concatenate(nodes_list))
    xi, w = gauss_rule(npts)
    h = np.diff(br)
    x = br[:-1, None] + 0.5 * h[:, None] * (xi[None, :] + 1.0)
    return x.ravel(), (0.5 * h[:, None] * w[None, :]).ravel()


def l2_distance(u, v, extra: int = 8) -> float:
    """L2 distance of FemFunctions or callables on the union of their meshes."""
    spaces = [f.space for f in (u, v) if isinstance(f, FemFunction)]
    if not spaces:
        raise DomainError("need at least one FemFunction")
    p = max(s.p for s in spaces)
    x, w = _merged_rule([s.mesh.nodes for s in spaces], p + extra)
    d = np.asarray(u(x)) - np.asarray(v(x))
    return math.sqrt(float(np.sum(w * np.abs(d) ** 2)))


def h1_distance(u, v, extra: int = 8) -> float:
    """H1 seminorm of u - v; callables must provide a ``derivative`` attribute."""
    spaces = [f.space for f in (u, v) if isinstance(f, FemFunction)]
    p = max(s.p for s in spaces)
    x, w = _merged_rule([s.mesh.nodes for s in spaces], p + extra)
    d = np.asarray(u.derivative(x)) - np.asarray(v.derivative(x))
    return math.sqrt(float(np.sum(w * np.abs(d) ** 2)))


# ---------------------------------------------------------------------------
# resolvent solves


def to_lapack_band(A: sp.sparray, kl: int, ku: int) -> np.ndarray:
    """General band storage with kl extra rows for the LU fill."""
    coo = sp.coo_array(A)
    n = A.shape[0]
    ab = np.zeros((2 * kl + ku + 1, n), dtype=complex)
    ab[kl + ku + coo.row - coo.col, coo.col] = coo.data
    return ab


def _system(mats: SystemMatrices, z: complex):
    return (z * mats.mass - mats.massc - mats.stiff).tocsr()


def _factor(mats: SystemMatrices, z: complex, node_index=None):
    kl = ku = mats.bandwidth
    ab = to_lapack_band(_system(mats, z), kl, ku)
    lu, piv, info = lapack.zgbtrf(ab, kl, ku)
    if info != 0:
        where = "" if node_index is None else f" at contour node {node_index}"
        raise SingularSystemError(f"banded LU failed (info={info}) for z={z!r}{where}", node_index)
    return lu, piv


def _backsolve(lu, piv, kl, rhs):
    x, info = lapack.zgbtrs(lu, kl, kl, rhs, piv)
    if info != 0:
        raise SingularSystemError(f"banded back-substitution failed (info={info})")
    return x


def resolvent_solve(
    space: HpSpace1D, coeffs: Coefficients1D, z: complex, rhs, sector: SectorParams | None = None
) -> FemFunction:
    """Solve (z M - Mc - K) u = rhs, the Galerkin form of (z - L)^{-1}."""
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape != (space.ndof,):
        raise DomainError(f"rhs must have length {space.ndof}")
    if sector is not None and not bool(sector.contains(z)):
        raise DomainError(f"z={complex(z)!r} lies outside the resolvent sector")
    mats = assemble(space, coeffs)
    lu, piv = _factor(mats, complex(z))
    return FemFunction(space, _backsolve(lu, piv, mats.bandwidth, rhs))


class ResolventCache:
    """One banded LU factorization of z_n M - Mc - K per contour node.

    ``factorizations`` and ``back_substitutions`` count LAPACK work; a solve
    with m right-hand sides adds m back-substitutions.
    """

    def __init__(self, space: HpSpace1D, coeffs: Coefficients1D, contour: HyperbolicContour):
        self.space = space
        self.coeffs = coeffs
        self.contour = contour
        self.matrices = assemble(space, coeffs)
        self._lock = threading.Lock()
        self.factorizations = 0
        self.back_substitutions = 0
        factors = []
        for i, z in enumerate(contour.nodes):
            factors.append(_factor(self.matrices, complex(z), node_index=i - contour.n_q))
            self.factorizations += 1
        self._factors = tuple(factors)

    @property
    def nodes(self) -> np.ndarray:
        return self.contour.nodes

    def __len__(self) -> int:
        return len(self._factors)

    def solve(self, i: int, rhs) -> np.ndarray:
        """Back-substitute for array position ``i`` (0 .. 2 n_q).

        ``rhs`` may be a vector or an (ndof, m) block.
        """
        rhs = np.asarray(rhs, dtype=complex)
        lu, piv = self._factors[i]
        x = _backsolve(lu, piv, self.matrices.bandwidth, rhs)
        with self._lock:
            self.back_substitutions += 1 if rhs.ndim == 1 else rhs.shape[1]
        return x

    def backward_error(self, i: int, seed: int = 0) -> float:
        """Normwise backward error of the stored factors on a random probe."""
        rng = np.random.default_rng(seed)
        A = _system(self.matrices, complex(self.contour.nodes[i]))
        x = rng.standard_normal(self.space.ndof) + 1j * rng.standard_normal(self.space.ndof)
        b = A @ x
        lu, piv = self._factors[i]
        xh = _backsolve(lu, piv, self.matrices.bandwidth, b)
        r = A @ xh - b
        normA = sp.linalg.norm(A, np.inf)
        return float(np.linalg.norm(r, np.inf) / (normA * np.linalg.norm(xh, np.inf)))


def build_resolvent_cache(
    space: HpSpace1D,
    coeffs: Coefficients1D,
    contour: HyperbolicContour,
    sector: SectorParams | None = None,
) -> ResolventCache:
    from .contour import validate_sector

    if sector is not None and not validate_sector(contour, sector):
        raise DomainError("contour is not contained in the resolvent sector")
    return ResolventCache(space, coeffs, contour)


# ---------------------------------------------------------------------------
# initial condition


def h1_best_approximation(a: float, b: float, p: int, u0, du0=None, n_points: int | None = None):
    """H1(a, b) projection of u0 onto polynomials of degree p, no boundary conditions.

    Returns the coefficient vector in the local shape basis of the single
    element (a, b).  Without ``du0`` the term (u0', v') is computed by parts
    as u0 v' |_a^b - (u0, v'').
    """
    if n_points is None:
        n_points = 2 * p + 24
    xi, w = gauss_rule(n_points - 1)
    h = b - a
    x = a + 0.5 * h * (xi + 1.0)
    jac = 0.5 * h
    phi = shape_functions(p, xi)
    dphi = shape_functions(p, xi, 1) / jac
    G = (phi * (w * jac)) @ phi.T + (dphi * (w * jac)) @ dphi.T
    u = np.asarray(u0(x)) * np.ones_like(x)
    rhs = phi @ (w * jac * u)
    if du0 is not None:
        du = np.asarray(du0(x)) * np.ones_like(x)
        rhs = rhs + dphi @ (w * jac * du)
    else:
        ddphi = shape_functions(p, xi, 2) / jac**2
        ends = np.array([-1.0, 1.0])
        dphi_ends = shape_functions(p, ends, 1) / jac
        ua, ub = (np.asarray(u0(np.array([a, b]))) * np.ones(2))
        rhs = rhs + (ub * dphi_ends[:, 1] - ua * dphi_ends[:, 0]) - ddphi @ (w * jac * u)
    return np.linalg.solve(G, rhs)


def project_initial_condition(space: HpSpace1D, u0, du0=None) -> FemFunction:
    """H1 best approximation on the unrefined element followed by the boundary cutoff.

    The polynomial is represented exactly on the graded mesh; the cutoff then
    subtracts its endpoint values times the hats of the two outermost
    elements, which amounts to dropping the boundary vertex coefficients.
    """
    mesh = space.mesh
    a, b, p = mesh.a, mesh.b, space.p
    c = h1_best_approximation(a, b, p, u0, du0)

    def poly(x, derivative=0):
        xi = 2.0 * (np.asarray(x, dtype=float) - a) / (b - a) - 1.0
        vals = c @ shape_functions(p, np.ravel(xi), derivative)
        return (vals * (2.0 / (b - a)) ** derivative).reshape(np.shape(x))

    full = interpolate(space, poly, lambda x: poly(x, 1), keep_boundary=True)
    return FemFunction(space, full[1:-1].copy())


__all__ = [
    "Coefficients1D",
    "FemFunction",
    "GeometricMesh1D",
    "HpSpace1D",
    "ResolventCache",
    "SystemMatrices",
    "assemble",
    "build_mesh",
    "build_resolvent_cache",
    "build_space",
    "h1_best_approximation",
    "h1_distance",
    "interpolate",
    "l2_distance",
    "laplace_matrices",
    "load_matrix",
    "load_vector",
    "project_initial_condition",
    "prolong",
    "reference_mesh_nodes",
    "resolvent_solve",
    "shape_functions",
    "to_lapack_band",
    "zero_function",
]
