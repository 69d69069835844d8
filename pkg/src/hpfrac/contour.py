"""Hyperbolic integration contour, sinc quadrature and the resolvent sector.

The contour z(y) = b (cosh y + i sinh y) opens to the right and wraps the
spectrum of the elliptic operator.  Sampling it at y_n = n k, |n| <= n_q,
gives the nodes of the sinc rule used for every operator function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError
from .mlf import MLParams, ml_kernel

#: Half-angle of the excluded cone around the positive real axis.
CONE_ANGLE = math.pi / 8
#: Default strip half-width used in the step-size rule.
DEFAULT_H = math.pi / 5


@dataclass(frozen=True)
class HyperbolicContour:
    """Sinc nodes z(y_n) and derivatives z'(y_n), ordered n = -n_q, ..., n_q."""

    b: float
    k: float
    n_q: int
    y: np.ndarray = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    dweights: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return 2 * self.n_q + 1

    def index(self, n: int) -> int:
        """Array position of the node with signed index ``n``."""
        if abs(n) > self.n_q:
            raise IndexError(f"node index {n} outside [-{self.n_q}, {self.n_q}]")
        return n + self.n_q


def z_of_y(b: float, y):
    """Contour parametrization, valid for complex ``y``."""
    y = np.asarray(y)
    return b * (np.cosh(y) + 1j * np.sinh(y))


def dz_of_y(b: float, y):
    y = np.asarray(y)
    return b * (np.sinh(y) + 1j * np.cosh(y))


def build_contour(b: float, n_q: int, k: float) -> HyperbolicContour:
    if not b > 0:
        raise DomainError("contour scale b must be positive")
    if not k > 0:
        raise DomainError("step k must be positive")
    if int(n_q) != n_q or n_q < 1:
        raise DomainError("n_q must be an integer >= 1")
    n_q = int(n_q)
    # |z(y)| <= b e^{|y|}; check in log form so the test itself cannot overflow
    if math.log(b) + n_q * k > math.log(np.finfo(float).max) - 1.0:
        raise RangeError(f"b*exp(n_q*k) = exp({math.log(b) + n_q * k:.1f}) overflows")
    y = k * np.arange(-n_q, n_q + 1, dtype=float)
    nodes = z_of_y(b, y)
    dweights = dz_of_y(b, y)
    for arr in (y, nodes, dweights):
        arr.setflags(write=False)
    return HyperbolicContour(float(b), float(k), n_q, y, nodes, dweights)


def default_step(beta: float, n_q: int, H: float = DEFAULT_H) -> float:
    """Sinc step k = sqrt(pi H / (beta n_q)) balancing truncation and discretization."""
    if not 0 < beta <= 1:
        raise DomainError("beta must lie in (0, 1]")
    if n_q < 1:
        raise DomainError("n_q must be >= 1")
    if not 0 < H < math.pi / 4:
        raise DomainError("H must lie in (0, pi/4)")
    return math.sqrt(math.pi * H / (beta * n_q))


@dataclass(frozen=True)
class SectorParams:
    """Parameters of the resolvent sector.

    The sector is the complex plane minus the cone ``z0 + {|Arg z| <= pi/8}``
    and minus the ball of radius ``eps0`` around the origin.
    """

    z0: float
    eps0: float
    poincare_const: float
    a_min: float

    def __post_init__(self):
        if not (self.poincare_const > 0 and self.a_min > 0):
            raise DomainError("poincare_const and a_min must be positive")
        bound = min(self.a_min / (2.0 * self.poincare_const), 1.0) ** 2
        if not 0 < self.eps0 < self.z0 <= bound * (1 + 1e-14):
            raise DomainError(
                f"need 0 < eps0 < z0 <= {bound!r}; got eps0={self.eps0!r}, z0={self.z0!r}"
            )

    @classmethod
    def for_interval(cls, a: float, b: float, a_min: float, eps_ratio: float = 0.1) -> "SectorParams":
        """Largest admissible z0 on (a, b), with eps0 = eps_ratio * z0."""
        if not b > a:
            raise DomainError("need a < b")
        cp = (b - a) / math.pi
        z0 = min(a_min / (2.0 * cp), 1.0) ** 2
        return cls(z0=z0, eps0=eps_ratio * z0, poincare_const=cp, a_min=a_min)

    @property
    def default_b(self) -> float:
        return 0.5 * (self.eps0 + self.z0)

    def contains(self, z) -> np.ndarray:
        """Pointwise membership test (boundaries count as excluded)."""
        z = np.asarray(z, dtype=complex)
        shifted = z - self.z0
        in_cone = (shifted.real >= 0) & (np.abs(np.angle(shifted)) <= CONE_ANGLE)
        in_ball = np.abs(z) <= self.eps0
        return ~(in_cone | in_ball)


def default_b(sector: SectorParams) -> float:
    return sector.default_b


def validate_sector(c: HyperbolicContour, s: SectorParams) -> bool:
    """True iff eps0 < b < z0 and every node lies in the sector."""
    if not s.eps0 < c.b < s.z0:
        return False
    return bool(np.all(s.contains(c.nodes)))


def g_lambda(lam: float, y, t: float, gamma: float, beta: float, b: float, tol: float = 1e-12):
    """Scalar sinc integrand for one eigenvalue ``lam``.

    Returns (1/(2 pi i)) e_{gamma,1}(-t^gamma z^beta) z'(y) / (z(y) - lam).
    With this orientation the sinc sum approximates -e_{gamma,1}(-t^gamma lam^beta).
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    y_arr = np.asarray(y, dtype=complex)
    if np.any(np.abs(y_arr.imag) >= math.pi / 4):
        raise DomainError("|Im y| must be < pi/4")
    z = z_of_y(b, y_arr)
    dz = dz_of_y(b, y_arr)
    denom = z - lam
    if np.any(np.abs(denom) <= 4 * np.finfo(float).eps * lam):
        raise DomainError("z(y) hits the pole at lambda")
    if t == 0:
        e = np.ones_like(z)
    else:
        e = ml_kernel(MLParams(gamma, 1.0), t, z, beta, tol=tol)
    out = e * dz / denom / (2j * math.pi)
    return out if out.ndim else complex(out)


def sinc_integrate(f, k: float, n_q: int, vectorized: bool = False) -> complex:
    """Truncated sinc rule k * sum_{|n| <= n_q} f(n k)."""
    if not k > 0 or n_q < 0:
        raise DomainError("need k > 0 and n_q >= 0")
    y = k * np.arange(-n_q, n_q + 1, dtype=float)
    if vectorized:
        vals = np.asarray(f(y))
    else:
        vals = np.array([f(float(yi)) for yi in y])
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"non-finite integrand at y={float(y[i])!r}")
    return complex(k * math.fsum(vals.real) + 1j * k * math.fsum(np.imag(vals)))


__all__ = [
    "CONE_ANGLE",
    "DEFAULT_H",
    "HyperbolicContour",
    "SectorParams",
    "build_contour",
    "default_b",
    "default_step",
    "dz_of_y",
    "g_lambda",
    "sinc_integrate",
    "validate_sector",
    "z_of_y",
]
