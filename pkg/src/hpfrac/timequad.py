"""Composite geometric Gauss quadrature on (0, T) for integrands singular at 0."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, RangeError


@lru_cache(maxsize=None)
def gauss_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule with ``degree + 1`` points on (-1, 1).

    Exact for polynomials up to degree ``2*degree + 1``.  The returned arrays
    are shared and read-only.
    """
    if degree < 0:
        raise DomainError("degree must be >= 0")
    x, w = np.polynomial.legendre.leggauss(degree + 1)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class CompositeGaussRule:
    T: float
    sigma: float
    layers: int
    p: int
    # (left, right, degree) per element, ordered from the singular end
    elements: tuple[tuple[float, float, int], ...]
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.nodes.size


def build_hp_rule(T: float, sigma: float, layers: int, p: int) -> CompositeGaussRule:
    """Geometric partition of (0, T) with degrees p-L, ..., p toward T.

    K_0 = (0, T sigma^L) carries degree p - L; K_l = (T sigma^(L-l+1), T sigma^(L-l))
    carries degree p - L + l.
    """
    if not T > 0:
        raise DomainError("T must be positive")
    if not 0.0 < sigma < 1.0:
        raise DomainError("sigma must lie in (0, 1)")
    if layers < 0:
        raise DomainError("layers must be >= 0")
    if p < layers:
        raise DomainError(f"degree p={p} must be >= layers={layers}")
    if T * sigma**layers < 1e-300:
        raise RangeError(f"T*sigma^{layers} underflows; use fewer layers")

    breaks = [0.0] + [T * sigma ** (layers - l) for l in range(layers + 1)]
    elements = []
    nodes, weights = [], []
    for l in range(layers + 1):
        left, right = breaks[l], breaks[l + 1]
        deg = p - layers + l
        x, w = gauss_rule(deg)
        half = 0.5 * (right - left)
        nodes.append(left + half * (x + 1.0))
        weights.append(half * w)
        elements.append((left, right, deg))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return CompositeGaussRule(float(T), float(sigma), int(layers), int(p), tuple(elements), nodes, weights)


def hp_integrate(rule: CompositeGaussRule, g, vectorized: bool = False):
    """Apply the rule to ``g``; ``g`` may return scalars or arrays.

    With ``vectorized=True`` ``g`` is called once on the node array and must
    return values along the first axis.
    """
    if vectorized:
        vals = np.asarray(g(rule.nodes))
        bad = ~np.isfinite(vals.reshape(rule.n_nodes, -1)).all(axis=1)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise DomainError(f"integrand is not finite at tau={float(rule.nodes[i])!r}")
        return np.tensordot(rule.weights, vals, axes=(0, 0))

    total = None
    for tau, wt in zip(rule.nodes, rule.weights):
        val = g(float(tau))
        if not np.all(np.isfinite(val)):
            raise DomainError(f"integrand is not finite at tau={float(tau)!r}")
        total = wt * val if total is None else total + wt * val
    return total


def two_sided_rule(T: float, layers: int, degree: int, sigma: float = 0.125):
    """Nodes and weights on (0, T) graded toward both endpoints.

    Used for convolutions whose integrand may be singular at either end.
    """
    half = build_hp_rule(0.5 * T, sigma, layers, degree)
    nodes = np.concatenate([half.nodes, T - half.nodes[::-1]])
    weights = np.concatenate([half.weights, half.weights[::-1]])
    return nodes, weights


__all__ = [
    "CompositeGaussRule",
    "build_hp_rule",
    "gauss_rule",
    "hp_integrate",
    "two_sided_rule",
]
