"""Named problem data: initial conditions, sources and known solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import DomainError
from .hpfem1d import Coefficients1D
from .mlf import MLParams, ml_kernel
from .solver import FracProblem


@dataclass(frozen=True)
class PresetInfo:
    name: str
    gamma: float
    beta: float
    compatible: bool  # True when a closed-form solution is available
    description: str


PRESETS = {
    "example71-1d": PresetInfo(
        "example71-1d", 0.6, 0.75, True,
        "u0 = sin(2 pi x), f manufactured so that u = e(-t^g lam2^b) phi2 + t^3 phi1",
    ),
    "example71-1d-homogeneous": PresetInfo(
        "example71-1d-homogeneous", 0.6, 0.75, True, "u0 = sin(2 pi x), f = 0"
    ),
    "example71-1d-inhomogeneous": PresetInfo(
        "example71-1d-inhomogeneous", 0.6, 0.75, True, "u0 = 0, manufactured f with u = t^3 phi1"
    ),
    "example72-1d": PresetInfo(
        "example72-1d", math.sqrt(2) / 2, math.sqrt(3) / 3, False,
        "u0 = 1 (violates the boundary conditions), f = sin(t)",
    ),
}

COEFFICIENT_PRESETS = {
    # A(x) = 1 + x^2/2 >= 1, c(x) = 1 + sin(pi x)/2 >= 1/2 on (0, 1)
    "smooth-variable": lambda: Coefficients1D(
        A=lambda x: 1.0 + 0.5 * np.asarray(x) ** 2,
        c=lambda x: 1.0 + 0.5 * np.sin(np.pi * np.asarray(x)),
        a_min=1.0,
    ),
}


def coefficient_preset(name: str) -> Coefficients1D:
    try:
        return COEFFICIENT_PRESETS[name]()
    except KeyError:
        raise DomainError(f"unknown coefficient preset {name!r}") from None


def _mode(a, b, j):
    ell = b - a
    return lambda x: np.sin(j * np.pi * (np.asarray(x) - a) / ell)


def make_problem(
    name: str,
    gamma: float | None = None,
    beta: float | None = None,
    T: float = 1.0,
    a: float = 0.0,
    b: float = 1.0,
    coeffs: Coefficients1D | None = None,
) -> tuple[FracProblem, Callable | None]:
    """Problem for a named preset and its exact solution ``u(t, x)`` if known."""
    if name not in PRESETS:
        raise DomainError(f"unknown data preset {name!r}; choose from {sorted(PRESETS)}")
    info = PRESETS[name]
    g = info.gamma if gamma is None else gamma
    be = info.beta if beta is None else beta
    coeffs = Coefficients1D.constant() if coeffs is None else coeffs

    if name == "example72-1d":
        pb = FracProblem(
            g, be, T, a, b, coeffs,
            u0=lambda x: np.ones(np.shape(x)),
            f=lambda t, x: math.sin(t) * np.ones(np.shape(x)),
            du0=lambda x: np.zeros(np.shape(x)),
        )
        return pb, None

    if not coeffs.is_constant:
        raise DomainError(f"preset {name!r} needs constant coefficients")
    ell = b - a
    lam1 = coeffs.A0 * (math.pi / ell) ** 2 + coeffs.c0
    lam2 = coeffs.A0 * (2 * math.pi / ell) ** 2 + coeffs.c0
    phi1, phi2 = _mode(a, b, 1), _mode(a, b, 2)
    dphi2 = lambda x: (2 * math.pi / ell) * np.cos(2 * np.pi * (np.asarray(x) - a) / ell)
    c_src = gamma_fn(4.0) / gamma_fn(4.0 - g)

    def f(t, x):
        return (c_src * t ** (3.0 - g) + t**3 * lam1**be) * phi1(x)

    def hom(t, x):
        if t == 0:
            return phi2(x)
        return ml_kernel(MLParams(g, 1.0), t, lam2, be).real * phi2(x)

    def inh(t, x):
        return t**3 * phi1(x)

    if name == "example71-1d":
        return FracProblem(g, be, T, a, b, coeffs, u0=phi2, f=f, du0=dphi2), lambda t, x: hom(t, x) + inh(t, x)
    if name == "example71-1d-homogeneous":
        return FracProblem(g, be, T, a, b, coeffs, u0=phi2, du0=dphi2), hom
    return FracProblem(g, be, T, a, b, coeffs, f=f), inh


__all__ = ["COEFFICIENT_PRESETS", "PRESETS", "PresetInfo", "coefficient_preset", "make_problem"]
