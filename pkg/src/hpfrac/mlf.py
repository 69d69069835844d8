"""Mittag-Leffler function e_{gamma,mu}(w) for complex w.

Three evaluation branches are combined:

* Taylor series, used while the largest series term stays moderate
  (``|w|**(1/gamma)`` small) so that cancellation is harmless.
* The algebraic large-|w| expansion ``-sum_k w**-k / Gamma(mu - gamma k)``,
  optimally truncated, with the exponential contribution added where it
  is present (``|Arg w| < gamma pi``).
* Inversion of the Laplace transform ``s**(gamma-mu) / (s**gamma - w)`` by the
  trapezoidal rule on a parabolic Hankel contour, with the pole residue added
  when the pole lies outside the contour.

Each branch reports an error estimate; the first one meeting the requested
relative tolerance wins.  ``ml_series`` sums the power series in arbitrary
precision and serves as the independent oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, RangeError

DEFAULT_TOL = 1e-12
TOL_RANGE = (1e-14, 1e-6)

_EPS = float(np.finfo(float).eps)

# Branch windows, in terms of rho = |w|**(1/gamma).  The largest Taylor term is
# roughly exp(rho); the smallest asymptotic term roughly exp(-rho).
TAYLOR_MAX_EXPONENT = 36.0
ASYMPTOTIC_MIN_EXPONENT = 4.0

# Parabolic contour s(u) = c (1 + iu)^2 for the Laplace inversion.
LAPLACE_STEP = 0.08
LAPLACE_SCALE = 1.0
LAPLACE_SCALE_MIN = 0.1
LAPLACE_DECAY = 45.0
LAPLACE_POLE_MARGIN = 0.5

ASYMPTOTIC_KMAX = 160
ASYMPTOTIC_SAFETY = 30.0
MAX_SERIES_DIGITS = 20000

_CHUNK = 2048


@dataclass(frozen=True)
class MLParams:
    """Parameters (gamma, mu) of e_{gamma,mu}."""

    gamma: float
    mu: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.mu)):
            raise DomainError("gamma and mu must be finite")
        if not 0.0 < self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma}")


@dataclass(frozen=True)
class SectorPoint:
    w: complex
    arg_bound: float

    def in_sector(self) -> bool:
        return abs(cmath.phase(self.w)) >= self.arg_bound


def _as_params(params) -> MLParams:
    if isinstance(params, MLParams):
        return params
    return MLParams(*params)


def _check_tol(tol):
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise DomainError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {tol:g}")


# ---------------------------------------------------------------------------
# Taylor branch


def _taylor_nterms(gamma, mu, rmax):
    # Walk past the peak of n log r - log Gamma(n gamma + mu) until terms are
    # below e^-50.
    if rmax == 0.0:
        return 2  # the last (zero) term doubles as the tail estimate
    logr = math.log(rmax)
    n = 0
    peak_passed = False
    prev = -math.inf
    while True:
        lt = n * logr - special.gammaln(n * gamma + mu)
        if lt < prev:
            peak_passed = True
        if peak_passed and lt < -50.0:
            return n + 1
        prev = lt
        n += 1
        if n > 20000:
            return n


def _taylor(gamma, mu, w):
    r = np.abs(w)
    nterms = _taylor_nterms(gamma, mu, float(r.max()))
    n = np.arange(nterms)
    arg = n * gamma + mu
    lg = special.gammaln(arg)
    sg = special.gammasgn(arg)
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = np.log(w)
        expo = n[None, :] * logw[:, None] - lg[None, :]
        expo[:, 0] = -lg[0]
        terms = sg[None, :] * np.exp(expo)
    terms[~np.isfinite(terms)] = 0.0
    terms[:, 0] = special.rgamma(mu)
    value = terms.sum(axis=1)
    # roundoff of each term grows with n |log w|
    logr = np.abs(np.log(np.where(r > 0, r, 1.0)))
    weight = 4.0 + n[None, :] * (logr[:, None] + math.pi)
    err = _EPS * (np.abs(terms) * weight).sum(axis=1)
    err += np.abs(terms[:, -1])
    return value, err


# ---------------------------------------------------------------------------
# Asymptotic branch


def _exponential_part(gamma, mu, w):
    """(1/gamma) w^((1-mu)/gamma) exp(w^(1/gamma)) where |Arg w| < gamma pi, else 0."""
    theta = np.angle(w)
    active = (np.abs(theta) < gamma * math.pi) & (w != 0)
    out = np.zeros(w.shape, dtype=complex)
    if np.any(active):
        lw = np.log(w[active])
        expo = (1.0 - mu) / gamma * lw + np.exp(lw / gamma)
        with np.errstate(over="ignore"):
            out[active] = np.exp(expo) / gamma
    return out


def _asymptotic(gamma, mu, w, kmax=ASYMPTOTIC_KMAX):
    k = np.arange(1, kmax + 1)
    arg = mu - gamma * k
    lg = special.gammaln(arg)
    sg = special.gammasgn(arg)
    pole = ~np.isfinite(lg)
    lg = np.where(pole, 0.0, lg)
    sg = np.where(pole, 0.0, sg)
    logw = np.log(w)
    with np.errstate(over="ignore", under="ignore"):
        terms = -sg[None, :] * np.exp(-k[None, :] * logw[:, None] - lg[None, :])
    mags = np.abs(terms)
    if kmax > 1:
        paired = np.maximum(mags[:, :-1], mags[:, 1:])
    else:
        paired = mags
    # optimal truncation: stop where the (zero-skipping) term size is minimal
    stop = np.argmin(paired, axis=1)
    keep = np.arange(kmax)[None, :] < stop[:, None]
    value = np.where(keep, terms, 0.0).sum(axis=1)
    # observed optimal-truncation errors run up to ~10x the smallest term
    err = ASYMPTOTIC_SAFETY * paired[np.arange(len(w)), stop]
    err = err + _EPS * np.where(keep, mags, 0.0).sum(axis=1)
    value = value + _exponential_part(gamma, mu, w)
    return value, err


# ---------------------------------------------------------------------------
# Laplace inversion branch


def _laplace(gamma, mu, w):
    r = np.abs(w)
    theta = np.angle(w)
    has_pole = (np.abs(theta) < gamma * math.pi) & (r > 0)
    # Pole s* = w^(1/gamma); on the parabola c(1+iu)^2 its preimage has
    # Im u = 1 - Re sqrt(s*)/sqrt(c).
    reroot = np.where(has_pole, r ** (0.5 / gamma) * np.cos(theta / (2.0 * gamma)), 0.0)
    m = LAPLACE_POLE_MARGIN
    sq = math.sqrt(LAPLACE_SCALE)
    scale = np.full(w.shape, LAPLACE_SCALE)
    crowded = has_pole & (reroot < (1 + m) * sq) & (reroot > (1 - m) * sq)
    scale[crowded] = np.maximum((reroot[crowded] / (1 + m)) ** 2, LAPLACE_SCALE_MIN)
    outside = has_pole & (reroot > np.sqrt(scale))

    h = LAPLACE_STEP
    umax = np.sqrt(LAPLACE_DECAY / scale.min() + 1.0)
    nhalf = int(math.ceil(umax / h))
    nhalf += nhalf % 2
    j = np.arange(-nhalf, nhalf + 1)
    u = h * j
    c = scale[:, None]
    onepiu = 1.0 + 1j * u[None, :]
    s = c * onepiu**2
    ds = 2j * c * onepiu
    with np.errstate(under="ignore"):
        f = np.exp(s) * s ** (gamma - mu) / (s**gamma - w[:, None]) * ds
    # truncate each row at its own decay length
    f[np.abs(u)[None, :] > np.sqrt(LAPLACE_DECAY / c + 1.0)] = 0.0
    fine = h / (2j * math.pi) * f.sum(axis=1)
    coarse = 2 * h / (2j * math.pi) * f[:, (j % 2) == 0].sum(axis=1)

    residue = np.zeros(w.shape, dtype=complex)
    if np.any(outside):
        lw = np.log(w[outside]) / gamma
        residue[outside] = np.exp(np.exp(lw) + (1.0 - mu) * lw) / gamma
    value = fine + residue
    scale_ref = np.maximum(np.abs(value), 1e-300)
    err = np.abs(fine - coarse) ** 2 / scale_ref
    err += 2 * _EPS * h / (2 * math.pi) * np.abs(f).sum(axis=1)
    return value, err


# ---------------------------------------------------------------------------
# public API


def ml_eval_array(params, w, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorized e_{gamma,mu}(w); returns a complex array shaped like ``w``."""
    p = _as_params(params)
    _check_tol(tol)
    w = np.asarray(w, dtype=complex)
    shape = w.shape
    flat = w.ravel()
    if not np.all(np.isfinite(flat)):
        raise DomainError("Mittag-Leffler argument must be finite")
    if p.gamma == 1.0 and p.mu == 1.0:
        with np.errstate(over="ignore"):
            out = np.exp(flat)
        return out.reshape(shape)
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        out[sl] = _eval_chunk(p, flat[sl], tol)
    return out.reshape(shape)


def _eval_chunk(p: MLParams, w, tol):
    g, mu = p.gamma, p.mu
    n = w.size
    value = np.zeros(n, dtype=complex)
    relerr = np.full(n, np.inf)
    done = np.zeros(n, dtype=bool)
    rho = np.abs(w) ** (1.0 / g)

    def attempt(mask, branch):
        idx = np.flatnonzero(mask & ~done)
        if idx.size == 0:
            return
        v, e = branch(g, mu, w[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            re = e / np.abs(v)
        re = np.where(np.isfinite(re), re, np.inf)
        better = re < relerr[idx]
        value[idx[better]] = v[better]
        relerr[idx[better]] = re[better]
        done[idx[re <= tol]] = True

    attempt(rho <= TAYLOR_MAX_EXPONENT, _taylor)
    attempt(rho >= ASYMPTOTIC_MIN_EXPONENT, _asymptotic)
    attempt(np.ones(n, dtype=bool), _laplace)

    if not np.all(done):
        worst = int(np.argmax(np.where(done, -np.inf, relerr)))
        raise AccuracyError(
            f"e_{{{g},{mu}}}({w[worst]}) reached relative error {relerr[worst]:.3g} > tol={tol:.1g}",
            estimate=complex(value[worst]),
            error_bound=float(relerr[worst] * abs(value[worst])),
        )
    if not np.all(np.isfinite(value)):
        raise RangeError("Mittag-Leffler value overflows (argument in the growth sector)")
    return value


def ml_eval(params, w: complex, tol: float = DEFAULT_TOL) -> complex:
    """e_{gamma,mu}(w) to relative accuracy ``tol``.

    Accuracy is guaranteed for ``|Arg w| > gamma*pi/2``; elsewhere the value is
    best effort (it grows exponentially there).
    """
    return complex(ml_eval_array(params, np.array([w], dtype=complex), tol)[0])


def ml_asymptotic(params, w: complex, kmax: int = ASYMPTOTIC_KMAX) -> tuple[complex, float]:
    """Optimally truncated large-|w| expansion, with its error estimate.

    Returns ``(value, error_bound)`` where ``error_bound`` is the magnitude of
    the first omitted term.
    """
    p = _as_params(params)
    w = complex(w)
    if not cmath.isfinite(w) or w == 0:
        raise DomainError("asymptotic expansion needs a finite nonzero argument")
    if abs(cmath.phase(w)) <= p.gamma * math.pi / 2:
        raise DomainError(f"|Arg w| <= gamma*pi/2: {w} lies in the exponential growth sector")
    if kmax < 1:
        raise DomainError("kmax must be >= 1")
    v, e = _asymptotic(p.gamma, p.mu, np.array([w]), kmax)
    return complex(v[0]), float(e[0])


def ml_kernel(params, t, z, beta: float, tol: float = DEFAULT_TOL):
    """e_{gamma,mu}(-t^gamma z^beta) with the principal branch of z^beta.

    Broadcasts over ``t`` and ``z``; returns a Python complex for scalar input.
    """
    p = _as_params(params)
    t_arr = np.asarray(t, dtype=float)
    z_arr = np.asarray(z, dtype=complex)
    if np.any(z_arr == 0):
        raise DomainError("ml_kernel needs z != 0")
    if np.any(t_arr < 0):
        raise DomainError("ml_kernel needs t >= 0")
    w = -(t_arr**p.gamma) * z_arr**beta
    out = ml_eval_array(p, w, tol)
    if out.ndim == 0:
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# extended-precision oracle


def _series_digits(gamma, mu, r, nmax):
    if r == 0.0:
        return 30
    n = np.arange(nmax + 1)
    lt = n * math.log(r) - special.gammaln(n * gamma + mu)
    peak = float(np.max(lt[np.isfinite(lt)])) if np.any(np.isfinite(lt)) else 0.0
    return int(30 + max(0.0, peak) / math.log(10.0))


_RGAMMA_CACHE: dict[tuple[float, float], tuple[int, list]] = {}


def _rgamma_table(gamma, mu, nmax, dps):
    # one growing table per (gamma, mu); higher precision serves lower requests
    dps_have, table = _RGAMMA_CACHE.get((gamma, mu), (0, []))
    if dps_have < dps:
        dps_have, table = max(dps, dps_have + 50), []
    if len(table) <= nmax:
        with mpmath.workdps(dps_have):
            g = mpmath.mpf(gamma)
            m = mpmath.mpf(mu)
            table = table + [mpmath.rgamma(k * g + m) for k in range(len(table), nmax + 1)]
    _RGAMMA_CACHE[(gamma, mu)] = (dps_have, table)
    return table


def series_nterms(params, r: float, digits: int = 20) -> int:
    """Number of series terms after which terms fall below 10**-digits."""
    p = _as_params(params)
    if r == 0:
        return 1
    logr = math.log(r)
    n = 1
    while True:
        lt = n * logr - special.gammaln(n * p.gamma + p.mu)
        if n * p.gamma + p.mu > 1 and lt < -digits * math.log(10.0) and lt < (n - 1) * logr - special.gammaln((n - 1) * p.gamma + p.mu):
            return n
        n += 1


def ml_series(params, w: complex, nmax: int, dps: int | None = None) -> complex:
    """Partial sum of the power series up to ``nmax`` in extended precision.

    The working precision is raised to cover the cancellation between the
    largest term and the result, so the returned double is correctly rounded
    up to truncation.
    """
    p = _as_params(params)
    if nmax < 1:
        raise DomainError("nmax must be >= 1")
    w = complex(w)
    if not cmath.isfinite(w):
        raise DomainError("series argument must be finite")
    if dps is None:
        dps = _series_digits(p.gamma, p.mu, abs(w), nmax)
    if dps > MAX_SERIES_DIGITS:
        raise RangeError(f"series needs {dps} digits (w^n too large); beyond {MAX_SERIES_DIGITS}")
    table = _rgamma_table(p.gamma, p.mu, nmax, dps)
    with mpmath.workdps(dps):
        wm = mpmath.mpc(w.real, w.imag)
        power = mpmath.mpc(1)
        total = mpmath.mpc(0)
        for k in range(nmax + 1):
            total += power * table[k]
            power *= wm
        return complex(total)


def ml_reference(params, w: complex) -> complex:
    """Converged extended-precision series value (oracle for tests)."""
    p = _as_params(params)
    n = series_nterms(p, abs(complex(w)), digits=25)
    return ml_series(p, w, n)
