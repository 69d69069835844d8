import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfc, gamma as gamma_fn, wofz

from hpfrac.errors import AccuracyError, DomainError, RangeError
from hpfrac.mlf import (
    MLParams,
    SectorPoint,
    ml_asymptotic,
    ml_eval,
    ml_eval_array,
    ml_kernel,
    ml_reference,
    ml_series,
)


def e_half(w):
    """Closed form e_{1/2,1}(w) = exp(w^2) erfc(-w) via the Faddeeva function."""
    return wofz(-1j * np.asarray(w, dtype=complex))


class TestExamples:
    def test_exponential_at_one(self):
        assert ml_eval(MLParams(1.0, 1.0), 1.0) == pytest.approx(math.e, rel=1e-15)

    def test_zero_argument(self):
        assert ml_eval(MLParams(0.6, 1.0), 0.0) == 1.0

    def test_half_at_minus_one(self):
        val = ml_eval(MLParams(0.5, 1.0), -1.0)
        assert val.real == pytest.approx(math.e * erfc(1.0), rel=1e-13)
        assert abs(val.imag) < 1e-15

    def test_series_trivial(self):
        assert ml_series(MLParams(1, 1), 0.0, 10) == 1.0
        assert ml_series(MLParams(1, 1), 2.0, 60) == pytest.approx(math.exp(2.0), rel=1e-15)

    def test_series_cross_check(self):
        ref = ml_series(MLParams(0.75, 0.75), -3.0, 120)
        assert ml_eval(MLParams(0.75, 0.75), -3.0) == pytest.approx(ref, rel=1e-12)

    def test_asymptotic_leading_term(self):
        val, err = ml_asymptotic(MLParams(0.5, 1.0), -1e6)
        assert val.real == pytest.approx(1.0 / (1e6 * math.sqrt(math.pi)), rel=1e-6)
        assert err < 1e-15
        assert val == pytest.approx(complex(e_half(-1e6)), rel=1e-12)

    def test_asymptotic_exponential_case(self):
        val, _ = ml_asymptotic(MLParams(1.0, 1.0), -50.0)
        assert abs(val) < 1e-20

    def test_kernel_heat_mode(self):
        val = ml_kernel(MLParams(1, 1), 1.0, 4 * math.pi**2, 1.0)
        assert val.real == pytest.approx(math.exp(-4 * math.pi**2), rel=1e-12)
        assert val.real == pytest.approx(7.157e-18, rel=1e-3)

    def test_kernel_zero_time(self):
        assert ml_kernel(MLParams(0.6, 1), 0.0, 3.0 + 1j, 0.3) == 1.0

    def test_kernel_example_mode(self):
        # scalar factor of the two-mode manufactured solution at t = 1
        lam = 4 * math.pi**2
        got = ml_kernel(MLParams(0.6, 1), 1.0, lam, 0.75)
        ref = ml_reference(MLParams(0.6, 1), -(lam**0.75))
        assert got == pytest.approx(ref, rel=1e-12)
        assert got.real == pytest.approx(0.02926638005, rel=1e-9)


class TestErrors:
    def test_bad_gamma(self):
        with pytest.raises(DomainError):
            MLParams(0.0, 1.0)
        with pytest.raises(DomainError):
            MLParams(1.5, 1.0)

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            ml_eval(MLParams(0.5, 1.0), -1.0, tol=1e-3)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            ml_eval(MLParams(0.5, 1.0), complex(float("nan"), 0))

    def test_asymptotic_growth_sector(self):
        with pytest.raises(DomainError):
            ml_asymptotic(MLParams(0.6, 1.0), 100.0)

    def test_kernel_needs_nonzero_z(self):
        with pytest.raises(DomainError):
            ml_kernel(MLParams(0.6, 1.0), 1.0, 0.0, 0.5)

    def test_series_overflow(self):
        with pytest.raises(RangeError):
            ml_series(MLParams(0.3, 1.0), -1e6, 6000)

    def test_accuracy_error_payload(self):
        err = AccuracyError("x", estimate=1.0, error_bound=1e-3)
        assert err.estimate == 1.0 and err.error_bound == 1e-3
        assert isinstance(err, ArithmeticError)

    def test_sector_point(self):
        assert SectorPoint(-1 + 0.1j, 0.9 * math.pi).in_sector()
        assert not SectorPoint(1j, 0.9 * math.pi).in_sector()


class TestClosedForms:
    @pytest.mark.parametrize("r", [1e-3, 0.5, 3.0, 30.0, 1e3, 1e5, 1e8])
    @pytest.mark.parametrize("theta", [0.55, 0.75, 0.9, 1.0])
    def test_half_order_faddeeva(self, r, theta):
        w = r * cmath.exp(1j * math.pi * theta)
        got = ml_eval(MLParams(0.5, 1.0), w)
        ref = complex(e_half(w))
        assert abs(got - ref) <= 1e-12 * abs(ref)

    @pytest.mark.parametrize("w", [-0.3, -4.0 + 1j, -40.0 - 5j, -1e4 + 2e3j])
    def test_half_half_recurrence(self, w):
        # e_{1/2,1/2}(w) = 1/sqrt(pi) + w e_{1/2,1}(w)
        got = ml_eval(MLParams(0.5, 0.5), w)
        ref = 1 / math.sqrt(math.pi) + w * complex(e_half(w))
        # the closed form cancels down from O(1) for large |w|
        assert abs(got - ref) <= 1e-11 * abs(ref) + 1e-15

    @pytest.mark.parametrize("w", [-2.0, -10 + 3j, 1.5, 0.25j])
    def test_mu_two_exponential(self, w):
        got = ml_eval(MLParams(1.0, 2.0), w)
        assert got == pytest.approx((cmath.exp(w) - 1) / w, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-700.0, 0.0),
    st.floats(-200.0, 200.0),
)
def test_exponential_identity(x, y):
    w = complex(x, y)
    got = ml_eval(MLParams(1.0, 1.0), w)
    assert abs(got - cmath.exp(w)) <= 1e-12 * (1 + abs(cmath.exp(w)))


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([0.5, 0.6, 0.75, math.sqrt(2) / 2, 0.9]),
    st.floats(0.01, 200.0),
    st.floats(0.75, 1.0),
)
def test_recurrence_in_mu(gamma, r, theta):
    # e_{g,1}(w) = 1 + w e_{g,1+g}(w) links two independent evaluations
    w = r * cmath.exp(1j * math.pi * theta)
    lhs = ml_eval(MLParams(gamma, 1.0), w)
    rhs = 1.0 + w * ml_eval(MLParams(gamma, 1.0 + gamma), w)
    assert abs(lhs - rhs) <= 5e-11 * max(abs(lhs), 1.0 / r)


@pytest.mark.parametrize("gamma,mu", [(0.6, 0.6), (0.75, 1.0), (0.6, 1.0)])
@pytest.mark.parametrize("r", [30.0, 42.0, 50.0])
def test_branch_overlap_against_series(gamma, mu, r):
    w = r * cmath.exp(0.8j * math.pi)
    ref = ml_reference(MLParams(gamma, mu), w)
    assert abs(ml_eval(MLParams(gamma, mu), w) - ref) <= 1e-12 * abs(ref)


def test_array_matches_scalar():
    w = np.array([-1.0, -20 + 5j, -3e3 - 1e3j, 0.0])
    arr = ml_eval_array(MLParams(0.7, 0.7), w)
    for wi, ai in zip(w, arr):
        assert ai == ml_eval(MLParams(0.7, 0.7), wi)


@pytest.mark.parametrize("gamma,mu", [(0.5, 0.5), (0.6, 1.0), (0.75, 0.75), (math.sqrt(2) / 2, 1.0)])
def test_sector_bound(gamma, mu):
    r = np.geomspace(1e-3, 1e8, 120)
    th = np.linspace(0.75 * math.pi, math.pi, 9)
    w = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    vals = ml_eval_array(MLParams(gamma, mu), w)
    C = float(np.max(np.abs(vals) * (1 + np.abs(w))))
    assert C <= 10.0


@pytest.mark.parametrize("lam", [1.0, 4 * math.pi**2, 1e4])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_time_derivative_identity(lam, t):
    gamma, beta, h = 0.6, 0.75, 1e-5
    p1 = MLParams(gamma, 1.0)
    fd = (ml_kernel(p1, t + h, lam, beta) - ml_kernel(p1, t - h, lam, beta)) / (2 * h)
    exact = -(lam**beta) * t ** (gamma - 1) * ml_kernel(MLParams(gamma, gamma), t, lam, beta)
    assert abs(fd - exact) <= 1e-6 * abs(exact)


def test_reference_matches_mpmath_direct():
    # independent sum with mpmath's own gamma, no shared table
    import mpmath

    with mpmath.workdps(40):
        w = mpmath.mpf(-2.5)
        ref = mpmath.nsum(lambda n: w**n / mpmath.gamma(0.6 * n + 1), [0, mpmath.inf])
    assert ml_reference(MLParams(0.6, 1.0), -2.5) == pytest.approx(complex(ref), rel=1e-15)
    assert gamma_fn(1.0) == 1.0
