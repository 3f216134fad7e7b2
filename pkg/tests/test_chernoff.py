import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize_scalar

from primedigits import chernoff
from primedigits.chernoff import (
    RateFunction,
    explicit_bound,
    explicit_t,
    lemma_bound,
    log_mgf,
    log_mgf_derivative,
    mgf_closed,
    mgf_direct,
    optimize_rate,
    rate,
    rate_derivative,
    refined_bound,
    series_coefficients,
)
from primedigits.digits import build_distribution, tail_proportion
from primedigits.errors import DomainError

mpmath.mp.dps = 50


def mp_log_mgf(q, t):
    t = mpmath.mpf(t)
    s = sum(mpmath.exp(t * (mpmath.mpf(2 * j) / (q - 1) - 1)) for j in range(q)) / q
    return mpmath.log(s)


def binary_rate_star(gamma):
    # sup_t (gamma t - log cosh t) = KL(Bernoulli(a) || Bernoulli(1/2)), a = (1+gamma)/2
    a = (1 + gamma) / 2
    return a * math.log(2 * a) + (1 - a) * math.log(2 * (1 - a))


def test_mgf_examples():
    for q in range(2, 11):
        assert mgf_direct(q, 0) == 1
        assert mgf_closed(q, 0) == 1
    assert mgf_direct(2, 1) == pytest.approx(1.5430806348, abs=1e-10)
    assert mgf_closed(2, 1) == pytest.approx(math.cosh(1), rel=1e-15)
    assert mgf_closed(3, 0.5) == pytest.approx(mgf_direct(3, 0.5), rel=1e-14)


@given(st.integers(2, 10), st.floats(-50, 50))
def test_mgf_even(q, t):
    assert mgf_direct(q, t) == pytest.approx(mgf_direct(q, -t), rel=1e-14)


def test_mgf_overflow():
    with pytest.raises(OverflowError):
        mgf_direct(2, 1e4)
    with pytest.raises(OverflowError):
        mgf_closed(5, -1e4)


def test_closed_form_grid():
    worst = 0.0
    for q in range(2, 11):
        for t in np.linspace(-5, 5, 1000).tolist():
            d = mgf_direct(q, t)
            worst = max(worst, abs(mgf_closed(q, t) - d) / d)
    assert worst < 1e-12


def test_series_coefficients_binary():
    c2, c4 = series_coefficients(2)
    assert c2 == 0.5
    assert c4 == pytest.approx(-1 / 12, rel=1e-15)


@pytest.mark.parametrize("q", range(2, 11))
def test_series_coefficients_match_taylor(q):
    # Taylor coefficients of the exact log-MGF, by mpmath differentiation
    f = lambda t: mp_log_mgf(q, t)
    taylor = mpmath.taylor(f, 0, 4)
    c2, c4 = series_coefficients(q)
    assert float(taylor[2]) == pytest.approx(c2, rel=1e-12)
    assert float(taylor[4]) == pytest.approx(c4, rel=1e-12)


def test_log_mgf_examples():
    assert log_mgf(2, 0) == 0
    assert log_mgf(2, 0.001) == pytest.approx(5.0e-7, rel=1e-6)
    assert log_mgf(2, 0.001) == pytest.approx(math.log(math.cosh(0.001)), rel=1e-9)


@pytest.mark.parametrize("q", [2, 3, 5, 7, 10])
def test_log_mgf_accuracy(q):
    ts = [1e-6, 5e-5, 9.99e-5, 1e-4, 1.01e-4, 1e-3, 0.01, 0.3, 1.0, 1.99, 2.0, 2.01, 5.0, 40.0, 300.0]
    for t in ts:
        exact = mp_log_mgf(q, t)
        assert log_mgf(q, t) == pytest.approx(float(exact), rel=1e-12), t
        assert log_mgf(q, -t) == log_mgf(q, t)


def test_series_switch_continuity():
    for q in range(2, 11):
        below = log_mgf(q, chernoff.SERIES_SWITCH * (1 - 1e-9))
        above = log_mgf(q, chernoff.SERIES_SWITCH)
        assert abs(below - above) / above < 1e-8


def test_log_mgf_matches_log_of_closed_form():
    for q in range(2, 11):
        for t in np.linspace(0.01, 10, 200).tolist():
            assert log_mgf(q, t) == pytest.approx(math.log(mgf_closed(q, t)), rel=1e-12)


@given(st.integers(2, 10), st.floats(0, 10))
def test_log_mgf_nonnegative_and_quadratic(q, t):
    c2, _ = series_coefficients(q)
    v = log_mgf(q, t)
    assert v >= 0
    assert v <= c2 * t * t


@pytest.mark.parametrize("q", range(2, 11))
def test_series_remainder_is_sixth_order(q):
    c2, c4 = series_coefficients(q)
    r = [(log_mgf(q, t) - c2 * t**2 - c4 * t**4) / t**6 for t in (1e-1, 10**-1.5, 1e-2)]
    assert max(r) - min(r) < 0.1 * max(abs(v) for v in r)


def test_rate_examples():
    assert rate(2, 0.3, 0) == 0
    assert rate(2, 0, 1) == pytest.approx(-0.4337808, abs=1e-7)


@given(st.integers(2, 10), st.floats(0, 0.99), st.floats(0, 50))
def test_rate_invariants(q, gamma, t):
    assert rate(q, gamma, 0) == 0
    assert rate(q, 0, t) <= 0


@pytest.mark.parametrize("q", [2, 3, 5, 10])
def test_explicit_t_meets_its_bound(q):
    for gamma in np.linspace(0.01, 0.99, 50).tolist():
        t = explicit_t(q, gamma)
        assert rate(q, gamma, t) >= (q - 1) / (q + 1) * gamma**2 / 6


@pytest.mark.parametrize("q", [2, 3, 4, 10])
def test_derivative_vs_finite_differences(q):
    h = 1e-5
    for t in np.linspace(0.01, 8, 60).tolist():
        fd = (log_mgf(q, t + h) - log_mgf(q, t - h)) / (2 * h)
        assert log_mgf_derivative(q, t) == pytest.approx(fd, rel=1e-6)
    for gamma in (0.1, 0.5, 0.9):
        t = 0.7
        fd = (rate(q, gamma, t + h) - rate(q, gamma, t - h)) / (2 * h)
        assert rate_derivative(q, gamma, t) == pytest.approx(fd, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("q", [2, 3, 10])
def test_concavity(q):
    h = 1e-3
    for gamma in (0.0, 0.4, 0.8):
        for t in np.linspace(h, 20, 200).tolist():
            second = rate(q, gamma, t + h) - 2 * rate(q, gamma, t) + rate(q, gamma, max(t - h, 0))
            assert second <= 1e-12


def test_optimize_examples():
    assert optimize_rate(2, 0) == (0.0, 0.0)
    t_star, r_star = optimize_rate(2, 0.5)
    assert t_star == pytest.approx(math.atanh(0.5), abs=1e-8)
    assert r_star == pytest.approx(0.1308, abs=5e-5)
    assert r_star == pytest.approx(binary_rate_star(0.5), rel=1e-12)
    for q in range(2, 11):
        assert optimize_rate(q, 0.5)[1] >= 0.25 / 18


@pytest.mark.parametrize("gamma", [0.05, 0.3, 0.5, 0.75, 0.95, 0.999])
def test_optimize_binary_closed_form(gamma):
    _, r_star = optimize_rate(2, gamma)
    assert r_star == pytest.approx(binary_rate_star(gamma), rel=1e-10)


@pytest.mark.parametrize("q", [3, 5, 10])
@pytest.mark.parametrize("gamma", [0.1, 0.5, 0.9])
def test_optimize_against_scipy_and_grid(q, gamma):
    t_star, r_star = optimize_rate(q, gamma)
    assert abs(rate_derivative(q, gamma, t_star)) < 1e-10
    res = minimize_scalar(lambda t: -rate(q, gamma, t), bounds=(0, 200), method="bounded",
                          options={"xatol": 1e-12})
    assert r_star == pytest.approx(-res.fun, rel=1e-9)
    grid = np.linspace(0, 4 * t_star + 1, 2001)
    assert r_star >= max(rate(q, gamma, t) for t in grid.tolist()) - 1e-15
    assert r_star >= (q - 1) / (q + 1) * gamma**2 / 6 >= gamma**2 / 18


def test_rate_function_type():
    rf = RateFunction.optimal(2, 0.5)
    assert rf.value == pytest.approx(0.1308, abs=5e-5)
    assert rf.mgf == pytest.approx(math.cosh(rf.t))
    assert rf.log_mgf == pytest.approx(math.log(math.cosh(rf.t)))
    with pytest.raises(DomainError):
        RateFunction(2, 1.0, 0.1)
    with pytest.raises(DomainError):
        RateFunction(2, 0.5, -0.1)


def test_bound_examples():
    assert lemma_bound(2, 20, 0.75) == pytest.approx(math.exp(-20 * 0.0625 / 18), rel=1e-15)
    assert lemma_bound(2, 20, 0.75) == pytest.approx(0.93291, abs=1e-5)
    assert lemma_bound(2, 0, 0.75) == 1
    assert lemma_bound(2, 20, 0.5 + 1e-12) == pytest.approx(1)
    assert refined_bound(2, 20, 0.75) == pytest.approx(0.0730, abs=5e-4)
    assert refined_bound(3, 20, 0.5 + 1e-12) == pytest.approx(1)


@pytest.mark.parametrize("fn", [lemma_bound, refined_bound, explicit_bound])
@pytest.mark.parametrize("a", [0.5, 1.0, 0.1])
def test_bound_domain(fn, a):
    with pytest.raises(DomainError):
        fn(2, 10, a)


@pytest.mark.parametrize("q", [2, 3, 5, 10])
@pytest.mark.parametrize("k", [10, 20, 40])
def test_chernoff_sandwich(q, k):
    dist = build_distribution(q, k)
    for a in np.linspace(0.55, 0.95, 9).tolist():
        exact = tail_proportion(dist, a)
        refined = refined_bound(q, k, a)
        assert exact <= refined <= explicit_bound(q, k, a) <= lemma_bound(q, k, a)


def test_sandwich_anchor():
    exact = tail_proportion(build_distribution(2, 20), 0.75)
    assert 0.02069 <= exact <= 0.0207 < refined_bound(2, 20, 0.75) < 0.0731 < 0.93291 <= lemma_bound(2, 20, 0.75)
