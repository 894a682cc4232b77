"""Confidence widths, capacity bounds, KL divergences and the KL-UCB index.

Reference values marked "oracle" were computed independently with mpmath at
40 significant digits and frozen here.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpmabsa.capest import (
    ArmStatistics,
    capacity_bounds,
    capacity_estimate,
    elimination_radius,
    exploration_budget,
    kl_bernoulli,
    kl_gaussian,
    klucb_index,
    klucb_index_at_least,
    phi,
    rho,
    update_capacity_bounds,
)


# --- widths -----------------------------------------------------------------

def test_phi_oracle_values():
    assert phi(1, 0.1) == pytest.approx(1.828197435681924, rel=1e-12)
    assert phi(10**6, 0.01) == pytest.approx(0.0024704337019644, rel=1e-10)
    assert phi(1, 1e-6) == pytest.approx(math.sqrt(math.log(2 * math.sqrt(2) * 1e6)), rel=1e-12)


@pytest.mark.parametrize("x", [1, 10, 100])
def test_phi_shrinks_with_samples(x):
    assert phi(4 * x, 0.05) < phi(x, 0.05)


def test_rho_values():
    assert rho(2, 0.05) == pytest.approx(0.9603227913199208, rel=1e-12)
    assert rho(8, 0.05) == pytest.approx(rho(2, 0.05) / 2, rel=1e-12)
    assert rho(17, 2.0) == 0.0


@pytest.mark.parametrize("fn,args", [(phi, (0, 0.1)), (phi, (1, 1.0)), (rho, (0, 0.1)), (rho, (1, 0.0))])
def test_width_domain_errors(fn, args):
    with pytest.raises(ValueError):
        fn(*args)


# --- capacity bounds --------------------------------------------------------

def test_bounds_collapse_with_many_samples():
    stats = ArmStatistics(mu_hat=0.5, nu_hat=1.5, ie_count=10**6, ue_count=10**6, m_lower=1, m_upper=7)
    out = update_capacity_bounds(stats, 0.01, 7)
    assert (out.m_lower, out.m_upper) == (3, 3)
    assert capacity_estimate(out) == 3


def test_bounds_unchanged_without_united_samples():
    stats = ArmStatistics(mu_hat=0.5, nu_hat=0.0, ie_count=50, ue_count=0, m_lower=1, m_upper=7)
    out = update_capacity_bounds(stats, 0.01, 7)
    assert (out.m_lower, out.m_upper) == (1, 7)


def test_upper_bound_kept_when_denominator_not_positive():
    # phi(4, 0.5) + phi(4, 0.5) is about 0.76, far above mu_hat = 0.001
    lo, hi = capacity_bounds(0.001, 0.004, 4, 4, 1, 7, 0.5, 7)
    assert hi == 7
    assert lo == 1


def test_crossing_interval_keeps_previous_bounds():
    # Previous bounds (3, 3) with a refinement that would yield lower > upper.
    assert capacity_bounds(0.9, 0.1, 10**6, 10**6, 3, 3, 0.01, 7) == (3, 3)


@pytest.mark.parametrize("lo,hi,expected", [(3, 3, 3), (1, 7, None), (2, 5, None)])
def test_capacity_estimate(lo, hi, expected):
    assert capacity_estimate(ArmStatistics(m_lower=lo, m_upper=hi)) == expected


@settings(max_examples=200, deadline=None)
@given(
    mu=st.floats(0.0, 1.0), nu=st.floats(0.0, 7.0),
    ie=st.integers(0, 10**5), ue=st.integers(0, 10**5),
    lo=st.integers(1, 7), width=st.integers(0, 6), delta=st.floats(1e-6, 0.5),
)
def test_bounds_only_move_inward(mu, nu, ie, ue, lo, width, delta):
    hi = min(lo + width, 7)
    new_lo, new_hi = capacity_bounds(mu, nu, ie, ue, lo, hi, delta, 7)
    assert lo <= new_lo <= new_hi <= hi


def test_bounds_cover_truth_with_high_probability():
    # Bernoulli arm, one IE and one UE sample per step; the truth must stay inside.
    mu, m, N, delta = 0.6, 3, 6, 0.05
    rng = np.random.default_rng(2024)
    misses = 0
    runs = 200
    for _ in range(runs):
        x = (rng.random((600, 2)) < mu).astype(float)
        lo, hi = 1, N
        for n in range(1, 601):
            mu_hat = x[:n, 0].mean()
            nu_hat = m * x[:n, 1].mean()
            lo, hi = capacity_bounds(mu_hat, nu_hat, n, n, lo, hi, delta, N)
            if not lo <= m <= hi:
                misses += 1
                break
    assert misses / runs <= delta


# --- KL divergences ---------------------------------------------------------

@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_kl_bernoulli_zero_on_diagonal(p):
    assert kl_bernoulli(p, p) == 0.0


def test_kl_bernoulli_values():
    assert kl_bernoulli(0.5, 0.75) == pytest.approx(0.14384103622589046, rel=1e-12)
    assert kl_bernoulli(0.0, 0.4) == pytest.approx(-math.log(0.6), rel=1e-12)
    assert kl_bernoulli(0.3, 1.0) == math.inf


def test_kl_gaussian():
    assert kl_gaussian(0.9, 0.5, 0.5) == pytest.approx(0.16)
    assert kl_gaussian(0.4, 0.4, 0.5) == 0.0
    assert kl_gaussian(0.1, 0.7, 0.3) == kl_gaussian(0.7, 0.1, 0.3)
    with pytest.raises(ValueError):
        kl_gaussian(0.1, 0.2, 0.0)


# --- KL-UCB index -----------------------------------------------------------

@pytest.mark.parametrize("mu,n,t,expected", [
    (0.0, 1, 10, 0.99644256277503991),
    (0.3, 10, 100, 0.90565023386862069),
    (0.5, 50, 1000, 0.83286303554325888),
    (0.1, 200, 10**5, 0.28944497594831899),
])
def test_klucb_oracle_values(mu, n, t, expected):
    # oracle: mpmath root of n kl(mu, q) = log t + 4 log max(log t, 1)
    assert klucb_index(mu, n, t) == pytest.approx(expected, abs=2e-9)


def test_klucb_collapses_to_mean():
    assert abs(klucb_index(0.5, 10**9, 100) - 0.5) < 1e-3


def test_klucb_gaussian_closed_form():
    expected = 0.5 + math.sqrt(0.25 * (2 + 4 * math.log(2)))
    assert klucb_index(0.5, 4, math.e**2, "gaussian", 0.5) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.5923127668209071, rel=1e-12)


def test_klucb_requires_a_sample():
    with pytest.raises(ValueError):
        klucb_index(0.5, 0, 10)


def test_exploration_budget_is_floored():
    # log log 2 < 0, so the inner log is floored at 1
    assert exploration_budget(2) == pytest.approx(math.log(2))


@settings(max_examples=200, deadline=None)
@given(mu=st.floats(0.0, 1.0), n=st.integers(1, 10**6), t=st.integers(2, 10**7))
def test_klucb_at_least_mean_and_decreasing_in_n(mu, n, t):
    u = klucb_index(mu, n, t)
    assert mu - 1e-9 <= u <= 1.0
    assert klucb_index(mu, n + 1, t) <= u + 1e-9


@settings(max_examples=200, deadline=None)
@given(mu=st.floats(0.0, 1.0), n=st.integers(1, 10**5), t=st.integers(2, 10**7))
def test_klucb_root_residual(mu, n, t):
    u = klucb_index(mu, n, t)
    if not mu < u < 1.0:
        return
    # Skip roots so close to 1 that one ulp of q moves n*kl by more than the tolerance.
    slope = n * (u - mu) / (u * (1.0 - u))
    if slope * math.ulp(u) <= 1e-7:
        assert abs(n * kl_bernoulli(mu, u) - exploration_budget(t)) <= 1e-6


@settings(max_examples=300, deadline=None)
@given(mu=st.floats(0.0, 1.0), n=st.integers(1, 5000), t=st.integers(2, 10**6), thr=st.floats(0.0, 1.0))
def test_membership_test_agrees_with_index(mu, n, t, thr):
    u = klucb_index(mu, n, t)
    if abs(u - thr) > 1e-8:
        assert klucb_index_at_least(mu, n, t, thr) == (u >= thr)


# --- elimination radius -----------------------------------------------------

def test_elimination_radius_values():
    assert elimination_radius(1, 1) == pytest.approx(2 * math.sqrt(2))
    # log T/tau = 0 is floored at 1
    assert elimination_radius(1000, 1000) == pytest.approx(2 * math.sqrt(2 / 1000))
    assert elimination_radius(1, math.e**4) == pytest.approx(2 * math.sqrt(8))


def test_elimination_radius_non_increasing():
    T = 5000
    radii = [elimination_radius(tau, T) for tau in range(1, T + 1)]
    assert all(b <= a + 1e-15 for a, b in zip(radii, radii[1:]))
