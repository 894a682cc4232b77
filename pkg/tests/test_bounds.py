"""Regret bound coefficients; reference sums worked out by hand for the benchmark."""
import numpy as np
import pytest

from mpmabsa.bounds import bound_coefficients, theoretical_curves
from mpmabsa.env import Environment
from mpmabsa.harness import builtin_scenario


def test_gaussian_benchmark_terms():
    c = bound_coefficients(builtin_scenario("gaussian9"), 0.5)
    # sum over suboptimal arms of 2 sigma^2 / gap with gaps 0.1 .. 0.6
    assert c.suboptimal == pytest.approx(10 + 5 + 10 / 3 + 2.5 + 2 + 5 / 3)
    # (0.9 - 0.7) 0.5 * 4 / 0.81 + (0.8 - 0.7) 0.5 * 16 / 0.64
    assert c.lower_capacity == pytest.approx(0.4 / 0.81 + 1.25)
    # boundary arm: m_L = 3, remainder 1, so the shrink factor is 3^2
    assert c.lower_boundary == pytest.approx(0.1 * 0.5 * 9 / (9 * 0.49))
    assert c.upper_capacity == pytest.approx(49 * 4.8 * 4 / 0.81 + 49 * 3.4 * 16 / 0.64)
    assert c.upper_boundary == pytest.approx(49 * 4.5 * 9 / (9 * 0.49))
    assert c.lower == pytest.approx(c.suboptimal + c.lower_capacity + c.lower_boundary)


def test_weight_of_best_arm():
    c = bound_coefficients(builtin_scenario("bernoulli9"))
    assert c.weights[0] == pytest.approx(5.7 - 1.8 + 0.9)


def test_unit_capacity_boundary_term():
    env = Environment.from_vectors([0.9, 0.7, 0.4, 0.2], [1, 1, 1, 1], 2, "gaussian", 0.5)
    c = bound_coefficients(env)
    assert c.lower_boundary == pytest.approx((0.7 - 0.4) * 0.5 / 0.49)


def test_bernoulli_lower_bound_has_only_suboptimal_term():
    c = bound_coefficients(builtin_scenario("bernoulli9"))
    assert c.lower_capacity == 0.0 and c.lower_boundary == 0.0
    assert c.lower == c.suboptimal > 0


def test_curves_scale_with_log_t():
    out = theoretical_curves(builtin_scenario("gaussian9"), 0.5, [10, 100, 1000])
    np.testing.assert_allclose(out["lower"] / np.log(out["T"]), out["coefficients"].lower)
    assert np.all(out["upper"] > out["lower"])
