"""Asymptotic regret lower/upper bound coefficients, for overlay on measured curves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capest import kl_bernoulli, kl_gaussian
from .env import GAUSSIAN, Environment, expected_reward, optimal_action


@dataclass(frozen=True)
class BoundCoefficients:
    """Each bound equals ``coefficient * log T``; terms are kept for inspection."""

    suboptimal: float
    lower_capacity: float
    lower_boundary: float
    upper_capacity: float
    upper_boundary: float
    weights: tuple

    @property
    def lower(self) -> float:
        return self.suboptimal + self.lower_capacity + self.lower_boundary

    @property
    def upper(self) -> float:
        return self.suboptimal + self.upper_capacity + self.upper_boundary


def bound_coefficients(env: Environment, variance: float | None = None) -> BoundCoefficients:
    kind, env_var = env.family
    if kind == GAUSSIAN:
        var = env_var if variance is None else float(variance)
        kl = lambda p, q: kl_gaussian(p, q, var)  # noqa: E731
    else:
        var = variance
        kl = kl_bernoulli
    order = sorted(range(env.n_arms), key=lambda k: -env.arms[k].mean)
    mu = [env.arms[k].mean for k in order]
    m = [env.arms[k].capacity for k in order]
    best, L = optimal_action(env)
    f_star = expected_reward(env, best)
    m_bar = env.plays - sum(m[: L - 1])
    iL = L - 1

    suboptimal = sum((mu[iL] - mu[k]) / kl(mu[k], mu[iL]) for k in range(L, len(mu)))
    weights = tuple(f_star - m[k] * mu[k] + mu[0] for k in range(len(mu)))
    boundary_shrink = (m[iL] - m_bar + 1) ** 2
    upper_capacity = sum(49.0 * weights[k] * m[k] ** 2 / mu[k] ** 2 for k in range(iL))
    upper_boundary = 49.0 * weights[iL] * m[iL] ** 2 / (boundary_shrink * mu[iL] ** 2)

    lower_capacity = lower_boundary = 0.0
    if kind == GAUSSIAN:
        lower_capacity = sum((mu[k] - mu[iL]) * var * m[k] ** 2 / mu[k] ** 2 for k in range(iL))
        if L < len(mu):
            gap = mu[iL] - mu[L]
            lower_boundary = gap * var * m[iL] ** 2 / (boundary_shrink * mu[iL] ** 2)
    return BoundCoefficients(
        suboptimal=suboptimal,
        lower_capacity=lower_capacity,
        lower_boundary=lower_boundary,
        upper_capacity=upper_capacity,
        upper_boundary=upper_boundary,
        weights=weights,
    )


def theoretical_curves(env: Environment, variance: float | None = None, horizons=None) -> dict:
    """Lower and upper bound values ``coefficient * log T`` on a horizon grid.

    For Bernoulli environments the lower bound keeps only the suboptimal-arm
    term; its capacity terms are established for Gaussian rewards only.
    """
    coef = bound_coefficients(env, variance)
    T = np.asarray(horizons if horizons is not None else np.logspace(1, 6, 26), dtype=float)
    log_t = np.log(T)
    return {
        "T": T,
        "lower": coef.lower * log_t,
        "upper": coef.upper * log_t,
        "coefficients": coef,
    }


__all__ = ["BoundCoefficients", "bound_coefficients", "theoretical_curves"]
