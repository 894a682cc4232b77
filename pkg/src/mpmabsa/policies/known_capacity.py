"""Index policies that are told the true capacities and learn only the per-load means."""
from __future__ import annotations

import math

import numpy as np

from ..capest import klucb_index
from ..env import BERNOULLI, GAUSSIAN
from .base import Policy, oracle


class _IndexKC(Policy):
    needs_capacity = True

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind=BERNOULLI, variance=None, capacities=None):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance)
        if capacities is None:
            raise ValueError(f"{self.name} requires the true capacities")
        self.m = [int(c) for c in capacities]
        self.mu = [0.0] * n_arms
        self.n = [0] * n_arms

    def indices(self, t):
        raise NotImplementedError

    def select_action(self, t):
        return oracle(self.indices(t), self.m, self.N)

    def observe(self, t, feedback):
        for k, r in feedback.rewards.items():
            a = feedback.action[k]
            x = r / (a if a < self.m[k] else self.m[k])
            n = self.n[k] + 1
            self.n[k] = n
            self.mu[k] += (x - self.mu[k]) / n


class KLUCBKC(_IndexKC):
    """Greedy allocation over KL-UCB indices with known capacities."""

    name = "klucb_kc"

    def indices(self, t):
        t = max(t, 2)
        return [
            math.inf if n == 0 else klucb_index(mu, n, t, self.reward_kind, self.variance)
            for mu, n in zip(self.mu, self.n)
        ]


class ThompsonKC(_IndexKC):
    """Thompson sampling with known capacities.

    Bernoulli arms use a Beta(1, 1) prior. Gaussian arms use a conjugate
    Normal prior with mean 0.5 and variance 1 and the known reward variance.
    """

    name = "ts_kc"
    prior_mean = 0.5
    prior_var = 1.0

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        if self.reward_kind not in (BERNOULLI, GAUSSIAN):
            raise ValueError(f"Thompson sampling is unsupported for {self.reward_kind!r} rewards")

    def indices(self, t):
        n = np.asarray(self.n, dtype=float)
        mu = np.asarray(self.mu)
        if self.reward_kind == BERNOULLI:
            successes = mu * n
            return self.rng.beta(1.0 + successes, 1.0 + n - successes).tolist()
        precision = 1.0 / self.prior_var + n / self.variance
        post_mean = (self.prior_mean / self.prior_var + mu * n / self.variance) / precision
        return (post_mean + self.rng.standard_normal(self.K) / np.sqrt(precision)).tolist()
