from __future__ import annotations

import math

from ..capest import UCI, HFD, capacity_bounds, width_function
from .base import ScriptedPolicy, exploitation_action, expected_size, individual_action, ranked, split_evenly


def ucb_index(mu_hat: float, n: int, t: float) -> float:
    """``mu_hat + sqrt(2 log t / n)``; infinite before the first sample."""
    if n == 0:
        return math.inf
    return mu_hat + math.sqrt(2.0 * math.log(max(t, 1)) / n)


class ETCUCB(ScriptedPolicy):
    """Two-phase baseline: learn every capacity first, then run UCB with the estimates.

    The explore-then-commit phase repeats one individual and one united
    exploration round over all arms whose capacity bounds have not met.
    Afterwards capacities are fixed to ``round(nu_hat / mu_hat)`` and each
    slot exploits the ranking of ``mu_hat + sqrt(2 log t / n)``.
    """

    name = "etcucb"

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None,
                 xi=1.0, width=UCI, delta=None):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance)
        if xi <= 0:
            raise ValueError(f"xi must be positive, got {xi}")
        self.xi = float(xi)
        self.width = width
        self.delta = 2.0 * self.xi / horizon if delta is None else float(delta)
        self._width_fn = width_function(width)
        self._width_delta = self.delta / horizon if width == HFD else self.delta
        K, N = n_arms, n_plays
        self.mu = [0.0] * K
        self.nu = [0.0] * K
        self.tau = [0] * K
        self.iota = [0] * K
        self.m_lower = [1] * K
        self.m_upper = [N] * K
        self.m_est = None
        self.n = [0] * K
        self.phase = "etc"
        self.switch_time = None

    def params(self):
        return {"xi": self.xi, "width": self.width, "delta": self.delta}

    def _etc_round(self, S):
        fillers = ranked(range(self.K), self.mu)
        for group in split_evenly(S, self.N):
            fb = yield individual_action(group, self.m_lower, self.K, self.N, fillers)
            for k in group:
                a = fb.action[k]
                if a <= self.m_lower[k]:
                    n = self.tau[k] + 1
                    self.tau[k] = n
                    self.mu[k] += (fb.rewards[k] / a - self.mu[k]) / n
        for k in S:
            action = [0] * self.K
            action[k] = self.N
            fb = yield tuple(action)
            n = self.iota[k] + 1
            self.iota[k] = n
            self.nu[k] += (fb.rewards[k] - self.nu[k]) / n
        for k in S:
            self.m_lower[k], self.m_upper[k] = capacity_bounds(
                self.mu[k], self.nu[k], self.tau[k], self.iota[k],
                self.m_lower[k], self.m_upper[k], self._width_delta, self.N, self._width_fn,
            )

    def _rounded_capacity(self, k):
        if self.mu[k] <= 0:
            return self.m_lower[k]
        return min(max(int(round(self.nu[k] / self.mu[k])), 1), self.N)

    def _run(self):
        S = list(range(self.K))
        while S:
            yield from self._etc_round(S)
            S = [k for k in range(self.K) if self.m_lower[k] != self.m_upper[k]]
        self.phase = "ucb"
        self.switch_time = self.t
        self.m_est = [self._rounded_capacity(k) for k in range(self.K)]
        self.n = list(self.tau)
        caps = self.m_est
        while True:
            t = self.t
            ucb = [ucb_index(mu, n, t) for mu, n in zip(self.mu, self.n)]
            order = ranked(range(self.K), ucb)
            L = expected_size(order, caps, self.N)
            action = exploitation_action(order, caps, L, self.K, self.N)
            fb = yield action
            for k in order[:L]:
                a = action[k]
                if a:
                    n = self.n[k] + 1
                    self.n[k] = n
                    self.mu[k] += (fb.rewards[k] / a - self.mu[k]) / n
