from __future__ import annotations

import math

from ..capest import UCI, HFD, capacity_bounds, exploration_budget, klucb_budget_test, klucb_index, width_function
from ..env import GAUSSIAN
from .base import Policy


class OrchExplore(Policy):
    """Orchestrative exploration: alternates parsimonious individual and united exploration.

    Odd slots (and every slot once no empirically optimal arm has an
    unresolved capacity) run PIE: the greedy allocation under the capacity
    lower bounds, with probability 1/2 moving one play from the least
    favored selected arm to a random under-explored arm whose KL-UCB index
    reaches that arm's mean. Even slots run PUE: arms in the PUE set are
    boosted by ``M`` and allocated up to their capacity upper bounds.

    Parameters
    ----------
    width : {"uci", "hfd"}
        Confidence half-width used for capacity bounds. ``"hfd"`` uses the
        Hoeffding width at level ``delta / T`` so that it holds uniformly.
    delta : float, optional
        Confidence level of the capacity bounds, default ``2 / T``.
    M : float, optional
        Priority boost for PUE; 1 for Bernoulli rewards and 5 for Gaussian.
    capacities : sequence of int, optional
        Known capacities. Bounds start collapsed, so PUE never runs.
    """

    name = "orchexplore"

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None,
                 width=UCI, delta=None, M=None, capacities=None):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance)
        K, N = n_arms, n_plays
        self.width = width
        self.delta = 2.0 / horizon if delta is None else float(delta)
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}; use a horizon >= 3 or pass delta")
        self._width_fn = width_function(width)
        self._width_delta = self.delta / horizon if width == HFD else self.delta
        self.M = (5.0 if reward_kind == GAUSSIAN else 1.0) if M is None else float(M)

        self.mu = [0.0] * K
        self.nu = [0.0] * K
        self.tau = [0] * K
        self.iota = [0] * K
        if capacities is None:
            self.m_lower = [1] * K
            self.m_upper = [N] * K
        else:
            self.m_lower = [int(c) for c in capacities]
            self.m_upper = [int(c) for c in capacities]
        self.S = set(range(min(N, K)))
        self.L = min(N, K) - 1
        self.Y: set = set()
        self.E: list = []
        self._mode = None

    def params(self):
        return {"width": self.width, "delta": self.delta, "M": self.M}

    def _allocate(self, values, caps):
        order = sorted(range(self.K), key=values.__getitem__, reverse=True)
        # sorted(reverse=True) keeps the original order among equal keys.
        action = [0] * self.K
        left = self.N
        last = order[0]
        for k in order:
            c = caps[k]
            take = c if c < left else left
            action[k] = take
            left -= take
            last = k
            if left == 0:
                break
        if left:
            action[order[0]] += left
        return action, last

    def kl_ucb_indices(self, t):
        """Current KL-UCB index of every arm (``inf`` before its first individual sample)."""
        return [
            math.inf if n == 0 else klucb_index(mu, n, t, self.reward_kind, self.variance)
            for mu, n in zip(self.mu, self.tau)
        ]

    def select_action(self, t):
        if t % 2 == 1 or not self.Y:
            self._mode = "pie"
            action, L = self._allocate(self.mu, self.m_lower)
            self.S = {k for k in range(self.K) if action[k] > 0}
            self.L = L
            threshold = self.mu[L]
            kind, var = self.reward_kind, self.variance
            budget = exploration_budget(t)
            mu, tau = self.mu, self.tau
            self.E = [
                k for k in range(self.K)
                if action[k] == 0 and (mu[k] >= threshold or klucb_budget_test(mu[k], tau[k], budget, threshold, kind, var))
            ]
            if self.E and self.rng.random() < 0.5:
                l = self.E[int(self.rng.integers(len(self.E)))]
                action[L] -= 1
                action[l] = 1
            return tuple(action)
        self._mode = "pue"
        boosted = list(self.mu)
        for k in self.Y:
            boosted[k] += self.M
        action, _ = self._allocate(boosted, self.m_upper)
        return tuple(action)

    def observe(self, t, feedback):
        action = feedback.action
        changed = []
        if self._mode == "pie":
            for k, r in feedback.rewards.items():
                a = action[k]
                if a <= self.m_lower[k]:
                    n = self.tau[k] + 1
                    self.tau[k] = n
                    self.mu[k] += (r / a - self.mu[k]) / n
                    changed.append(k)
        else:
            for k, r in feedback.rewards.items():
                if action[k] >= self.m_upper[k]:
                    n = self.iota[k] + 1
                    self.iota[k] = n
                    self.nu[k] += (r - self.nu[k]) / n
                    changed.append(k)
        for k in changed:
            if self.m_lower[k] != self.m_upper[k]:
                self.m_lower[k], self.m_upper[k] = capacity_bounds(
                    self.mu[k], self.nu[k], self.tau[k], self.iota[k],
                    self.m_lower[k], self.m_upper[k], self._width_delta, self.N, self._width_fn,
                )
        L = self.L
        self.Y = {k for k in self.S if k != L and self.m_lower[k] != self.m_upper[k]}


class OrchExploreKC(OrchExplore):
    """OrchExplore with the true capacities supplied up front."""

    name = "orchexplore_kc"
    needs_capacity = True
