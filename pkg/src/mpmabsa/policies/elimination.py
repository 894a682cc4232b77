"""Successive-elimination policies: MP-SE-SA and its MP-SE / known-capacity variants."""
from __future__ import annotations

from ..capest import UCI, HFD, capacity_bounds, elimination_radius, width_function
from .base import ScriptedPolicy, exploitation_action, expected_size, individual_action, ranked, split_evenly


class MPSESA(ScriptedPolicy):
    """Multiple-play successive elimination with shareable arms.

    The candidate set starts as all arms. While the expected set size
    (prefix of the empirical ranking whose capacity lower bounds cover
    ``N``) is below the candidate count, arms far below the boundary arm
    are eliminated and every candidate gets one individual exploration.
    Otherwise the candidates are exploited and those with unresolved
    capacity receive ``N`` plays each in turn.

    ``gamma`` scales the elimination radius; ``xi`` sets the capacity
    confidence level ``delta = 2 xi / T``.
    """

    name = "mpsesa"
    united = True

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None,
                 gamma=1.0, xi=1.0, width=UCI, delta=None, capacities=None):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance)
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        if xi <= 0:
            raise ValueError(f"xi must be positive, got {xi}")
        self.gamma = float(gamma)
        self.xi = float(xi)
        self.width = width
        self.delta = 2.0 * self.xi / horizon if delta is None else float(delta)
        self._width_fn = width_function(width)
        self._width_delta = self.delta / horizon if width == HFD else self.delta
        K, N = n_arms, n_plays
        self.J = list(range(K))
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
        self.L_tilde = N

    def params(self):
        return {"gamma": self.gamma, "xi": self.xi, "width": self.width, "delta": self.delta}

    def _expected_size(self, order):
        return expected_size(order, self.m_lower, self.N)

    def _eliminate(self, order, L):
        rounds = min(self.tau[k] for k in self.J)
        if rounds < 1:
            return
        threshold = self.mu[order[L - 1]] - self.gamma * elimination_radius(rounds, self.T)
        self.J = [k for k in self.J if self.mu[k] > threshold]

    def _individual_round(self):
        order = ranked(self.J, self.mu)
        fillers = order + ranked([k for k in range(self.K) if k not in self.J], self.mu)
        for group in split_evenly(self.J, self.N):
            fb = yield individual_action(group, self.m_lower, self.K, self.N, fillers)
            for k in group:
                a = fb.action[k]
                if a <= self.m_lower[k]:
                    self._add_individual(k, fb.rewards[k] / a)

    def _united_round(self, arms):
        for k in arms:
            action = [0] * self.K
            action[k] = self.N
            fb = yield tuple(action)
            n = self.iota[k] + 1
            self.iota[k] = n
            self.nu[k] += (fb.rewards[k] - self.nu[k]) / n
        self._refresh_bounds(arms)

    def _add_individual(self, k, x):
        n = self.tau[k] + 1
        self.tau[k] = n
        self.mu[k] += (x - self.mu[k]) / n

    def _refresh_bounds(self, arms):
        for k in arms:
            if self.m_lower[k] != self.m_upper[k]:
                self.m_lower[k], self.m_upper[k] = capacity_bounds(
                    self.mu[k], self.nu[k], self.tau[k], self.iota[k],
                    self.m_lower[k], self.m_upper[k], self._width_delta, self.N, self._width_fn,
                )

    def _run(self):
        while True:
            order = ranked(self.J, self.mu)
            L = self._expected_size(order)
            self.L_tilde = L
            if L < len(self.J):
                self._eliminate(order, L)
                yield from self._individual_round()
            else:
                action = exploitation_action(order, self.m_lower, L, self.K, self.N)
                fb = yield action
                for k in order[:L]:
                    a = action[k]
                    if a and a <= self.m_lower[k]:
                        self._add_individual(k, fb.rewards[k] / a)
                if self.united:
                    unresolved = [k for k in self.J if self.m_lower[k] != self.m_upper[k]]
                    if unresolved:
                        yield from self._united_round(unresolved)


class MPSE(MPSESA):
    """Plain multiple-play successive elimination: every capacity is taken to be 1."""

    name = "mpse"
    united = False

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None, gamma=1.0):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance,
                         gamma=gamma, capacities=[1] * n_arms)

    def params(self):
        return {"gamma": self.gamma}

    def _expected_size(self, order):
        return min(self.N, len(order))


class MPSESAKC(MPSESA):
    """MP-SE-SA with known capacities; never runs united exploration."""

    name = "mpsesa_kc"
    needs_capacity = True
    united = False

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None,
                 gamma=1.0, capacities=None):
        if capacities is None:
            raise ValueError(f"{self.name} requires the true capacities")
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance,
                         gamma=gamma, capacities=capacities)

    def params(self):
        return {"gamma": self.gamma}


class SEKC(MPSESAKC):
    name = "se_kc"
