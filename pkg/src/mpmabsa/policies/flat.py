"""Baselines that treat every allocation as an independent arm of a classic bandit."""
from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from ..capest import elimination_radius
from .base import Policy

DEFAULT_ACTION_CAP = 10**6


class ActionSpaceTooLarge(ValueError):
    def __init__(self, cardinality: int, cap: int):
        self.cardinality = cardinality
        self.cap = cap
        super().__init__(f"action space has {cardinality} allocations, above the cap of {cap}")


def action_space_size(K: int, N: int) -> int:
    return math.comb(N + K - 1, K - 1)


def enumerate_actions(K: int, N: int, cap: int = DEFAULT_ACTION_CAP) -> np.ndarray:
    """All allocations of ``N`` plays to ``K`` arms, one per row (stars and bars)."""
    size = action_space_size(K, N)
    if size > cap:
        raise ActionSpaceTooLarge(size, cap)
    rows = np.empty((size, K), dtype=np.int64)
    for i, bars in enumerate(combinations(range(N + K - 1), K - 1)):
        prev = -1
        for j, b in enumerate(bars):
            rows[i, j] = b - prev - 1
            prev = b
        rows[i, K - 1] = N + K - 2 - prev
    return rows


class _FlatPolicy(Policy):
    """Rewards are scaled by ``1/N`` so that Bernoulli payoffs lie in [0, 1]."""

    def __init__(self, n_arms, n_plays, horizon, rng=None, reward_kind="bernoulli", variance=None,
                 action_cap=DEFAULT_ACTION_CAP):
        super().__init__(n_arms, n_plays, horizon, rng=rng, reward_kind=reward_kind, variance=variance)
        self.action_cap = int(action_cap)
        self.actions = enumerate_actions(n_arms, n_plays, self.action_cap)
        self._tuples = [tuple(r) for r in self.actions.tolist()]
        self.n_meta = len(self._tuples)
        self.counts = np.zeros(self.n_meta)
        self.means = np.zeros(self.n_meta)
        self._last = 0

    def params(self):
        return {"action_cap": self.action_cap, "n_actions": self.n_meta}

    def _choose(self, t) -> int:
        raise NotImplementedError

    def select_action(self, t):
        self._last = self._choose(t)
        return self._tuples[self._last]

    def observe(self, t, feedback):
        j = self._last
        r = sum(feedback.rewards.values()) / self.N
        self.counts[j] += 1
        self.means[j] += (r - self.means[j]) / self.counts[j]


class UCBFlat(_FlatPolicy):
    """UCB1 over the enumerated allocations; each allocation is tried once first."""

    name = "ucb_flat"

    def _choose(self, t):
        if t <= self.n_meta:
            return t - 1
        return int(np.argmax(self.means + np.sqrt(2.0 * math.log(t) / self.counts)))


class TSFlat(_FlatPolicy):
    """Gaussian Thompson sampling over allocations: ``N(mean, 1 / (n + 1))`` posteriors."""

    name = "ts_flat"

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self._scale = np.ones(self.n_meta)
        self._buf = np.empty(self.n_meta)

    def _choose(self, t):
        z = self.rng.standard_normal(self.n_meta, out=self._buf)
        z *= self._scale
        z += self.means
        return int(z.argmax())

    def observe(self, t, feedback):
        super().observe(t, feedback)
        j = self._last
        self._scale[j] = 1.0 / math.sqrt(self.counts[j] + 1.0)


class SEFlat(_FlatPolicy):
    """Successive elimination over allocations with round-robin sampling of survivors."""

    name = "se_flat"

    def __init__(self, *args, gamma=1.0, **kw):
        super().__init__(*args, **kw)
        self.gamma = float(gamma)
        self.active = np.arange(self.n_meta)
        self._cursor = 0
        self.rounds = 0

    def params(self):
        return dict(super().params(), gamma=self.gamma)

    def _choose(self, t):
        if self._cursor == len(self.active):
            self.rounds += 1
            self._cursor = 0
            means = self.means[self.active]
            radius = self.gamma * elimination_radius(self.rounds, self.T)
            self.active = self.active[means > means.max() - radius]
        j = int(self.active[self._cursor])
        self._cursor += 1
        return j
