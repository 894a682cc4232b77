"""Ground-truth environment for multiple-play bandits with shareable arms.

Each arm ``k`` has a per-load reward ``X_k`` with mean ``mu_k`` and an integer
reward capacity ``m_k``. Pulling arm ``k`` with ``a`` plays yields
``min(a, m_k) * X_k`` using a single draw of ``X_k`` per slot.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

BERNOULLI = "bernoulli"
GAUSSIAN = "gaussian"
DISTRIBUTIONS = (BERNOULLI, GAUSSIAN)


class InvalidActionError(ValueError):
    """Action does not lie in the action space of the environment."""


class InfeasibleEnvironmentError(ValueError):
    """Arm parameters do not describe a well-posed problem."""


@dataclass(frozen=True)
class ArmSpec:
    mean: float
    capacity: int
    distribution: str = BERNOULLI
    variance: float | None = None

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise InfeasibleEnvironmentError(
                f"unknown distribution {self.distribution!r}; expected one of {DISTRIBUTIONS}"
            )
        if int(self.capacity) != self.capacity or self.capacity < 1:
            raise InfeasibleEnvironmentError(f"capacity must be an integer >= 1, got {self.capacity}")
        object.__setattr__(self, "capacity", int(self.capacity))
        object.__setattr__(self, "mean", float(self.mean))
        if self.distribution == BERNOULLI:
            if not 0.0 < self.mean <= 1.0:
                raise InfeasibleEnvironmentError(f"Bernoulli mean must be in (0, 1], got {self.mean}")
            if self.variance is not None:
                raise InfeasibleEnvironmentError("Bernoulli arms take no variance parameter")
        else:
            if not 0.0 < self.mean <= 1.0:
                raise InfeasibleEnvironmentError(f"mean must be in (0, 1], got {self.mean}")
            if self.variance is None or not 0.0 < self.variance <= 0.5:
                raise InfeasibleEnvironmentError(
                    f"Gaussian variance must be in (0, 1/2], got {self.variance}"
                )
            object.__setattr__(self, "variance", float(self.variance))

    def to_dict(self) -> dict:
        d = {"mean": self.mean, "capacity": self.capacity, "distribution": self.distribution}
        if self.variance is not None:
            d["variance"] = self.variance
        return d


class Feedback(NamedTuple):
    """Semi-bandit observation of one slot.

    ``rewards`` maps every arm that received at least one play to its
    observed reward; ``action`` holds the plays assigned to each arm.
    """

    action: tuple
    rewards: dict

    def plays(self, arm: int) -> int:
        return self.action[arm]


@dataclass(frozen=True)
class Environment:
    arms: tuple
    plays: int
    rng_seed: int = 0
    allow_ties: bool = False
    _means: tuple = field(init=False, repr=False, compare=False)
    _caps: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arms = tuple(self.arms)
        object.__setattr__(self, "arms", arms)
        if not arms:
            raise InfeasibleEnvironmentError("environment needs at least one arm")
        if int(self.plays) != self.plays or self.plays < 1:
            raise InfeasibleEnvironmentError(f"plays must be an integer >= 1, got {self.plays}")
        object.__setattr__(self, "plays", int(self.plays))
        for k, arm in enumerate(arms):
            if arm.capacity > self.plays:
                raise InfeasibleEnvironmentError(
                    f"arm {k}: capacity {arm.capacity} exceeds the number of plays {self.plays}"
                )
        means = tuple(a.mean for a in arms)
        if not self.allow_ties and len(set(means)) != len(means):
            raise InfeasibleEnvironmentError("arm means must be pairwise distinct")
        caps = tuple(a.capacity for a in arms)
        if sum(caps) < self.plays:
            raise InfeasibleEnvironmentError(
                f"total capacity {sum(caps)} is smaller than the number of plays {self.plays}"
            )
        object.__setattr__(self, "_means", means)
        object.__setattr__(self, "_caps", caps)

    @classmethod
    def from_vectors(cls, means, capacities, plays, distribution=BERNOULLI, variance=None, **kw):
        arms = [ArmSpec(mu, m, distribution, variance) for mu, m in zip(means, capacities)]
        return cls(tuple(arms), plays, **kw)

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> np.ndarray:
        return np.array(self._means)

    @property
    def capacities(self) -> np.ndarray:
        return np.array(self._caps)

    @property
    def family(self) -> tuple[str, float | None]:
        """Common reward family ``(distribution, variance)`` shared by all arms."""
        kinds = {(a.distribution, a.variance) for a in self.arms}
        if len(kinds) != 1:
            raise InfeasibleEnvironmentError("arms do not share one reward family")
        return next(iter(kinds))

    def content_hash(self) -> str:
        payload = json.dumps(
            {"plays": self.plays, "arms": [a.to_dict() for a in self.arms]},
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def draw(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        """Draw per-load rewards ``X_k`` for every arm (shape ``(K,)`` or ``(size, K)``)."""
        shape = (self.n_arms,) if size is None else (size, self.n_arms)
        kind, var = self.family if self._homogeneous() else (None, None)
        if kind == BERNOULLI:
            return (rng.random(shape) < np.array(self._means)).astype(float)
        if kind == GAUSSIAN:
            return np.array(self._means) + np.sqrt(var) * rng.standard_normal(shape)
        u = rng.random(shape)
        z = rng.standard_normal(shape)
        out = np.empty(shape)
        for k, arm in enumerate(self.arms):
            if arm.distribution == BERNOULLI:
                out[..., k] = u[..., k] < arm.mean
            else:
                out[..., k] = arm.mean + np.sqrt(arm.variance) * z[..., k]
        return out

    def _homogeneous(self) -> bool:
        return len({(a.distribution, a.variance) for a in self.arms}) == 1


def validate_action(env: Environment, action: Sequence[int]) -> tuple:
    if len(action) != env.n_arms:
        raise InvalidActionError(f"action has length {len(action)}, expected {env.n_arms}")
    out = []
    for k, a in enumerate(action):
        if int(a) != a or a < 0:
            raise InvalidActionError(f"arm {k}: plays must be a non-negative integer, got {a}")
        out.append(int(a))
    if sum(out) != env.plays:
        raise InvalidActionError(f"action assigns {sum(out)} plays, expected {env.plays}")
    return tuple(out)


def rewards_from_draws(env: Environment, action: Sequence[int], draws: Sequence[float]) -> dict:
    caps = env._caps
    return {k: (a if a < caps[k] else caps[k]) * draws[k] for k, a in enumerate(action) if a}


def sample_feedback(env: Environment, action: Sequence[int], rng: np.random.Generator) -> Feedback:
    """Play ``action`` once and return the load-dependent rewards of the pulled arms."""
    action = validate_action(env, action)
    return Feedback(action, rewards_from_draws(env, action, env.draw(rng)))


def expected_reward(env: Environment, action: Sequence[int]) -> float:
    action = validate_action(env, action)
    return float(sum(min(a, m) * mu for a, m, mu in zip(action, env._caps, env._means)))


def greedy_allocation(means, capacities, plays: int) -> tuple[tuple, int]:
    """Fill arms in descending order of ``means`` up to their capacities.

    Ties are broken by lower arm index. Returns the allocation and the
    number of arms that received plays.
    """
    caps = [int(c) for c in capacities]
    if sum(caps) < plays:
        raise InfeasibleEnvironmentError(f"total capacity {sum(caps)} cannot cover {plays} plays")
    order = sorted(range(len(caps)), key=lambda k: -means[k])
    action = [0] * len(caps)
    left = plays
    used = 0
    for k in order:
        if left == 0:
            break
        take = caps[k] if caps[k] < left else left
        if take > 0:
            action[k] = take
            left -= take
            used += 1
    return tuple(action), used


def optimal_action(env: Environment) -> tuple[tuple, int]:
    """Return the optimal action and ``L``, the number of arms it pulls."""
    return greedy_allocation(env._means, env._caps, env.plays)


def instantaneous_regret(env: Environment, action: Sequence[int]) -> float:
    best, _ = optimal_action(env)
    return expected_reward(env, best) - expected_reward(env, action)
