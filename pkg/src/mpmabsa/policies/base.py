from __future__ import annotations

import math

import numpy as np

from ..env import BERNOULLI, Feedback, greedy_allocation


def oracle(mu, m, N: int) -> tuple:
    """Greedy allocation of ``N`` plays in descending order of ``mu`` up to capacities ``m``."""
    if len(mu) != len(m):
        raise ValueError(f"length mismatch: {len(mu)} means vs {len(m)} capacities")
    return greedy_allocation(mu, m, N)[0]


def ranked(arms, values):
    """Arms sorted by descending value; ties keep lower index first."""
    return sorted(arms, key=lambda k: -values[k])


def expected_size(order, caps, N: int) -> int:
    """Smallest prefix of ``order`` whose capacities cover ``N`` plays (``len(order)`` if none does)."""
    total = 0
    for n, k in enumerate(order, start=1):
        total += caps[k]
        if total >= N:
            return n
    return len(order)


def split_evenly(arms, N: int) -> list[list[int]]:
    """Partition ``arms`` into ``ceil(len/N)`` contiguous groups of near-equal size."""
    n_groups = max(1, math.ceil(len(arms) / N))
    return [list(g) for g in np.array_split(np.asarray(arms, dtype=int), n_groups) if len(g)]


def individual_action(group, caps, K: int, N: int, filler_order) -> tuple:
    """One play for every arm in ``group``; spare plays topped up within capacities.

    Spare plays go first to ``group`` arms, then to ``filler_order`` arms,
    never exceeding ``caps``. Whatever is still left lands on the first
    non-group arm (or the first group arm if there is none).
    """
    action = [0] * K
    for k in group:
        action[k] = 1
    left = N - len(group)
    if left < 0:
        raise ValueError(f"group of {len(group)} arms cannot be explored with {N} plays")
    for k in list(group) + [k for k in filler_order if k not in group]:
        if left == 0:
            break
        room = caps[k] - action[k]
        if room > 0:
            take = room if room < left else left
            action[k] += take
            left -= take
    if left:
        spill = next((k for k in filler_order if k not in group), group[0])
        action[spill] += left
    return tuple(action)


def exploitation_action(order, caps, L: int, K: int, N: int) -> tuple:
    """``caps`` plays on the top ``L - 1`` arms of ``order``, the remainder on arm ``order[L-1]``."""
    action = [0] * K
    left = N
    for k in order[: L - 1]:
        action[k] = caps[k]
        left -= caps[k]
    action[order[L - 1]] = left
    return tuple(action)


class Policy:
    """Base class: ``select_action`` returns an allocation, ``observe`` consumes its feedback.

    Subclasses set ``name`` and may set ``needs_capacity = True`` to receive
    the true capacities at construction.
    """

    name = "policy"
    needs_capacity = False

    def __init__(self, n_arms: int, n_plays: int, horizon: int, rng=None,
                 reward_kind: str = BERNOULLI, variance: float | None = None):
        if n_plays < 1 or n_arms < 1:
            raise ValueError("need at least one arm and one play")
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        self.K = n_arms
        self.N = n_plays
        self.T = horizon
        self.rng = rng if rng is not None else np.random.default_rng()
        self.reward_kind = reward_kind
        self.variance = variance

    def select_action(self, t: int) -> tuple:
        raise NotImplementedError

    def observe(self, t: int, feedback: Feedback) -> None:
        raise NotImplementedError

    def params(self) -> dict:
        return {}


class ScriptedPolicy(Policy):
    """Policy whose decision logic is a generator that yields actions and receives feedback.

    Multi-slot procedures (an exploration round spanning several slots)
    are written as straight-line loops; the harness still drives one slot
    at a time.
    """

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self._script = None
        self._next = None
        self.t = 0

    def _run(self):
        raise NotImplementedError
        yield  # pragma: no cover

    def select_action(self, t):
        if self._script is None:
            self.t = t
            self._script = self._run()
            self._next = next(self._script)
        return self._next

    def observe(self, t, feedback):
        # The script consumes feedback right away; ``self.t`` is the slot being decided next.
        self.t = t + 1
        self._next = self._script.send(feedback)


class FixedActionPolicy(Policy):
    """Replays one action forever; with the optimal action it is a zero-regret reference."""

    name = "fixed"

    def __init__(self, n_arms, n_plays, horizon, action, **kw):
        super().__init__(n_arms, n_plays, horizon, **kw)
        self.action = tuple(int(a) for a in action)

    def select_action(self, t):
        return self.action

    def observe(self, t, feedback):
        pass
