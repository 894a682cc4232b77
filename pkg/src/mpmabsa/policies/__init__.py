"""Policy registry.

Every policy is constructed per replication with
``make_policy(name, env, horizon, rng, **params)``.
"""
from __future__ import annotations

import inspect

from .base import FixedActionPolicy, Policy, ScriptedPolicy, oracle
from .elimination import MPSE, MPSESA, MPSESAKC, SEKC
from .etcucb import ETCUCB
from .flat import DEFAULT_ACTION_CAP, ActionSpaceTooLarge, SEFlat, TSFlat, UCBFlat, action_space_size, enumerate_actions
from .known_capacity import KLUCBKC, ThompsonKC
from .orchexplore import OrchExplore, OrchExploreKC

REGISTRY = {
    cls.name: cls
    for cls in (
        OrchExplore,
        OrchExploreKC,
        MPSESA,
        MPSE,
        MPSESAKC,
        ETCUCB,
        KLUCBKC,
        ThompsonKC,
        SEKC,
        UCBFlat,
        TSFlat,
        SEFlat,
    )
}

# Replays the true optimal action; used as a zero-regret reference.
OPTIMAL = "optimal"


class UnknownPolicyError(KeyError):
    def __str__(self):
        return f"unknown policy {self.args[0]!r}; registered: {', '.join(policy_names())}"


def policy_names():
    return sorted(REGISTRY) + [OPTIMAL]


def policy_parameters(name: str) -> set:
    """Tunable keyword parameters accepted by a policy."""
    if name == OPTIMAL:
        return set()
    if name not in REGISTRY:
        raise UnknownPolicyError(name)
    hidden = {"self", "n_arms", "n_plays", "horizon", "rng", "reward_kind", "variance", "capacities", "args", "kw"}
    params = set()
    for klass in REGISTRY[name].__mro__:
        init = klass.__dict__.get("__init__")
        if init is None:
            continue
        sig = inspect.signature(init)
        params |= {p for p in sig.parameters if p not in hidden}
        if not any(p.kind == p.VAR_KEYWORD for p in sig.parameters.values()):
            break
    return params


def make_policy(name: str, env, horizon: int, rng=None, **params) -> Policy:
    from ..env import optimal_action

    if name == OPTIMAL:
        return FixedActionPolicy(env.n_arms, env.plays, horizon, optimal_action(env)[0], rng=rng)
    if name not in REGISTRY:
        raise UnknownPolicyError(name)
    unknown = set(params) - policy_parameters(name)
    if unknown:
        raise TypeError(f"policy {name!r} does not accept parameter(s) {sorted(unknown)}")
    klass = REGISTRY[name]
    kind, variance = env.family
    if klass.needs_capacity:
        params = dict(params, capacities=list(env.capacities))
    return klass(env.n_arms, env.plays, horizon, rng=rng, reward_kind=kind, variance=variance, **params)


__all__ = [
    "ActionSpaceTooLarge",
    "DEFAULT_ACTION_CAP",
    "ETCUCB",
    "FixedActionPolicy",
    "KLUCBKC",
    "MPSE",
    "MPSESA",
    "MPSESAKC",
    "OPTIMAL",
    "OrchExplore",
    "OrchExploreKC",
    "Policy",
    "REGISTRY",
    "SEFlat",
    "SEKC",
    "ScriptedPolicy",
    "TSFlat",
    "ThompsonKC",
    "UCBFlat",
    "UnknownPolicyError",
    "action_space_size",
    "enumerate_actions",
    "make_policy",
    "oracle",
    "policy_names",
    "policy_parameters",
]
