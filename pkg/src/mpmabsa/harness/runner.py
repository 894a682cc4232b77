"""Monte-Carlo replication runner and regret aggregation."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..env import Environment, Feedback, expected_reward, optimal_action, validate_action
from ..policies import make_policy
from .config import ExperimentConfig, PolicySpec

DRAW_BLOCK = 4096


@dataclass
class RegretTrace:
    """Aggregated results of one policy over all replications.

    ``optimal_action_freq[i]`` is the fraction of slots in ``(t[i-1], t[i]]``
    where the policy played the optimal action, averaged over replications.
    """

    label: str
    policy: str
    params: dict
    t: np.ndarray
    mean_regret: np.ndarray
    std_regret: np.ndarray
    optimal_action_freq: np.ndarray
    final_regret: np.ndarray
    metadata: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def final_mean(self) -> float:
        return float(self.mean_regret[-1]) if len(self.mean_regret) else 0.0

    @property
    def final_stderr(self) -> float:
        n = len(self.final_regret)
        return float(np.std(self.final_regret, ddof=1) / np.sqrt(n)) if n > 1 else 0.0


def logging_grid(horizon: int, stride: int) -> np.ndarray:
    """Slots ``stride, 2*stride, ...`` up to ``horizon``; the last slot is always included."""
    if horizon <= 0:
        return np.zeros(0, dtype=np.int64)
    grid = list(range(stride, horizon + 1, stride))
    if not grid or grid[-1] != horizon:
        grid.append(horizon)
    return np.asarray(grid, dtype=np.int64)


def replication_streams(seed: int, rep: int):
    """Independent ``(env_rng, policy_rng)`` for replication ``rep``.

    Every policy sees the same environment stream for a given ``(seed, rep)``.
    """
    env_ss, pol_ss = np.random.SeedSequence(seed, spawn_key=(rep,)).spawn(2)
    return np.random.default_rng(env_ss), np.random.default_rng(pol_ss)


def run_replication(env: Environment, spec: PolicySpec, horizon: int, seed: int, rep: int, grid):
    """Run one replication; returns cumulative regret and optimal-play counts at ``grid``."""
    env_rng, pol_rng = replication_streams(seed, rep)
    policy = make_policy(spec.name, env, horizon, pol_rng, **spec.params)
    best, _ = optimal_action(env)
    f_star = expected_reward(env, best)
    caps = env._caps
    arms = range(env.n_arms)
    regret_of = {}

    n_log = len(grid)
    cum_out = np.zeros(n_log)
    hits_out = np.zeros(n_log)
    cum = 0.0
    hits = 0
    g = 0
    next_log = int(grid[0]) if n_log else -1
    rows = []
    i = 0
    for t in range(1, horizon + 1):
        if i == len(rows):
            rows = env.draw(env_rng, size=min(DRAW_BLOCK, horizon - t + 1)).tolist()
            i = 0
        x = rows[i]
        i += 1
        a = policy.select_action(t)
        r = regret_of.get(a)
        if r is None:
            a = validate_action(env, a)
            r = regret_of[a] = f_star - expected_reward(env, a)
        policy.observe(t, Feedback(a, {k: (a[k] if a[k] < caps[k] else caps[k]) * x[k] for k in arms if a[k]}))
        cum += r
        if a == best:
            hits += 1
        if t == next_log:
            cum_out[g] = cum
            hits_out[g] = hits
            hits = 0
            g += 1
            next_log = int(grid[g]) if g < n_log else -1
    return cum_out, hits_out


def _run_task(args):
    env, spec, horizon, seed, rep, grid = args
    return run_replication(env, spec, horizon, seed, rep, grid)


def _check_policy(env, spec, horizon):
    """Construct the policy once so infeasible ones fail before any replication runs."""
    try:
        make_policy(spec.name, env, max(horizon, 1), np.random.default_rng(0), **spec.params)
    except (ValueError, TypeError, KeyError) as exc:
        return str(exc)
    return None


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> list:
    """Run every policy of ``config``; one ``RegretTrace`` per policy, in config order.

    A policy that cannot be built for the scenario (for example a flat
    baseline above its action cap) yields a trace with ``error`` set.
    """
    env = config.environment()
    T = config.horizon
    grid = logging_grid(T, config.log_stride)
    windows = np.diff(np.concatenate([[0], grid])).astype(float)
    workers = threads if threads is not None else config.threads
    meta_base = {
        "seed": config.seed,
        "reps": config.reps,
        "horizon": T,
        "stride": config.log_stride,
        "scenario": config.scenario,
        "scenario_hash": env.content_hash(),
        "version": __version__,
    }

    traces = []
    runnable = []
    for spec in config.policies:
        err = _check_policy(env, spec, T)
        if err is not None:
            empty = np.zeros(0)
            traces.append(RegretTrace(spec.key, spec.name, dict(spec.params), empty, empty, empty, empty, empty,
                                      dict(meta_base), error=err))
        else:
            traces.append(None)
            runnable.append(spec)

    tasks = [(env, spec, T, config.seed, rep, grid) for spec in runnable for rep in range(config.reps)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        results = [_run_task(task) for task in tasks]

    it = iter(results)
    for idx, spec in enumerate(config.policies):
        if traces[idx] is not None:
            continue
        reps = [next(it) for _ in range(config.reps)]
        cum = np.array([r[0] for r in reps]).reshape(config.reps, len(grid))
        hits = np.array([r[1] for r in reps]).reshape(config.reps, len(grid))
        std = cum.std(axis=0, ddof=1) if config.reps > 1 else np.zeros(len(grid))
        freq = hits.mean(axis=0) / windows if len(grid) else np.zeros(0)
        final = cum[:, -1] if len(grid) else np.zeros(config.reps)
        traces[idx] = RegretTrace(
            label=spec.key,
            policy=spec.name,
            params=dict(spec.params),
            t=grid.copy(),
            mean_regret=cum.mean(axis=0),
            std_regret=std,
            optimal_action_freq=freq,
            final_regret=final,
            metadata=dict(meta_base),
        )
    return traces
