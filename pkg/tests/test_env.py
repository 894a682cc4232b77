"""Environment, reward model and optimal-action oracle."""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpmabsa.env import (
    ArmSpec,
    Environment,
    InfeasibleEnvironmentError,
    InvalidActionError,
    expected_reward,
    instantaneous_regret,
    optimal_action,
    rewards_from_draws,
    sample_feedback,
    validate_action,
)


def all_actions(K, N):
    for bars in itertools.combinations(range(N + K - 1), K - 1):
        cuts = (-1,) + bars + (N + K - 1,)
        yield tuple(cuts[i + 1] - cuts[i] - 1 for i in range(K))


# --- construction -----------------------------------------------------------

def test_rejects_duplicate_means():
    with pytest.raises(InfeasibleEnvironmentError, match="distinct"):
        Environment.from_vectors([0.5, 0.5], [1, 1], 2)


def test_rejects_capacity_above_plays():
    with pytest.raises(InfeasibleEnvironmentError, match="exceeds"):
        Environment.from_vectors([0.5, 0.4], [3, 1], 2)


def test_rejects_total_capacity_below_plays():
    with pytest.raises(InfeasibleEnvironmentError, match="total capacity"):
        Environment.from_vectors([0.5, 0.4], [1, 1], 3)


@pytest.mark.parametrize("mean,dist,var", [(0.0, "bernoulli", None), (1.2, "bernoulli", None),
                                            (0.5, "gaussian", None), (0.5, "gaussian", 0.7),
                                            (0.5, "poisson", None)])
def test_rejects_bad_arm(mean, dist, var):
    with pytest.raises(InfeasibleEnvironmentError):
        ArmSpec(mean, 1, dist, var)


def test_content_hash_tracks_arm_parameters():
    a = Environment.from_vectors([0.9, 0.5], [2, 1], 2)
    b = Environment.from_vectors([0.9, 0.5], [2, 1], 2)
    c = Environment.from_vectors([0.9, 0.51], [2, 1], 2)
    d = Environment.from_vectors([0.9, 0.5], [1, 1], 2)
    assert a.content_hash() == b.content_hash()
    assert len({a.content_hash(), c.content_hash(), d.content_hash()}) == 3


# --- rewards ----------------------------------------------------------------

def test_degenerate_bernoulli_reward_saturates_at_capacity(rng):
    env = Environment((ArmSpec(1.0, 3), ArmSpec(0.5, 2)), 5)
    fb = sample_feedback(env, (5, 0), rng)
    assert fb.rewards == {0: 3.0}


def test_zero_draw_gives_zero_reward():
    env = Environment.from_vectors([0.5, 0.2], [4, 1], 4)
    assert rewards_from_draws(env, (2, 2), [0.0, 1.0]) == {0: 0.0, 1: 1.0}


def test_only_pulled_arms_report_rewards(bench, rng):
    fb = sample_feedback(bench, (2, 4, 1, 0, 0, 0, 0, 0, 0), rng)
    assert set(fb.rewards) == {0, 1, 2}


def test_gaussian_full_load_mean():
    # Monte-Carlo oracle: 10^6 draws of R = 2 X with X ~ N(0.5, 0.5).
    env = Environment.from_vectors([0.5, 0.3], [2, 1], 2, "gaussian", 0.5)
    draws = env.draw(np.random.default_rng(3), size=10**6)
    rewards = 2 * draws[:, 0]
    assert abs(rewards.mean() - 1.0) < 0.01
    assert abs(rewards.var() - 2.0) < 0.02


def test_same_seed_same_feedback(bench):
    actions = [(2, 4, 1, 0, 0, 0, 0, 0, 0), (7, 0, 0, 0, 0, 0, 0, 0, 0), (1, 1, 1, 1, 1, 1, 1, 0, 0)]
    r1, r2 = np.random.default_rng(9), np.random.default_rng(9)
    for a in actions * 5:
        assert sample_feedback(bench, a, r1) == sample_feedback(bench, a, r2)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_bernoulli_rewards_are_zero_or_full_load(seed, data):
    env = Environment.from_vectors([0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1], [2, 4, 3, 3, 2, 1, 3, 4, 2], 7)
    action = data.draw(st.sampled_from(list(all_actions(9, 7))))
    fb = sample_feedback(env, action, np.random.default_rng(seed))
    for k, r in fb.rewards.items():
        assert r in (0.0, float(min(action[k], env.arms[k].capacity)))


# --- actions and expected reward --------------------------------------------

@pytest.mark.parametrize("action", [(1, 1), (2, 1, 0), (3, -1, 0), (1.5, 0.5, 0)])
def test_invalid_actions(action):
    env = Environment.from_vectors([0.5, 0.4, 0.3], [2, 2, 2], 2)
    with pytest.raises(InvalidActionError):
        validate_action(env, action)


def test_expected_reward_benchmark(bench):
    assert expected_reward(bench, (2, 4, 1, 0, 0, 0, 0, 0, 0)) == pytest.approx(5.7, abs=1e-12)


def test_expected_reward_all_plays_on_one_arm():
    env = Environment.from_vectors([0.6, 0.3], [4, 1], 4)
    assert expected_reward(env, (4, 0)) == pytest.approx(4 * 0.6)


def test_expected_reward_capacity_clips():
    env = Environment.from_vectors([0.5, 0.2], [1, 2], 2)
    assert expected_reward(env, (2, 0)) == pytest.approx(0.5)


def test_optimal_action_benchmark(bench):
    assert optimal_action(bench) == ((2, 4, 1, 0, 0, 0, 0, 0, 0), 3)


def test_optimal_action_unit_capacities():
    env = Environment.from_vectors([0.2, 0.9, 0.5, 0.7], [1, 1, 1, 1], 3)
    assert optimal_action(env) == ((0, 1, 1, 1), 3)


def test_optimal_action_single_arm_covers_everything():
    env = Environment.from_vectors([0.9, 0.5], [3, 1], 3)
    assert optimal_action(env) == ((3, 0), 1)


@pytest.mark.parametrize("action,regret", [((7, 0, 0, 0, 0, 0, 0, 0, 0), 3.9), ((2, 5, 0, 0, 0, 0, 0, 0, 0), 0.7)])
def test_instantaneous_regret_examples(bench, action, regret):
    assert instantaneous_regret(bench, action) == pytest.approx(regret, abs=1e-12)


def test_regret_of_optimal_action_is_zero(bench):
    assert instantaneous_regret(bench, optimal_action(bench)[0]) == 0.0


@st.composite
def instances(draw):
    K = draw(st.integers(1, 5))
    N = draw(st.integers(1, 4))
    means = draw(st.lists(st.integers(1, 1000), min_size=K, max_size=K, unique=True))
    caps = draw(st.lists(st.integers(1, N), min_size=K, max_size=K))
    if sum(caps) < N:
        caps[0] = N
    return Environment.from_vectors([m / 1000 for m in means], caps, N)


@settings(max_examples=150, deadline=None)
@given(env=instances())
def test_optimal_action_beats_brute_force(env):
    best, L = optimal_action(env)
    f_best = expected_reward(env, best)
    values = [expected_reward(env, a) for a in all_actions(env.n_arms, env.plays)]
    assert f_best == max(values)
    assert L == sum(1 for a in best if a)
    assert min(f_best - v for v in values) >= 0.0


@settings(max_examples=100, deadline=None)
@given(env=instances(), data=st.data())
def test_expected_reward_monotone_in_plays(env, data):
    action = list(data.draw(st.sampled_from(list(all_actions(env.n_arms, env.plays)))))
    k = data.draw(st.integers(0, env.n_arms - 1))
    base = sum(min(a, m) * mu for a, m, mu in zip(action, env.capacities, env.means))
    action[k] += 1
    more = sum(min(a, m) * mu for a, m, mu in zip(action, env.capacities, env.means))
    assert more >= base
