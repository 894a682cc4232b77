"""Confidence widths, capacity bounds, KL divergences and the KL-UCB index."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .env import BERNOULLI, GAUSSIAN

UCI = "uci"
HFD = "hfd"
WIDTHS = (UCI, HFD)

BISECTION_TOL = 1e-9
BISECTION_MAX_ITER = 200
BUDGET_RESIDUAL_TOL = 1e-7


def phi(x: int, delta: float) -> float:
    """Half-width of the anytime-valid interval after ``x`` samples."""
    if x < 1:
        raise ValueError(f"phi is undefined for x={x}; need at least one sample")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    return math.sqrt((1.0 + 1.0 / x) * math.log(2.0 * math.sqrt(x + 1.0) / delta) / (2.0 * x))


def rho(x: int, delta: float) -> float:
    """Hoeffding half-width ``sqrt(log(2/delta) / 2x)`` for a single sample size."""
    if x < 1:
        raise ValueError(f"rho is undefined for x={x}; need at least one sample")
    if not 0.0 < delta <= 2.0:
        raise ValueError(f"delta must be in (0, 2], got {delta}")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * x))


def width_function(name: str):
    if name == UCI:
        return phi
    if name == HFD:
        return rho
    raise ValueError(f"unknown width function {name!r}; expected one of {WIDTHS}")


@dataclass(frozen=True)
class ArmStatistics:
    mu_hat: float = 0.0
    nu_hat: float = 0.0
    ie_count: int = 0
    ue_count: int = 0
    m_lower: int = 1
    m_upper: int = 1

    @classmethod
    def initial(cls, n_plays: int) -> "ArmStatistics":
        return cls(m_lower=1, m_upper=n_plays)

    def add_individual(self, per_load: float) -> "ArmStatistics":
        n = self.ie_count + 1
        return replace(self, mu_hat=self.mu_hat + (per_load - self.mu_hat) / n, ie_count=n)

    def add_united(self, full_load: float) -> "ArmStatistics":
        n = self.ue_count + 1
        return replace(self, nu_hat=self.nu_hat + (full_load - self.nu_hat) / n, ue_count=n)


def capacity_bounds(mu_hat, nu_hat, ie_count, ue_count, m_lower, m_upper, delta, n_plays, width=phi):
    """Refine the integer capacity interval ``[m_lower, m_upper]``.

    Bounds only move inward. If an arm lacks either sample type, or the
    refined interval would be empty, the previous bounds are returned.
    """
    if ie_count < 1 or ue_count < 1:
        return m_lower, m_upper
    w = width(ie_count, delta) + width(ue_count, delta)
    lo = math.ceil(nu_hat / (mu_hat + w)) if mu_hat + w > 0 else m_lower
    lo = max(lo, m_lower, 1)
    hi = m_upper
    if mu_hat - w > 0:
        hi = min(math.floor(nu_hat / (mu_hat - w)), m_upper, n_plays)
    if lo > hi:
        return m_lower, m_upper
    return lo, hi


def update_capacity_bounds(stats: ArmStatistics, delta: float, n_plays: int, width_fn: str = UCI) -> ArmStatistics:
    lo, hi = capacity_bounds(
        stats.mu_hat,
        stats.nu_hat,
        stats.ie_count,
        stats.ue_count,
        stats.m_lower,
        stats.m_upper,
        delta,
        n_plays,
        width_function(width_fn),
    )
    return replace(stats, m_lower=lo, m_upper=hi)


def capacity_estimate(stats: ArmStatistics) -> int | None:
    if stats.m_lower == stats.m_upper:
        return stats.m_lower
    return None


def kl_bernoulli(p: float, q: float) -> float:
    if p == q:
        return 0.0
    if q <= 0.0 or q >= 1.0:
        if (q <= 0.0 and p <= 0.0) or (q >= 1.0 and p >= 1.0):
            return 0.0
        return math.inf
    out = 0.0
    if p > 0.0:
        out += p * math.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return out


def kl_gaussian(p: float, q: float, variance: float) -> float:
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return (p - q) ** 2 / (2.0 * variance)


def exploration_budget(t: float) -> float:
    """``log t + 4 log log t`` with the inner log floored at 1."""
    lt = math.log(t)
    return lt + 4.0 * math.log(max(lt, 1.0))


def klucb_index(mu_hat: float, n: int, t: float, reward_kind: str = BERNOULLI, variance: float | None = None) -> float:
    if n < 1:
        raise ValueError("KL-UCB index is undefined before the first sample")
    budget = exploration_budget(t)
    if reward_kind == GAUSSIAN:
        if variance is None or variance <= 0:
            raise ValueError("Gaussian KL-UCB index needs a positive variance")
        return mu_hat + math.sqrt(2.0 * variance * budget / n)
    if reward_kind != BERNOULLI:
        raise ValueError(f"unknown reward kind {reward_kind!r}")
    level = budget / n
    p = min(max(mu_hat, 0.0), 1.0)
    if p >= 1.0:
        return 1.0
    # Pinsker: kl(p, q) >= 2 (q - p)^2, so the root lies below p + sqrt(level / 2).
    hi = p + math.sqrt(level / 2.0)
    if hi >= 1.0:
        if kl_bernoulli(p, 1.0) <= level:
            return 1.0
        hi = 1.0
    lo = p
    log = math.log
    # kl(p, q) for p < q < 1, inlined for speed
    a = p * log(p) if p > 0.0 else 0.0
    b = (1.0 - p) * log(1.0 - p)
    mid = 0.5 * (lo + hi)
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        kl = a + b - (p * log(mid) if p > 0.0 else 0.0) - (1.0 - p) * log(1.0 - mid) if mid < 1.0 else math.inf
        # Stop on the q tolerance, but keep going while the budget residual is loose (steep kl near 1).
        if hi - lo <= BISECTION_TOL and n * abs(kl - level) <= BUDGET_RESIDUAL_TOL:
            break
        if kl <= level:
            lo = mid
        else:
            hi = mid
    return mid


def klucb_index_at_least(mu_hat: float, n: int, t: float, threshold: float,
                         reward_kind: str = BERNOULLI, variance: float | None = None) -> bool:
    """Exact test of ``klucb_index(mu_hat, n, t) >= threshold`` without root finding.

    ``n == 0`` is treated as an infinite index.
    """
    if n < 1 or mu_hat >= threshold:
        return True
    return klucb_budget_test(mu_hat, n, exploration_budget(t), threshold, reward_kind, variance)


def klucb_budget_test(mu_hat: float, n: int, budget: float, threshold: float,
                      reward_kind: str = BERNOULLI, variance: float | None = None) -> bool:
    """``klucb_index_at_least`` with a precomputed ``exploration_budget(t)``."""
    if n < 1 or mu_hat >= threshold:
        return True
    if reward_kind == GAUSSIAN:
        return (threshold - mu_hat) ** 2 <= 2.0 * variance * budget / n
    if threshold > 1.0:
        return False
    return n * kl_bernoulli(min(max(mu_hat, 0.0), 1.0), threshold) <= budget


def elimination_radius(tau: int, T: int) -> float:
    """``2 sqrt(2 / tau * max(log(T / tau), 1))``."""
    if tau < 1:
        raise ValueError(f"elimination radius needs tau >= 1, got {tau}")
    return 2.0 * math.sqrt(2.0 / tau * max(math.log(T / tau), 1.0))
