"""Single-arm capacity-estimation study and confidence-width comparison."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..capest import UCI, capacity_bounds, phi, rho, width_function
from ..env import BERNOULLI, ArmSpec

ALTERNATING = "alternating"
DEFAULT_MAX_SLOTS = 10**7


@dataclass
class SampleComplexityResult:
    """Per-replication outcome of the single-arm estimation study.

    ``tau`` and ``iota`` are the IE and UE counts when the bounds first met;
    ``slots`` counts both kinds of pulls. Censored runs hold ``-1`` in every
    counter and ``estimate``.
    """

    arm: ArmSpec
    delta: float
    n_plays: int
    tau: np.ndarray
    iota: np.ndarray
    slots: np.ndarray
    estimate: np.ndarray
    censored: np.ndarray

    @property
    def finished(self) -> np.ndarray:
        return ~self.censored

    @property
    def correct(self) -> np.ndarray:
        return self.finished & (self.estimate == self.arm.capacity)

    @property
    def correct_rate(self) -> float:
        """Correct estimates among uncensored replications."""
        n = int(self.finished.sum())
        return float(self.correct.sum() / n) if n else float("nan")

    @property
    def median_tau(self) -> float:
        done = self.tau[self.finished]
        return float(np.median(done)) if len(done) else float("inf")

    def theoretical_bound(self) -> float:
        m, mu = self.arm.capacity, self.arm.mean
        return 49.0 * m * m / (mu * mu) * math.log(2.0 / self.delta)


def _per_load_stream(arm: ArmSpec, rng, size):
    if arm.distribution == BERNOULLI:
        return (rng.random(size) < arm.mean).astype(float).tolist()
    return (arm.mean + math.sqrt(arm.variance) * rng.standard_normal(size)).tolist()


def _one_run(arm, delta, n_plays, rng, max_slots, width):
    m = arm.capacity
    mu_sum = nu_sum = 0.0
    lo, hi = 1, n_plays
    n = 0
    block = []
    j = 0
    while 2 * n < max_slots:
        if j + 2 > len(block):
            block = _per_load_stream(arm, rng, 8192)
            j = 0
        n += 1
        mu_sum += block[j]  # IE: one play, reward X
        nu_sum += m * block[j + 1]  # UE: N >= m plays, reward m X
        j += 2
        lo, hi = capacity_bounds(mu_sum / n, nu_sum / n, n, n, lo, hi, delta, n_plays, width)
        if lo == hi:
            return n, n, 2 * n, lo
    return -1, -1, -1, -1


def sample_complexity_experiment(arm: ArmSpec, delta: float, reps: int, schedule: str = ALTERNATING,
                                 n_plays: int | None = None, seed: int = 0,
                                 max_slots: int = DEFAULT_MAX_SLOTS, width: str = UCI) -> SampleComplexityResult:
    """Estimate one arm's capacity by alternating IE (a = 1) and UE (a = N) pulls.

    ``n_plays`` defaults to ``2 * capacity`` so the UE pull saturates the arm
    while the initial upper bound is strictly above the truth.
    """
    if schedule != ALTERNATING:
        raise ValueError(f"unknown schedule {schedule!r}; only {ALTERNATING!r} is supported")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    N = 2 * arm.capacity if n_plays is None else int(n_plays)
    if N < arm.capacity:
        raise ValueError(f"n_plays {N} is below the capacity {arm.capacity}")
    fn = width_function(width)
    out = np.empty((reps, 4), dtype=np.int64)
    for r in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
        out[r] = _one_run(arm, delta, N, rng, max_slots, fn)
    return SampleComplexityResult(
        arm=arm,
        delta=delta,
        n_plays=N,
        tau=out[:, 0],
        iota=out[:, 1],
        slots=out[:, 2],
        estimate=out[:, 3],
        censored=out[:, 0] < 0,
    )


def default_ci_grid(T: int, points_per_decade: int = 4) -> list:
    decades = math.log10(T)
    n = max(2, int(math.ceil(decades * points_per_decade)) + 1)
    return sorted({max(1, int(round(v))) for v in np.logspace(0, decades, n)})


def ci_width_table(T: int, grid=None) -> list:
    """Rows ``(t, phi(t, 1/T), rho(t, 1/T**2))``."""
    grid = default_ci_grid(T) if grid is None else list(grid)
    rows = []
    for t in grid:
        if t < 1:
            raise ValueError(f"grid entries must be >= 1, got {t}")
        rows.append((int(t), phi(t, 1.0 / T), rho(t, 1.0 / T**2)))
    return rows
