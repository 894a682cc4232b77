"""Built-in benchmark environments."""
from __future__ import annotations

from ..env import BERNOULLI, GAUSSIAN, ArmSpec, Environment

BENCH_MEANS = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1)
BENCH_CAPACITIES = (2, 4, 3, 3, 2, 1, 3, 4, 2)
BENCH_PLAYS = 7

# Two 5G and eighteen 4G base stations: round-trip time (100 ms), throughput (100 Mbps).
BASE_STATION_RTT = (
    1.2, 1.1, 4.2, 4.9, 4.5, 3.4, 5.0, 4.2, 5.1, 3.9,
    4.8, 5.7, 3.7, 4.7, 3.2, 5.1, 4.4, 5.1, 4.9, 4.1,
)
BASE_STATION_THR = (
    8.2, 8.1, 1.2, 1.2, 1.4, 1.1, 1.3, 1.2, 1.1, 1.4,
    1.0, 1.1, 1.2, 1.0, 1.3, 1.2, 1.0, 1.1, 1.3, 1.2,
)
BASE_STATION_PLAYS = 18


class UnknownScenarioError(KeyError):
    def __str__(self):
        return f"unknown scenario {self.args[0]!r}; available: {', '.join(SCENARIOS)}"


def _bernoulli9():
    return Environment.from_vectors(BENCH_MEANS, BENCH_CAPACITIES, BENCH_PLAYS, BERNOULLI)


def _gaussian9():
    return Environment.from_vectors(BENCH_MEANS, BENCH_CAPACITIES, BENCH_PLAYS, GAUSSIAN, 0.5)


def _bs20():
    # Several 4G stations share an RTT, hence equal means; none of them is optimal.
    arms = [ArmSpec(1.0 / rtt, int(round(thr)), BERNOULLI) for rtt, thr in zip(BASE_STATION_RTT, BASE_STATION_THR)]
    return Environment(tuple(arms), BASE_STATION_PLAYS, allow_ties=True)


SCENARIOS = {
    "bernoulli9": _bernoulli9,
    "gaussian9": _gaussian9,
    "bs20": _bs20,
}


def builtin_scenario(name: str) -> Environment:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise UnknownScenarioError(name) from None
