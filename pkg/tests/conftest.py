import numpy as np
import pytest

from mpmabsa.env import Environment
from mpmabsa.harness import builtin_scenario


@pytest.fixture
def bench():
    return builtin_scenario("bernoulli9")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def small_env(means, caps, plays, **kw):
    return Environment.from_vectors(means, caps, plays, **kw)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
