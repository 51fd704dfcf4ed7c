import numpy as np
import pytest

from jellywalk import io as jio
from jellywalk.graph import build_jellyfish


@pytest.fixture
def two_vertex():
    return build_jellyfish(2, [(1, 2)], [1, 2])


@pytest.fixture
def triangle():
    return build_jellyfish(3, [(1, 2), (2, 3), (1, 3)], [1, 2])


@pytest.fixture
def star():
    return build_jellyfish(1, [], [1, 1, 1])


@pytest.fixture(scope="session")
def corpus500():
    return jio.corpus(500, seed=0)


def arrow_id(g, u, v):
    for a in g.arrows:
        if (a.origin, a.target) == (u, v):
            return a.id
    raise KeyError((u, v))


@pytest.fixture
def aid():
    return arrow_id


def random_state(g, rng):
    from jellywalk.walk import AmplitudeState

    return AmplitudeState(
        rng.normal(size=g.n_arrows) + 1j * rng.normal(size=g.n_arrows),
        rng.normal(size=g.m) + 1j * rng.normal(size=g.m),
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
