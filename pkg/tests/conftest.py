import itertools

import numpy as np
import pytest
from hypothesis import settings

from elimdist.graph import Graph

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")


def all_graphs(n):
    """Every labelled simple graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for sel in range(1 << len(pairs)):
        yield Graph(n, [e for i, e in enumerate(pairs) if sel >> i & 1])


def random_graphs(rng, n, count, density=0.5):
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(count):
        yield Graph(n, [e for e in pairs if rng.random() < density])


def graph_from_bits(n, sel):
    pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, [e for i, e in enumerate(pairs) if sel >> i & 1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
