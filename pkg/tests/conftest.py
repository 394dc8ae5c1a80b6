import random

import pytest

from khcore.fixtures import running_example
from khcore.graph import Graph
from khcore.oracle import random_graph


@pytest.fixture
def running() -> Graph:
    return running_example()


def vid(label: int) -> int:
    """Dense id of running-example vertex v<label>."""
    return label - 1


def er(n: int, p: float, seed: int) -> Graph:
    return random_graph(n, p, random.Random(seed))


def path_graph(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n=n)


def clique(n: int) -> Graph:
    return Graph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], n=n)


def star(leaves: int) -> Graph:
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)], n=leaves + 1)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
