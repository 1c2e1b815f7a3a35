import itertools

import pytest
from hypothesis import strategies as st

from twoended.graph import Graph, builtin_spec


def flat_graph(n, edges):
    """Arbitrary graph on vertices (0, 0..n-1); all in one layer."""
    return Graph.from_edges([(0, i) for i in range(n)], [((0, a), (0, b)) for a, b in edges])


@st.composite
def connected_graphs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    # random spanning tree, then extra edges
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    pairs = list(itertools.combinations(range(n), 2))
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
    edges |= set(extra)
    return flat_graph(n, sorted(edges))


@pytest.fixture(scope="session")
def gamma():
    return builtin_spec("gamma")


@pytest.fixture(scope="session")
def ladder():
    return builtin_spec("ladder")


@pytest.fixture(scope="session")
def path():
    return builtin_spec("path")


# one line per acceptance criterion, echoed in the terminal summary
CRITERIA: list[str] = []


def record(number, name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail}"
    CRITERIA.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
