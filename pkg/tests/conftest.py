import numpy as np
import pytest

from stratmap.graph import DirectedGraph, SymGraph


def sym(labels, edges):
    return SymGraph.from_edges(labels, edges)


@pytest.fixture
def triangle():
    return sym("ABC", [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])


@pytest.fixture
def two_triangles():
    """Triangles {1,2,3} and {4,5,6} joined by the bridge 3-4."""
    return sym(
        "ABCDEF",
        [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0)],
    )


@pytest.fixture
def two_cliques():
    """Two 4-cliques joined by a single unit edge."""
    edges = [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i + 4, j + 4, 1.0) for i in range(4) for j in range(i + 1, 4)]
    edges.append((3, 4, 1.0))
    return sym([f"n{i}" for i in range(8)], edges)


def random_weighted_graph(seed, n=8, p=0.5):
    """Erdos-Renyi graph with integer weights 1..10, isolates removed."""
    from stratmap.graph import remove_isolates

    rng = np.random.default_rng(seed)
    edges = [
        (i, j, float(rng.integers(1, 11)))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    g, _ = remove_isolates(sym([f"n{i}" for i in range(n)], edges))
    return g


def directed(labels, arcs):
    return DirectedGraph.from_arcs(labels, arcs)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
