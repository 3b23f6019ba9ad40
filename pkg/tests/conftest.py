import numpy as np
import pytest

from gcrewe import _accel
from gcrewe.graph import Graph

ACCEPTANCE_LINES = []


def make_graph(edges, labels=None):
    """Graph from label pairs, labels indexed by first appearance."""
    index = {}
    pairs = []
    for a, b in edges:
        pairs.append((index.setdefault(a, len(index)), index.setdefault(b, len(index))))
    if labels:
        for lab in labels:
            index.setdefault(lab, len(index))
    return Graph.from_edges(len(index), pairs, labels=list(index))


@pytest.fixture
def path3():
    return make_graph([("a", "b"), ("b", "c")])


@pytest.fixture
def star4():
    return make_graph([("c", "l1"), ("c", "l2"), ("c", "l3"), ("c", "l4")])


# 12-node fixture for the chained MERGE trace.
TWELVE_EDGES = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (3, 6), (4, 6), (4, 7), (5, 7),
                (6, 8), (6, 9), (8, 9), (8, 10), (8, 11), (9, 10), (9, 11), (7, 10)]
# Hand trace with guide [0, 6].
# Step 1, start 0: neighbors 1,2,3,4 have degrees 2,2,2,3, so L={1,2,3} -> S12 with N = {0,5,6}.
# Step 2, start 6: neighbors 4,8,9,S12 have degrees 3,4,4,3, so L={4,S12} -> S13 = {1,2,3,4}
# with N = ({0,6,7} | {0,5,6}) - L = {0,5,6,7}; S12 is flattened away.
TWELVE_NODES = {0, 5, 6, 7, 8, 9, 10, 11, 13}
TWELVE_TABLE = {13: (1, 2, 3, 4)}
TWELVE_EDGES_AFTER = [(0, 13), (5, 7), (5, 13), (6, 8), (6, 9), (6, 13), (7, 10), (7, 13),
                      (8, 9), (8, 10), (8, 11), (9, 10), (9, 11)]


@pytest.fixture
def twelve():
    return Graph.from_edges(12, TWELVE_EDGES)


@pytest.fixture(params=[True, False], ids=["numba", "numpy"])
def backend(request):
    prev = _accel.use_numba()
    _accel.set_numba(request.param)
    yield request.param
    _accel.set_numba(prev)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
