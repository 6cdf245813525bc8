import pytest

from autotree.graphs import Graph


def hub_edges():
    # 4-cycle 0-1-2-3, triangle 4-5-6, hub vertex 7 adjacent to all of 0..6
    return [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (4, 6)] + [(v, 7) for v in range(7)]


def mirror_edges():
    # axis vertex 0 joining two mirrored branches; each branch is a triangle
    # with a pendant vertex hanging off each corner
    edges = []
    for base in (1, 7):
        clique = [base, base + 2, base + 4]
        edges += [(clique[0], clique[1]), (clique[0], clique[2]), (clique[1], clique[2])]
        edges += [(c, c + 1) for c in clique]
        edges += [(0, c) for c in clique]
    return edges


@pytest.fixture
def hub_graph():
    return Graph(8, hub_edges())


@pytest.fixture
def mirror_graph():
    return Graph(13, mirror_edges())
