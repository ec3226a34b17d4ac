import pytest

from minorfind.graph import Graph


@pytest.fixture
def path3() -> Graph:
    return Graph(3, 2, [(0, 1), (1, 2)])


@pytest.fixture
def k2() -> Graph:
    """Two vertices, one edge, degree bound 2 (the lazy mover has an empty slot)."""
    return Graph(2, 2, [(0, 1)])


def random_connected(n: int, d: int, m: int, seed: int) -> Graph:
    """Random connected bounded-degree test graph."""
    from minorfind.generators import random_connected_graph
    g = random_connected_graph(n, d, m, seed)
    assert _connected(g)
    return g


def _connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.adjacency(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n
