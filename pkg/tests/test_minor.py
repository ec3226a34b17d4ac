import itertools

import numpy as np
import pytest

from minorfind.generators import grid, random_bounded_graph
from minorfind.graph import (Graph, GraphError, complete_bipartite,
                             complete_graph, cycle_graph, path_graph)
from minorfind.minor import (MinorEmbedding,forbidden_minor_certificate,
                             has_minor, has_minor_bruteforce, pattern_k5,
                             pattern_k33, read_certificate,
                             validate_embedding, write_certificate)


def petersen() -> Graph:
    return Graph(10, 3, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6),
                         (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (9, 6), (6, 8),
                         (8, 5)])


def wagner() -> Graph:
    return Graph(8, 3, [(i, (i + 1) % 8) for i in range(8)]
                 + [(i, i + 4) for i in range(4)])


# -- basic decisions ----------------------------------------------------------------

def test_identity_embedding():
    k5 = pattern_k5()
    emb = has_minor(k5, k5)
    assert emb is not None
    assert validate_embedding(k5, k5, emb) == []
    assert all(len(s) == 1 for s in emb.branch_sets.values())


def test_grid_has_no_kuratowski_minor():
    g = grid(10, 10)
    assert has_minor(g, pattern_k5()) is None
    assert has_minor(g, pattern_k33()) is None


def test_petersen_contains_k5():
    emb = has_minor(petersen(), pattern_k5())
    assert emb is not None
    assert validate_embedding(petersen(), pattern_k5(), emb) == []
    assert has_minor_bruteforce(petersen(), pattern_k5()) is not None


def test_k33_plus_edge_contains_k33():
    g = Graph(6, 4, list(pattern_k33().edges()) + [(0, 1)])
    emb = has_minor(g, pattern_k33())
    assert emb is not None
    assert validate_embedding(g, pattern_k33(), emb) == []


def test_k4_contains_k3():
    assert has_minor(complete_graph(4), complete_graph(3)) is not None
    assert has_minor_bruteforce(complete_graph(4), complete_graph(3)) is not None


def test_c4_contains_k3_by_contraction():
    # a cycle of any length contracts to a triangle; both engines agree
    c4 = cycle_graph(4)
    a = has_minor(c4, complete_graph(3))
    b = has_minor_bruteforce(c4, complete_graph(3))
    assert a is not None and b is not None
    assert validate_embedding(c4, complete_graph(3), a) == []


def test_wagner_graph_is_k5_free_but_not_planar():
    v8 = wagner()
    assert has_minor(v8, pattern_k5()) is None
    assert has_minor_bruteforce(v8, pattern_k5()) is None
    assert has_minor(v8, pattern_k33()) is not None


def test_too_small_patterns():
    assert has_minor(path_graph(3), path_graph(4)) is None
    assert has_minor(complete_graph(3), complete_graph(4)) is None
    with pytest.raises(GraphError):
        has_minor(complete_graph(3), Graph(0, 1, []))


def test_pattern_without_edges_needs_enough_vertices():
    dots = Graph(3, 1, [])
    host = path_graph(3)
    emb = has_minor(host, dots)
    assert emb is not None and len(emb.branch_sets) == 3
    assert has_minor(path_graph(2), dots) is None


def test_disconnected_pattern():
    two_triangles = Graph(6, 2, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    host = Graph(7, 2, [(0, 1), (1, 2), (0, 2), (4, 5), (5, 6), (4, 6)])
    emb = has_minor(host, two_triangles)
    assert emb is not None
    assert validate_embedding(host, two_triangles, emb) == []
    assert has_minor(cycle_graph(6), two_triangles) is None


def test_minor_monotone_under_supergraph():
    g = random_bounded_graph(9, 4, 12, 3)
    h = complete_graph(3)
    if has_minor(g, h) is not None:
        bigger = Graph(9, 5, list(g.edges()) + [(0, 8) if not g.has_edge(0, 8) else (1, 8)])
        assert has_minor(bigger, h) is not None


# -- embedding validation --------------------------------------------------------------

def test_validate_catches_overlap():
    k5 = pattern_k5()
    emb = has_minor(k5, k5)
    sets = dict(emb.branch_sets)
    sets[0] = sets[1]
    bad = MinorEmbedding(k5, sets, emb.edge_witnesses)
    assert any("disjointness" in p for p in validate_embedding(k5, k5, bad))


def test_validate_catches_disconnected_branch_set():
    g = path_graph(4)
    emb = MinorEmbedding(complete_graph(2),
                         {0: frozenset({0, 3}), 1: frozenset({1})},
                         {(0, 1): (0, 1)})
    assert any("connectivity" in p for p in validate_embedding(g, complete_graph(2), emb))


def test_validate_catches_fake_witness():
    g = path_graph(4)
    emb = MinorEmbedding(complete_graph(2),
                         {0: frozenset({0}), 1: frozenset({3})},
                         {(0, 1): (0, 3)})
    assert any("witness" in p for p in validate_embedding(g, complete_graph(2), emb))


# -- oracle agreement -------------------------------------------------------------------

def all_graphs_up_to_iso(n: int):
    """Canonical representatives of all graphs on exactly n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen = set()
    for bits in range(1 << len(pairs)):
        edges = [pairs[j] for j in range(len(pairs)) if (bits >> j) & 1]
        canon = min(
            tuple(sorted((min(p[u], p[v]), max(p[u], p[v])) for u, v in edges))
            for p in perms
        )
        if canon in seen:
            continue
        seen.add(canon)
        yield Graph(n, max(n - 1, 1), list(canon))


def test_agreement_all_graphs_on_five_vertices():
    patterns = [complete_graph(3), cycle_graph(4), complete_graph(4), path_graph(4)]
    count = 0
    for g in all_graphs_up_to_iso(5):
        for h in patterns:
            fast = has_minor(g, h)
            brute = has_minor_bruteforce(g, h)
            assert (fast is None) == (brute is None), (list(g.edges()), list(h.edges()))
            count += 1
    assert count > 100


def test_agreement_random_sweep():
    rng = np.random.default_rng(2024)
    patterns = [complete_graph(4), complete_bipartite(2, 3), pattern_k5()]
    for trial in range(60):
        n = int(rng.integers(8, 13))
        m = int(rng.integers(n - 2, 2 * n + 4))
        g = random_bounded_graph(n, 6, m, int(rng.integers(0, 10 ** 6)))
        for h in patterns:
            fast = has_minor(g, h)
            brute = has_minor_bruteforce(g, h)
            assert (fast is None) == (brute is None)
            if fast is not None:
                assert validate_embedding(g, h, fast) == []


def test_bruteforce_size_limit():
    with pytest.raises(GraphError):
        has_minor_bruteforce(grid(4, 4), complete_graph(3))


# -- planarity certificates ----------------------------------------------------------------

def test_forbidden_certificate_on_k5():
    emb = forbidden_minor_certificate(complete_graph(5))
    assert emb is not None and emb.pattern.n == 5


def test_forbidden_certificate_on_k33():
    emb = forbidden_minor_certificate(complete_bipartite(3, 3))
    assert emb is not None
    assert emb.pattern == complete_bipartite(3, 3)


def test_forbidden_certificate_absent_on_grid():
    assert forbidden_minor_certificate(grid(8, 8)) is None


def test_forbidden_certificate_prefers_k33():
    # K6 contains both forbidden minors; the search order tries K33 first
    emb = forbidden_minor_certificate(complete_graph(6))
    assert emb is not None and emb.pattern.n == 6


# -- certificate files ------------------------------------------------------------------------

def test_certificate_round_trip(tmp_path):
    g = petersen()
    emb = has_minor(g, pattern_k5())
    path = tmp_path / "cert.txt"
    write_certificate(emb, str(path))
    back = read_certificate(str(path))
    assert validate_embedding(g, pattern_k5(), back) == []
    assert back.branch_sets == emb.branch_sets


def test_certificate_tamper_detected(tmp_path):
    g = petersen()
    emb = has_minor(g, pattern_k5())
    path = tmp_path / "cert.txt"
    write_certificate(emb, str(path))
    text = path.read_text().replace("branch 0:", "branch 0: 99 ")
    path.write_text(text)
    back = read_certificate(str(path))
    assert validate_embedding(g, pattern_k5(), back) != []


def test_certificate_bad_header(tmp_path):
    path = tmp_path / "cert.txt"
    path.write_text("pattern 3 5\ne 0 1\n")
    with pytest.raises(GraphError):
        read_certificate(str(path))
