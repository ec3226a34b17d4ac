import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from minorfind.generators import random_bounded_graph
from minorfind.graph import (Graph, GraphError, QueryLedger, induced_subgraph,
                             neighbor_query, read_graph, sample_vertex,
                             validate, write_graph)


def test_neighbor_query_path(path3):
    led = QueryLedger()
    assert neighbor_query(path3, 1, 1, led) == 0
    assert neighbor_query(path3, 1, 2, led) == 2
    assert neighbor_query(path3, 0, 2, led) is None
    assert led.neighbor_queries == 3


def test_neighbor_query_star_ordering():
    star = Graph(5, 4, [(0, 1), (0, 2), (0, 3), (0, 4)])
    assert neighbor_query(star, 0, 3) == 3


def test_neighbor_query_absent_slot_still_charged(path3):
    led = QueryLedger()
    assert neighbor_query(path3, 0, 2, led) is None
    assert led.neighbor_queries == 1


def test_neighbor_query_usage_errors(path3):
    with pytest.raises(GraphError):
        neighbor_query(path3, 3, 1)
    with pytest.raises(GraphError):
        neighbor_query(path3, 0, 0)
    with pytest.raises(GraphError):
        neighbor_query(path3, 0, 3)


def test_adjacency_matches_query_slots(path3):
    for v in range(path3.n):
        hits = [neighbor_query(path3, v, i) for i in range(1, path3.d + 1)]
        assert tuple(h for h in hits if h is not None) == path3.adjacency(v)


def test_sample_vertex_single():
    g = Graph(1, 2, [])
    rng = np.random.default_rng(0)
    assert sample_vertex(g, rng) == 0


def test_sample_vertex_uniform_within_4_sigma():
    g = Graph(4, 2, [])
    rng = np.random.default_rng(7)
    led = QueryLedger()
    draws = 100_000
    counts = np.zeros(4)
    for _ in range(draws):
        counts[sample_vertex(g, rng, led)] += 1
    sigma = np.sqrt(draws * 0.25 * 0.75)
    assert np.all(np.abs(counts - draws * 0.25) < 4 * sigma)
    assert led.vertex_samples == draws


def test_sample_vertex_deterministic():
    g = Graph(10, 2, [])
    a = [sample_vertex(g, np.random.default_rng(5)) for _ in range(20)]
    # identical seed, identical sequence
    rng1, rng2 = np.random.default_rng(5), np.random.default_rng(5)
    assert [sample_vertex(g, rng1) for _ in range(20)] == [sample_vertex(g, rng2) for _ in range(20)]


def test_validate_clean_cycle():
    g = Graph(4, 2, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert validate(g) == []


def test_validate_reports_asymmetry():
    g = Graph(2, 2, [(0, 1)])
    g._neighbors[g._offsets[1]] = 1  # corrupt: 1's row no longer names 0 back
    bad = validate(g)
    assert any("asymmetry at (0,1)" in msg for msg in bad)


def test_validate_degree_bound():
    g = Graph(4, 3, [(0, 1), (0, 2), (0, 3)])
    g.d = 2
    assert any("degree bound" in msg for msg in validate(g))


def test_constructor_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, 2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(3, 2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        Graph(3, 2, [(0, 5)])
    with pytest.raises(GraphError):
        Graph(3, 1, [(0, 1), (1, 2)])


def test_read_triangle(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("3 2 3\n0 1\n1 2\n0 2\n")
    g = read_graph(str(path))
    assert g == Graph(3, 2, [(0, 1), (1, 2), (0, 2)])
    assert g.m == 3 and g.d == 2


def test_read_ignores_comments_and_blanks(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# a triangle\n\n3 2 3\n0 1\n# middle\n1 2\n\n0 2\n")
    assert read_graph(str(path)).m == 3


def test_read_parse_error_cites_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 2 2\n0 1\n1 x\n")
    with pytest.raises(GraphError) as err:
        read_graph(str(path))
    assert ":3:" in str(err.value)


def test_read_rejects_wrong_edge_count(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 2 3\n0 1\n")
    with pytest.raises(GraphError):
        read_graph(str(path))


@settings(max_examples=25, deadline=None)
@given(hs.integers(min_value=1, max_value=30), hs.integers(min_value=0, max_value=400))
def test_write_read_round_trip(tmp_path_factory, n, seed):
    g = random_bounded_graph(n, 4, 2 * n, seed)
    path = tmp_path_factory.mktemp("io") / "g.txt"
    write_graph(g, str(path))
    assert read_graph(str(path)) == g


def test_induced_single_vertex():
    g = Graph(4, 2, [(0, 1), (1, 2), (2, 3)])
    sub, ids = induced_subgraph(g, [2])
    assert sub.n == 1 and sub.m == 0 and ids == [2]


def test_induced_whole_graph_identity():
    g = Graph(5, 3, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    sub, ids = induced_subgraph(g, range(5))
    assert sub == g and ids == list(range(5))


def test_induced_grid_row_is_path():
    from minorfind.generators import grid
    g = grid(3, 3)
    sub, ids = induced_subgraph(g, [0, 1, 2])
    assert sub.n == 3 and sub.m == 2
    assert ids == [0, 1, 2]


def test_induced_charges_b_times_d():
    g = Graph(5, 3, [(0, 1), (1, 2)])
    led = QueryLedger()
    induced_subgraph(g, [0, 1, 2], led)
    assert led.induced_subgraph_queries == 3 * 3


def test_ledger_merge_and_monotonicity():
    a, b = QueryLedger(), QueryLedger()
    a.charge_neighbor(3)
    b.charge_sample(2)
    b.charge_induced(5)
    a.merge(b)
    assert a.snapshot() == {"neighbor_queries": 3, "vertex_samples": 2,
                            "induced_subgraph_queries": 5}
    with pytest.raises(ValueError):
        a.charge_neighbor(-1)
