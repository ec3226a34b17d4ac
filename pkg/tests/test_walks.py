import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from conftest import random_connected
from minorfind.generators import random_bounded_graph
from minorfind.graph import Graph, GraphError, QueryLedger, complete_graph
from minorfind.walks import (DistVec, ReturningVec, WalkPath, derive_rng,
                             evolve, lazy_step, lazy_walk, lazy_walk_batch,
                             restricted_evolution, returning_mass_lower_bound,
                             returning_matrix, returning_matrix_power,
                             returning_product_identity, returning_vector,
                             returning_walk_sample, transition_matrix,
                             walk_distribution)


# -- the one-step operator ----------------------------------------------------

def test_isolated_vertex_stays():
    g = Graph(1, 2, [])
    rng = np.random.default_rng(0)
    assert all(lazy_step(g, 0, rng) == 0 for _ in range(50))


def test_k2_one_step_distribution(k2):
    # hand enumeration with d=2: stay 1/2, draw slot 1 -> move (1/4),
    # draw slot 2 -> empty, stay (1/4)
    dist = walk_distribution(k2, 0, 1)
    assert np.allclose(dist.values, [0.75, 0.25])


def test_k2_degree_one_moves_half_the_time():
    tight = Graph(2, 1, [(0, 1)])
    dist = walk_distribution(tight, 0, 1)
    assert np.allclose(dist.values, [0.5, 0.5])


def test_regular_graph_preserves_uniform():
    g = complete_graph(5)
    uniform = np.full(5, 0.2)
    assert np.allclose(evolve(g, uniform, 1), uniform)


def test_transition_matrix_symmetric_doubly_stochastic():
    g = random_connected(12, 4, 18, 3)
    mat = transition_matrix(g).toarray()
    assert np.allclose(mat, mat.T)
    assert np.allclose(mat.sum(axis=0), 1.0)
    assert np.allclose(mat.sum(axis=1), 1.0)


# -- exact distributions --------------------------------------------------------

def test_distribution_t0_is_indicator(path3):
    dist = walk_distribution(path3, 1, 0)
    assert dist[1] == 1.0 and dist.l1() == 1.0


@settings(max_examples=20, deadline=None)
@given(hs.integers(min_value=2, max_value=25), hs.integers(min_value=0, max_value=12),
       hs.integers(min_value=0, max_value=300))
def test_distribution_conserves_mass(n, t, seed):
    g = random_bounded_graph(n, 4, 2 * n, seed)
    dist = walk_distribution(g, seed % n, t)
    assert abs(dist.l1() - 1.0) <= 1e-12
    assert np.all(dist.values >= 0)


def test_walk_empirical_endpoints_match_exact():
    g = Graph(5, 3, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])
    t, trials = 4, 100_000
    exact = walk_distribution(g, 0, t).values
    rng = derive_rng(123)
    ends = lazy_walk_batch(g, np.zeros(trials, dtype=np.int64), t, rng)[:, -1]
    counts = np.bincount(ends, minlength=5)
    for v in range(5):
        sigma = np.sqrt(trials * exact[v] * (1 - exact[v]))
        assert abs(counts[v] - trials * exact[v]) <= 4 * sigma + 1


# -- sampled walks ----------------------------------------------------------------

def test_walk_length_zero(path3):
    path = lazy_walk(path3, 2, 0, np.random.default_rng(1))
    assert path.vertices.tolist() == [2]


def test_walk_same_seed_same_path(path3):
    a = lazy_walk(path3, 0, 30, derive_rng(9, 1))
    b = lazy_walk(path3, 0, 30, derive_rng(9, 1))
    assert a == b


def test_walk_consistency(path3):
    path = lazy_walk(path3, 0, 50, np.random.default_rng(3))
    assert path.check_consistent(path3)


def test_batch_matches_ledger_on_regular_graph():
    # on a d-regular graph every non-lazy draw moves, so queries equal moves
    g = complete_graph(6)
    led = QueryLedger()
    paths = lazy_walk_batch(g, np.zeros(200, dtype=np.int64), 40, derive_rng(4), led)
    moves = int((paths[:, 1:] != paths[:, :-1]).sum())
    assert led.neighbor_queries == moves


def test_batch_rows_are_valid_walks():
    g = random_connected(10, 4, 15, 1)
    paths = lazy_walk_batch(g, np.arange(10, dtype=np.int64), 20, derive_rng(2))
    for row in paths:
        assert WalkPath(row).check_consistent(g)


def test_walkpath_views():
    p = WalkPath([3, 3, 4, 5])
    assert p.length == 3
    assert p.at(2) == 4
    assert p.suffix(2).tolist() == [4, 5]
    assert p.step_edges() == [(3, 4), (4, 5)]


# -- returning vectors -------------------------------------------------------------

def test_returning_full_set_equals_distribution(path3):
    rv = returning_vector(path3, [0, 1, 2], 0, 2, 1)
    dist = walk_distribution(path3, 0, 4)
    assert np.allclose(rv.values, dist.values)


def test_returning_single_vertex_graph():
    g = Graph(1, 2, [])
    rv = returning_vector(g, [0], 0, 3, 2)
    assert rv.values.tolist() == [1.0]


def test_returning_requires_source_in_subset(path3):
    with pytest.raises(GraphError):
        returning_vector(path3, [0, 2], 1, 0, 1)


def brute_force_returning(g, subset, s, i, ell):
    """Oracle: enumerate every lazy-step choice sequence explicitly.

    Each step branches into 1 + d outcomes (stay, or draw each slot with
    probability 1/(2d)); walks that miss the subset at a multiple of ell
    contribute nothing.
    """
    total_len = (2 ** i) * ell
    probs = {s: 1.0} if s in subset else {}
    member = set(subset)
    for step in range(1, total_len + 1):
        nxt: dict[int, float] = {}
        for v, p in probs.items():
            nxt[v] = nxt.get(v, 0.0) + p / 2.0
            for slot in range(1, g.d + 1):
                row = g.adjacency(v)
                target = row[slot - 1] if slot <= len(row) else v
                nxt[target] = nxt.get(target, 0.0) + p / (2.0 * g.d)
        if step % ell == 0:
            nxt = {v: p for v, p in nxt.items() if v in member}
        probs = nxt
    return np.array([probs.get(v, 0.0) for v in sorted(member)])


def test_returning_vector_against_step_enumeration():
    c4 = Graph(4, 2, [(0, 1), (1, 2), (2, 3), (0, 3)])
    rv = returning_vector(c4, [0, 2], 0, 0, 1)
    assert np.allclose(rv.values, brute_force_returning(c4, [0, 2], 0, 0, 1), atol=1e-12)
    g = random_connected(8, 3, 10, 5)
    subset = [0, 2, 3, 6]
    rv = returning_vector(g, subset, 2, 1, 2)
    assert np.allclose(rv.values, brute_force_returning(g, subset, 2, 1, 2), atol=1e-12)


def test_returning_matrix_agrees_with_vector():
    g = random_connected(12, 4, 20, 11)
    subset = sorted({0, 1, 4, 7, 9, 11})
    base = returning_matrix(g, subset, 2)
    for i in range(3):
        power = returning_matrix_power(base, i)
        for col, s in enumerate(subset):
            rv = returning_vector(g, subset, s, i, 2)
            assert np.allclose(power[:, col], rv.values, atol=1e-12)


def test_returning_symmetry():
    g = random_connected(15, 4, 24, 2)
    subset = [1, 3, 5, 8, 13]
    for i in range(2):
        vec_a = returning_vector(g, subset, 3, i, 1)
        vec_b = returning_vector(g, subset, 8, i, 1)
        assert abs(vec_a.entry(8) - vec_b.entry(3)) <= 1e-12


def test_product_identity_reduces_to_walk_symmetry(path3):
    # R = V, i = 0: p_{s,2l}(u) = p_{s,l} . p_{u,l}
    lhs, rhs = returning_product_identity(path3, [0, 1, 2], 0, 2, 0, 1)
    pl_s = walk_distribution(path3, 0, 1).values
    pl_u = walk_distribution(path3, 2, 1).values
    assert abs(lhs - walk_distribution(path3, 0, 2)[2]) <= 1e-15
    assert abs(rhs - float(pl_s @ pl_u)) <= 1e-15


def test_product_identity_self_dot(path3):
    lhs, rhs = returning_product_identity(path3, [0, 1], 0, 0, 1, 1)
    q = returning_vector(path3, [0, 1], 0, 1, 1)
    assert abs(rhs - q.l2_squared()) <= 1e-15
    assert abs(lhs - rhs) <= 1e-10


def test_mass_bound_full_set(path3):
    avg, bound = returning_mass_lower_bound(path3, [0, 1, 2], 2, 1)
    assert abs(avg - 1.0) <= 1e-12 and bound == 1.0


def test_mass_bound_cycle_missing_one():
    from minorfind.graph import cycle_graph
    c6 = cycle_graph(6)
    avg, bound = returning_mass_lower_bound(c6, [0, 1, 2, 3, 4], 1, 2)
    assert avg >= bound - 1e-12


# -- sampled returning walks ---------------------------------------------------------

def test_returning_sample_full_set_always_true(path3):
    rng = derive_rng(0)
    for _ in range(20):
        _, flag = returning_walk_sample(path3, [0, 1, 2], 0, 1, 1, rng)
        assert flag


def test_returning_sample_isolated_singleton():
    g = Graph(3, 2, [(1, 2)])
    path, flag = returning_walk_sample(g, [0], 0, 2, 1, derive_rng(1))
    assert flag and set(path.vertices.tolist()) == {0}


def test_returning_sample_frequency_matches_l1():
    g = random_connected(8, 3, 10, 4)
    subset = [0, 1, 3, 5, 6]
    exact = returning_vector(g, subset, 0, 1, 1).l1()
    rng = derive_rng(77)
    trials = 20_000
    hits = sum(returning_walk_sample(g, subset, 0, 1, 1, rng)[1] for _ in range(trials))
    sigma = np.sqrt(trials * exact * (1 - exact))
    assert abs(hits - trials * exact) <= 4 * sigma + 1


# -- invariants -----------------------------------------------------------------------

def test_infinity_norm_never_increases():
    g = random_connected(14, 4, 22, 8)
    subset = [0, 2, 5, 9, 12]
    rng = np.random.default_rng(0)
    x = rng.random(14)
    prev = restricted_evolution(g, subset, x, 0, 2).max()
    for steps in range(1, 9):
        cur = restricted_evolution(g, subset, x, steps, 2).max()
        assert cur <= prev + 1e-12
        prev = cur


def test_distvec_rejects_bad_mass():
    with pytest.raises(ValueError):
        DistVec(np.array([0.8, 0.5]))
    with pytest.raises(ValueError):
        DistVec(np.array([-0.1, 0.5]))


def test_returning_vec_normalize():
    rv = ReturningVec((0, 2), np.array([0.3, 0.1]), 0, 1, 1)
    dist = rv.normalize()
    assert np.allclose(dist.values, [0.75, 0.25])
    with pytest.raises(ValueError):
        ReturningVec((0, 2), np.array([0.0, 0.0]), 0, 1, 1).normalize()


def test_derive_rng_schedule_independence():
    a = derive_rng(42, 3, 1).random(5)
    b = derive_rng(42, 3, 1).random(5)
    c = derive_rng(42, 3, 2).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_returning_vec_csv_rows(path3):
    rv = returning_vector(path3, [0, 2], 0, 0, 1)
    rows = rv.to_csv_rows()
    assert [v for v, _ in rows] == [0, 2]
    assert all(isinstance(p, float) for _, p in rows)
