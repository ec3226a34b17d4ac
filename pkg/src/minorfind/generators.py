"""Seeded benchmark families: planar fixtures, far-from-planar instances,
and small minor-free families.

All constructions are deterministic functions of their parameters and
seed, and every output passes graph validation.
"""
from __future__ import annotations

import numpy as np

from .graph import Graph, GraphError

PAIRING_ROUNDS = 10_000


def grid(width: int, height: int) -> Graph:
    """The width x height grid, degree bound 4, row-major vertex ids."""
    if width < 1 or height < 1:
        raise GraphError("grid dimensions must be positive")
    def vid(r: int, c: int) -> int:
        return r * width + c
    edges = []
    for r in range(height):
        for c in range(width):
            if c + 1 < width:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < height:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(width * height, 4, edges)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """A random d-regular simple graph via the pairing model.

    Stubs are shuffled and paired; colliding stubs (self-loops or repeats)
    are thrown back and re-shuffled within the round, as whole-round
    rejection has acceptance probability around exp(-(d*d-1)/4) and never
    terminates for d beyond ~5.  Rounds that stall restart from scratch;
    after PAIRING_ROUNDS restarts the construction fails.
    """
    if n * d % 2 != 0:
        raise GraphError("n*d must be even for a d-regular graph")
    if not 0 <= d < n:
        raise GraphError("need 0 <= d < n")
    rng = np.random.default_rng(seed)

    def suitable(edges: set, counts: dict) -> bool:
        if not counts:
            return True
        stubs = list(counts)
        for i, s1 in enumerate(stubs):
            for s2 in stubs[i + 1:]:
                if (min(s1, s2), max(s1, s2)) not in edges:
                    return True
        return False

    for _ in range(PAIRING_ROUNDS):
        edges: set[tuple[int, int]] = set()
        stubs = np.repeat(np.arange(n), d)
        failed = False
        while len(stubs):
            rng.shuffle(stubs)
            leftover: dict[int, int] = {}
            for k in range(0, len(stubs) - 1, 2):
                u, v = int(stubs[k]), int(stubs[k + 1])
                key = (min(u, v), max(u, v))
                if u != v and key not in edges:
                    edges.add(key)
                else:
                    leftover[u] = leftover.get(u, 0) + 1
                    leftover[v] = leftover.get(v, 0) + 1
            if not suitable(edges, leftover):
                failed = True
                break
            stubs = np.array([v for v, c in leftover.items() for _ in range(c)],
                             dtype=np.int64)
        if not failed:
            return Graph(n, d, sorted(edges))
    raise GraphError(f"pairing model failed after {PAIRING_ROUNDS} rounds")


def planar_plus_matching(n: int, extra: int, seed: int) -> Graph:
    """A near-square grid on n vertices plus ``extra`` random matching edges.

    The added edges form a partial matching (each vertex gains at most one),
    so deleting them restores planarity: the distance to planar is at most
    ``extra`` edges.  Degree bound is 5 (grid 4 plus one chord).
    """
    if n < 1:
        raise GraphError("need at least one vertex")
    if extra < 0 or 2 * extra > n:
        raise GraphError("matching size must satisfy 0 <= 2*extra <= n")
    width = int(np.sqrt(n))
    while n % width:
        width -= 1
    base = grid(width, n // width)
    rng = np.random.default_rng(seed)
    edges = list(base.edges())
    existing = set(edges)
    used: set[int] = set()
    added = 0
    attempts = 0
    while added < extra:
        attempts += 1
        if attempts > 200 * (extra + 1):
            raise GraphError("could not place the requested matching edges")
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        if u == v or u in used or v in used:
            continue
        key = (min(u, v), max(u, v))
        if key in existing:
            continue
        existing.add(key)
        edges.append(key)
        used.update(key)
        added += 1
    return Graph(n, 5, edges)


def random_tree(n: int, seed: int, d: int = 8) -> Graph:
    """A random recursive tree with degree cap d."""
    if n < 1:
        raise GraphError("need at least one vertex")
    rng = np.random.default_rng(seed)
    edges = []
    degree = [0] * n
    for v in range(1, n):
        while True:
            u = int(rng.integers(0, v))
            if degree[u] < d - 1 or (degree[u] < d and v == n - 1):
                break
        edges.append((u, v))
        degree[u] += 1
        degree[v] += 1
    return Graph(n, d, edges)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, 2, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def fan_strip(n: int) -> Graph:
    """A maximal-outerplanar strip: a path with skip-one chords, degree <= 4.

    Outerplanar, hence free of K4 and K_{2,3} minors, without the unbounded
    hub degree of the classic fan.
    """
    if n < 2:
        raise GraphError("fan strip needs at least 2 vertices")
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, i + 2) for i in range(n - 2)]
    return Graph(n, 4, edges)


def circular_ladder(n: int) -> Graph:
    """The prism on 2k vertices (two concentric cycles plus rungs), d = 3.

    Planar and 3-regular: contains a K4 minor (for k >= 3) but never K5.
    """
    if n < 6 or n % 2:
        raise GraphError("circular ladder needs an even vertex count >= 6")
    k = n // 2
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(n, 3, sorted((min(u, v), max(u, v)) for u, v in edges))


MINOR_FREE_KINDS = ("tree", "cycle", "fan", "ladder")


def minor_free_family(kind: str, n: int, seed: int = 0) -> Graph:
    """Named families of graphs avoiding small minors.

    tree: no cycle at all (K3-minor-free); cycle: K4-minor-free;
    fan: outerplanar strip (K4- and K_{2,3}-minor-free);
    ladder: circular ladder, planar (K5- and K_{3,3}-minor-free).
    """
    if kind == "tree":
        return random_tree(n, seed)
    if kind == "cycle":
        return cycle(n)
    if kind == "fan":
        return fan_strip(n)
    if kind == "ladder":
        return circular_ladder(n if n % 2 == 0 else n + 1)
    raise GraphError(f"unknown family '{kind}'; choose from {MINOR_FREE_KINDS}")


def random_connected_graph(n: int, d: int, m: int, seed: int) -> Graph:
    """A connected random graph with degree bound d and about m edges:
    a random recursive tree plus uniform extra edges (test fixture)."""
    if m < n - 1:
        m = n - 1
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    degree = [0] * n
    for v in range(1, n):
        candidates = [u for u in range(v) if degree[u] < d - 1] or \
                     [u for u in range(v) if degree[u] < d]
        u = int(candidates[int(rng.integers(0, len(candidates)))])
        edges.add((u, v))
        degree[u] += 1
        degree[v] += 1
    attempts = 0
    while len(edges) < m and attempts < 60 * (m + 1):
        attempts += 1
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        if u == v or degree[u] >= d or degree[v] >= d:
            continue
        key = (min(u, v), max(u, v))
        if key in edges:
            continue
        edges.add(key)
        degree[u] += 1
        degree[v] += 1
    return Graph(n, d, sorted(edges))


def random_bounded_graph(n: int, d: int, m: int, seed: int) -> Graph:
    """A random simple graph with n vertices, about m edges, degree <= d.

    Test fixture: uniform edge proposals, rejected when they violate the
    degree bound or duplicate an edge.
    """
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    degree = [0] * n
    attempts = 0
    while len(edges) < m and attempts < 50 * (m + 1):
        attempts += 1
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        if u == v or degree[u] >= d or degree[v] >= d:
            continue
        key = (min(u, v), max(u, v))
        if key in edges:
            continue
        edges.add(key)
        degree[u] += 1
        degree[v] += 1
    return Graph(n, d, sorted(edges))
