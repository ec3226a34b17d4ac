"""Immutable bounded-degree graph with oracle-style access and query accounting.

Vertices are the integers ``0..n-1``.  Each vertex stores its neighbors in
increasing id order; the oracle's "i-th neighbor" is defined by that order so
walk traces are reproducible across runs and machines.  Graphs are simple
(no self-loops, no parallel edges) and symmetric.
"""
from __future__ import annotations

import threading
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs, bad oracle arguments, or parse errors."""


class QueryLedger:
    """Counts oracle calls issued during a run.

    Counters only ever increase.  Increments are lock-protected so walk
    batches may run from several threads; totals for a fixed seed and task
    decomposition are deterministic because every code path charges the
    same amounts regardless of schedule.
    """

    __slots__ = ("neighbor_queries", "vertex_samples", "induced_subgraph_queries", "_lock")

    def __init__(self) -> None:
        self.neighbor_queries = 0
        self.vertex_samples = 0
        self.induced_subgraph_queries = 0
        self._lock = threading.Lock()

    def charge_neighbor(self, count: int = 1) -> None:
        if count < 0:
            raise ValueError("ledger counters are monotone")
        with self._lock:
            self.neighbor_queries += count

    def charge_sample(self, count: int = 1) -> None:
        if count < 0:
            raise ValueError("ledger counters are monotone")
        with self._lock:
            self.vertex_samples += count

    def charge_induced(self, count: int) -> None:
        if count < 0:
            raise ValueError("ledger counters are monotone")
        with self._lock:
            self.induced_subgraph_queries += count

    def merge(self, other: "QueryLedger") -> None:
        """Fold another ledger's totals into this one (associative)."""
        with self._lock:
            self.neighbor_queries += other.neighbor_queries
            self.vertex_samples += other.vertex_samples
            self.induced_subgraph_queries += other.induced_subgraph_queries

    def snapshot(self) -> dict:
        return {
            "neighbor_queries": self.neighbor_queries,
            "vertex_samples": self.vertex_samples,
            "induced_subgraph_queries": self.induced_subgraph_queries,
        }

    def total(self) -> int:
        return self.neighbor_queries + self.vertex_samples + self.induced_subgraph_queries

    def __repr__(self) -> str:
        return (f"QueryLedger(neighbor={self.neighbor_queries}, "
                f"samples={self.vertex_samples}, induced={self.induced_subgraph_queries})")


class Graph:
    """Undirected simple graph with degree bound ``d``, stored in CSR form.

    The object is immutable after construction; callers must not mutate the
    returned arrays.  It is safe to share read-only across threads.
    """

    __slots__ = ("n", "d", "_offsets", "_neighbors", "_cache")

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        if d < 0:
            raise GraphError("degree bound must be nonnegative")
        self.n = int(n)
        self.d = int(d)
        adj: list[list[int]] = [[] for _ in range(self.n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"parallel edge ({key[0]},{key[1]})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        offsets = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            if len(adj[v]) > self.d:
                raise GraphError(f"degree bound exceeded at vertex {v}: "
                                 f"{len(adj[v])} > {self.d}")
            adj[v].sort()
            offsets[v + 1] = offsets[v] + len(adj[v])
        flat = np.empty(int(offsets[-1]), dtype=np.int64)
        for v in range(self.n):
            flat[offsets[v]:offsets[v + 1]] = adj[v]
        self._offsets = offsets
        self._neighbors = flat
        self._cache: dict = {}

    # -- basic queries ------------------------------------------------------

    @property
    def m(self) -> int:
        """Number of edges."""
        return int(self._offsets[-1]) // 2

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self._offsets[v + 1] - self._offsets[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self._offsets)

    def adjacency(self, v: int) -> tuple[int, ...]:
        """Neighbors of ``v`` in increasing id order."""
        self._check_vertex(v)
        return tuple(int(x) for x in self._neighbors[self._offsets[v]:self._offsets[v + 1]])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        row = self._neighbors[self._offsets[u]:self._offsets[u + 1]]
        j = np.searchsorted(row, v)
        return bool(j < len(row) and row[j] == v)

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for w in self._neighbors[self._offsets[u]:self._offsets[u + 1]]:
                if u < w:
                    yield (u, int(w))

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Raw (offsets, neighbors) arrays; treat as read-only."""
        return self._offsets, self._neighbors

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range [0,{self.n})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.d == other.d
                and np.array_equal(self._offsets, other._offsets)
                and np.array_equal(self._neighbors, other._neighbors))

    def __hash__(self) -> int:
        return hash((self.n, self.d, self._neighbors.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, d={self.d}, m={self.m})"


# -- oracle access ----------------------------------------------------------

def neighbor_query(g: Graph, v: int, i: int, ledger: Optional[QueryLedger] = None) -> Optional[int]:
    """Return the i-th neighbor of ``v`` (1-based slot), or None if absent.

    A query is charged whether or not the slot is occupied.  Raises for
    out-of-range ``v`` or ``i``; an empty slot is not an error.
    """
    g._check_vertex(v)
    if not (1 <= i <= g.d):
        raise GraphError(f"neighbor slot {i} out of range [1,{g.d}]")
    if ledger is not None:
        ledger.charge_neighbor()
    lo, hi = g._offsets[v], g._offsets[v + 1]
    if i <= hi - lo:
        return int(g._neighbors[lo + i - 1])
    return None


def sample_vertex(g: Graph, rng: np.random.Generator, ledger: Optional[QueryLedger] = None) -> int:
    """Sample a vertex uniformly at random."""
    if g.n < 1:
        raise GraphError("cannot sample from an empty graph")
    if ledger is not None:
        ledger.charge_sample()
    return int(rng.integers(0, g.n))


def induced_subgraph(g: Graph, vertices: Iterable[int],
                     ledger: Optional[QueryLedger] = None) -> tuple[Graph, list[int]]:
    """Return ``G[B]`` relabeled to 0..|B|-1 plus the map back to original ids.

    Charges ``|B| * d`` neighbor queries: determining the induced subgraph
    means exhausting every adjacency slot of every vertex in B.
    """
    ids = sorted({int(v) for v in vertices})
    for v in ids:
        g._check_vertex(v)
    if ledger is not None:
        ledger.charge_induced(len(ids) * g.d)
    index = {v: j for j, v in enumerate(ids)}
    edges = []
    for v in ids:
        for w in g.adjacency(v):
            if w in index and v < w:
                edges.append((index[v], index[w]))
    return Graph(len(ids), g.d, edges), ids


# -- validation -------------------------------------------------------------

def validate(g: Graph) -> list[str]:
    """Return every invariant violation, empty list when the graph is valid.

    Construction already enforces the invariants, so this mainly guards
    graphs arriving through deserialization or produced by generators.
    """
    violations: list[str] = []
    offsets, flat = g.csr()
    for v in range(g.n):
        row = flat[offsets[v]:offsets[v + 1]]
        if len(row) > g.d:
            violations.append(f"degree bound exceeded at {v}: {len(row)} > {g.d}")
        prev = -1
        for w in row:
            w = int(w)
            if not (0 <= w < g.n):
                violations.append(f"neighbor id out of range at ({v},{w})")
                continue
            if w == v:
                violations.append(f"self-loop at {v}")
            if w == prev:
                violations.append(f"parallel edge ({v},{w})")
            prev = w
            back = flat[offsets[w]:offsets[w + 1]]
            j = np.searchsorted(back, v)
            if not (j < len(back) and back[j] == v):
                violations.append(f"asymmetry at ({v},{w})")
    return violations


# -- file IO ----------------------------------------------------------------
# Format: first non-comment line "n d m"; then m lines "u v" with u < v.
# Blank lines and lines starting with '#' are ignored.

def write_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.d} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_graph(path: str) -> Graph:
    header: Optional[tuple[int, int, int]] = None
    edges: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 3:
                    raise GraphError(f"{path}:{lineno}: expected header 'n d m'")
                try:
                    header = (int(parts[0]), int(parts[1]), int(parts[2]))
                except ValueError:
                    raise GraphError(f"{path}:{lineno}: non-integer header") from None
                continue
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected edge line 'u v'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: non-integer edge") from None
            if not u < v:
                raise GraphError(f"{path}:{lineno}: edges must satisfy u < v")
            edges.append((u, v))
    if header is None:
        raise GraphError(f"{path}: empty graph file")
    n, d, m = header
    if len(edges) != m:
        raise GraphError(f"{path}: header declares {m} edges, found {len(edges)}")
    try:
        return Graph(n, d, edges)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from None


# -- small constructors used throughout tests and the minor module ----------

def complete_graph(r: int) -> Graph:
    return Graph(r, max(r - 1, 0), [(i, j) for i in range(r) for j in range(i + 1, r)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, max(a, b), [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(k, 2, [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)])


def path_graph(k: int) -> Graph:
    return Graph(k, 2 if k > 2 else 1, [(i, i + 1) for i in range(k - 1)])


def from_adjacency(adj: Sequence[Sequence[int]], d: Optional[int] = None) -> Graph:
    """Build a Graph from neighbor lists (symmetry is validated)."""
    n = len(adj)
    for u, row in enumerate(adj):
        for v in row:
            if not (0 <= v < n) or u not in adj[v]:
                raise GraphError(f"asymmetry at ({u},{v})")
    edges = {(min(u, v), max(u, v)) for u, row in enumerate(adj) for v in row}
    dd = d if d is not None else max((len(r) for r in adj), default=0)
    return Graph(n, dd, sorted(edges))
