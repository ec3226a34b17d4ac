"""Exact H-minor containment for small patterns, with certificates.

``has_minor`` is a branch-and-bound over partial branch-set assignments:
H-vertices are placed most-constrained-first (seeded by maximum degree),
each receiving a connected set of unused G-vertices that touches every
already-placed neighbor's boundary; candidate roots go by decreasing
G-degree.  Absence proofs stay tractable at desk scale through
suppression of degree-at-most-2 vertices (sound whenever H has minimum
degree 3, e.g. K5 and K_{3,3}), a planarity cut (a planar graph contains
no nonplanar minor), per-block search for 2-connected patterns, and
iterative deepening on the largest branch-set size.

``has_minor_bruteforce`` is the independent oracle: plain exhaustive
enumeration for graphs on at most 12 vertices, sharing none of those
shortcuts.  Every returned embedding is validated before it leaves this
module.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from .graph import Graph, GraphError, complete_bipartite, complete_graph

NODE_CHECK_INTERVAL = 4096


class SearchBudgetExceeded(RuntimeError):
    """Raised when a deadline passed to has_minor expires mid-search."""


@dataclass(frozen=True)
class MinorEmbedding:
    """A branch-set model certifying that ``pattern`` is a minor of G."""

    pattern: Graph
    branch_sets: dict[int, frozenset[int]]
    edge_witnesses: dict[tuple[int, int], tuple[int, int]]

    def vertices_used(self) -> set[int]:
        out: set[int] = set()
        for s in self.branch_sets.values():
            out |= s
        return out


def validate_embedding(g: Graph, h: Graph, emb: MinorEmbedding) -> list[str]:
    """Every invariant of the branch-set model; empty list when valid."""
    problems: list[str] = []
    if emb.pattern.n != h.n or set(emb.pattern.edges()) != set(h.edges()):
        problems.append("pattern mismatch between embedding and H")
    if set(emb.branch_sets) != set(range(h.n)):
        problems.append("branch sets do not cover the H-vertex set")
        return problems
    seen: set[int] = set()
    for x in range(h.n):
        bset = emb.branch_sets[x]
        if not bset:
            problems.append(f"empty branch set for H-vertex {x}")
            continue
        for v in bset:
            if not (0 <= v < g.n):
                problems.append(f"branch set {x} contains out-of-range vertex {v}")
        if seen & bset:
            problems.append(f"disjointness violated at branch set {x}")
        seen |= bset
        if not _is_connected_in(g, bset):
            problems.append(f"connectivity violated in branch set {x}")
    for x, y in h.edges():
        key = (x, y) if (x, y) in emb.edge_witnesses else (y, x)
        if key not in emb.edge_witnesses:
            problems.append(f"missing witness for H-edge ({x},{y})")
            continue
        gu, gv = emb.edge_witnesses[key]
        if not (0 <= gu < g.n and 0 <= gv < g.n) or not g.has_edge(gu, gv):
            problems.append(f"witness ({gu},{gv}) for H-edge ({x},{y}) is not a G-edge")
            continue
        a, b = key
        if gu not in emb.branch_sets[a] or gv not in emb.branch_sets[b]:
            problems.append(f"witness ({gu},{gv}) endpoints not in branch sets ({a},{b})")
    return problems


def _is_connected_in(g: Graph, vertices: frozenset[int] | set[int]) -> bool:
    if not vertices:
        return False
    vs = set(vertices)
    start = next(iter(vs))
    stack, seen = [start], {start}
    while stack:
        v = stack.pop()
        for w in g.adjacency(v):
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


# -- kernelization -------------------------------------------------------------
# Suppress degree-<=2 vertices while tracking, for every kernel edge, the
# g-path it represents.  Sound for H of minimum degree >= 3.

class _Kernel:
    def __init__(self, g: Graph):
        self.g = g
        self.alive = set(range(g.n))
        self.adj: dict[int, dict[int, list[int]]] = {
            v: {w: [v, w] for w in g.adjacency(v)} for v in range(g.n)
        }

    def reduce(self) -> None:
        queue = [v for v in self.alive if len(self.adj[v]) <= 2]
        while queue:
            v = queue.pop()
            if v not in self.alive or len(self.adj[v]) > 2:
                continue
            nbrs = list(self.adj[v])
            if len(nbrs) == 0:
                self.alive.discard(v)
            elif len(nbrs) == 1:
                w = nbrs[0]
                del self.adj[w][v]
                self.alive.discard(v)
                del self.adj[v]
                if len(self.adj[w]) <= 2:
                    queue.append(w)
                continue
            else:
                a, b = nbrs
                # stored paths run from v outward; joined runs a .. v .. b
                joined = list(reversed(self.adj[v][a])) + self.adj[v][b][1:]
                self.alive.discard(v)
                del self.adj[a][v]
                del self.adj[b][v]
                del self.adj[v]
                if a != b and b not in self.adj[a]:
                    self.adj[a][b] = joined
                    self.adj[b][a] = list(reversed(joined))
                # parallel edge or self-loop: drop, irrelevant for minors
                if len(self.adj[a]) <= 2:
                    queue.append(a)
                if a != b and len(self.adj[b]) <= 2:
                    queue.append(b)
                continue
            if v in self.adj:
                del self.adj[v]

    def to_graph(self) -> tuple[Graph, list[int]]:
        ids = sorted(self.alive)
        index = {v: j for j, v in enumerate(ids)}
        edges = []
        for v in ids:
            for w in self.adj[v]:
                if index[v] < index[w]:
                    edges.append((index[v], index[w]))
        deg = max((len(self.adj[v]) for v in ids), default=0)
        return Graph(len(ids), max(deg, 1), edges), ids

    def path_between(self, u: int, w: int) -> list[int]:
        """The g-path represented by kernel edge (u, w), endpoints included."""
        return self.adj[u][w]


def _lift_embedding(g: Graph, h: Graph, kernel: _Kernel, ids: list[int],
                    sets: list[int], kgraph: Graph) -> MinorEmbedding:
    """Expand a kernel-level model (bitmask sets) back to original ids."""
    branch: dict[int, set[int]] = {}
    for x in range(h.n):
        members = [ids[j] for j in _bits(sets[x])]
        grown = set(members)
        # realize internal connectivity: spanning tree over kernel edges
        if len(members) > 1:
            reached = {members[0]}
            frontier = [members[0]]
            while frontier:
                u = frontier.pop()
                for w in kernel.adj[u]:
                    if w in grown and w not in reached:
                        reached.add(w)
                        frontier.append(w)
                        grown_path = kernel.path_between(u, w)
                        grown.update(grown_path)
            if not reached == set(members):
                raise AssertionError("kernel branch set lost connectivity")
        branch[x] = grown
    witnesses: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in h.edges():
        found = None
        for u in [ids[j] for j in _bits(sets[x])]:
            for w in kernel.adj[u]:
                if w in branch[y] and w in {ids[j] for j in _bits(sets[y])}:
                    path = kernel.path_between(u, w)
                    # absorb the interior into the x side
                    branch[x].update(path[:-1])
                    found = (path[-2], path[-1])
                    break
            if found:
                break
        if found is None:
            raise AssertionError(f"no kernel witness for H-edge ({x},{y})")
        witnesses[(x, y)] = found
    emb = MinorEmbedding(h, {x: frozenset(s) for x, s in branch.items()}, witnesses)
    problems = validate_embedding(g, h, emb)
    if problems:
        raise AssertionError(f"lifted embedding invalid: {problems}")
    return emb


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- the branch-and-bound core ---------------------------------------------------

def _placement_order(h: Graph) -> list[int]:
    """H-vertices ordered most-constrained first: seed with the highest
    degree, then greedily maximize already-placed neighbor count (degree,
    then id, break ties).  Keeps every placement after the first anchored
    to placed sets, which is what makes the search local."""
    remaining = set(range(h.n))
    order: list[int] = []
    placed_nbrs = {x: 0 for x in remaining}
    while remaining:
        x = max(remaining, key=lambda v: (placed_nbrs[v], h.degree(v), -v))
        order.append(x)
        remaining.discard(x)
        for y in h.adjacency(x):
            if y in remaining:
                placed_nbrs[y] += 1
    return order


class _Searcher:
    """Exact search for a branch-set model of H in a (small) graph."""

    def __init__(self, g: Graph, h: Graph, deadline: Optional[float]):
        self.g = g
        self.h = h
        self.deadline = deadline
        self.nodes = 0
        self.nbr_mask = [0] * g.n
        for v in range(g.n):
            m = 0
            for w in g.adjacency(v):
                m |= 1 << w
            self.nbr_mask[v] = m
        self.deg = [g.degree(v) for v in range(g.n)]
        self.order = _placement_order(h)
        self.rank = {x: j for j, x in enumerate(self.order)}
        self.h_adj = [set(h.adjacency(x)) for x in range(h.n)]
        self.by_degree = sorted(range(g.n), key=lambda v: (-self.deg[v], v))
        self.sets: list[int] = [0] * h.n
        self.adj_of_set: list[int] = [0] * h.n
        self.budget = 0
        self.budget_pruned = False
        # symmetry breaking: interchangeable H-vertices (swapping them is an
        # automorphism) must receive sets with increasing minimum vertex
        self.sym_before: list[list[int]] = [[] for _ in range(h.n)]
        for x in range(h.n):
            for y in range(x + 1, h.n):
                if (self.h_adj[x] - {y}) == (self.h_adj[y] - {x}):
                    a, b = (x, y) if self.rank[x] < self.rank[y] else (y, x)
                    self.sym_before[b].append(a)

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % NODE_CHECK_INTERVAL == 0:
            if time.monotonic() > self.deadline:
                raise SearchBudgetExceeded("minor search budget exhausted")

    def run(self) -> Optional[list[int]]:
        """Iterative deepening on the largest branch-set size: minimal
        models use small sets, so present minors surface at low caps; when
        a sweep finishes without ever hitting the cap, absence is proven."""
        if self.g.n < self.h.n:
            return None
        full = (1 << self.g.n) - 1
        for cap in range(1, self.g.n + 1):
            self.budget = cap
            self.budget_pruned = False
            got = self._place(0, full, 0)
            if got is not None:
                return got
            if not self.budget_pruned:
                return None
        return None

    def _place(self, j: int, avail: int, committed: int) -> Optional[list[int]]:
        self._tick()
        if j == len(self.order):
            return list(self.sets)
        x = self.order[j]
        placed_nbrs = [y for y in self.h_adj[x] if self.rank[y] < j]
        unplaced_nbrs = [y for y in self.h_adj[x] if self.rank[y] > j]
        req_masks = [self.adj_of_set[y] for y in placed_nbrs]
        remaining_after = len(self.order) - j - 1
        if avail.bit_count() < 1 + remaining_after:
            return None
        budget_cap = self.budget
        size_cap = min(avail.bit_count() - remaining_after, budget_cap)
        if size_cap < 1:
            return None
        dist_fields: list = [None] * len(req_masks)   # filled lazily per mask
        # roots: enumerate subsets containing root_k but no earlier root, so
        # every connected candidate set is tried exactly once
        tried_roots = 0
        root_pool = [v for v in self.by_degree if (avail >> v) & 1]
        if req_masks:
            first = min(req_masks, key=lambda m: (m & avail).bit_count())
            root_pool = [v for v in root_pool if (first >> v) & 1]
        for root in root_pool:
            allowed = avail & ~tried_roots
            if not (allowed >> root) & 1:
                continue
            got = self._grow(j, x, 1 << root, self.nbr_mask[root] & allowed & ~(1 << root),
                             allowed, req_masks, bool(unplaced_nbrs), remaining_after,
                             avail, committed, size_cap, budget_cap, dist_fields)
            if got is not None:
                return got
            tried_roots |= 1 << root
        return None

    def _grow(self, j: int, x: int, cur: int, frontier: int, allowed: int,
              req_masks: list[int], has_future: bool, remaining_after: int,
              avail: int, committed: int, size_cap: int, budget_cap: int,
              dist_fields: list[list[int]]) -> Optional[list[int]]:
        self._tick()
        low_cur = cur & -cur
        for y in self.sym_before[x]:
            if low_cur < (self.sets[y] & -self.sets[y]):
                return None
        size = cur.bit_count()
        satisfied = all(m & cur for m in req_masks)
        if satisfied:
            cur_adj = 0
            for v in _bits(cur):
                cur_adj |= self.nbr_mask[v]
            cur_adj &= ~cur
            # degree-sum bound: boundary edge ends must cover deg_H(x)
            if sum(self.deg[v] for v in _bits(cur)) - 2 * (size - 1) >= len(self.h_adj[x]):
                self.sets[x] = cur
                self.adj_of_set[x] = cur_adj
                got = self._place(j + 1, avail & ~cur, committed + size)
                if got is not None:
                    return got
                self.sets[x] = 0
                self.adj_of_set[x] = 0
            if not has_future:
                # supersets only consume vertices once every constraint on
                # this set is met and no later H-vertex must reach it
                return None
        if size >= size_cap:
            if size >= budget_cap:
                self.budget_pruned = True
            return None
        unmet = [k for k, m in enumerate(req_masks) if not m & cur]
        if unmet:
            # grow toward the unmet requirements first
            for k in unmet:
                if dist_fields[k] is None:
                    dist_fields[k] = self._bfs_field(req_masks[k], avail)
            order = sorted(_bits(frontier),
                           key=lambda v: min(dist_fields[k][v] for k in unmet))
        else:
            order = list(_bits(frontier))
        for v in order:
            low = 1 << v
            if not (frontier >> v) & 1:
                continue
            got = self._grow(j, x, cur | low,
                             (frontier ^ low | (self.nbr_mask[v] & allowed & ~cur)) & ~low & ~cur,
                             allowed, req_masks, has_future, remaining_after,
                             avail, committed, size_cap, budget_cap, dist_fields)
            if got is not None:
                return got
            # exclude v from every further subset in this branch
            allowed &= ~low
            frontier ^= low
            if not self._reachable_ok(cur, allowed, req_masks):
                return None
        return None

    def _bfs_field(self, mask: int, avail: int) -> list[int]:
        dist = [self.g.n + 1] * self.g.n
        frontier = []
        for v in _bits(mask & avail):
            dist[v] = 0
            frontier.append(v)
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for v in frontier:
                for w in _bits(self.nbr_mask[v] & avail):
                    if dist[w] > depth:
                        dist[w] = depth
                        nxt.append(w)
            frontier = nxt
        return dist

    def _reachable_ok(self, cur: int, allowed: int, req_masks: list[int]) -> bool:
        """Connectivity feasibility: every unmet required mask must still be
        reachable from the current set through allowed vertices."""
        unmet = [m for m in req_masks if not m & cur]
        if not unmet:
            return True
        reach = cur
        frontier = cur
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.nbr_mask[v]
            nxt &= allowed & ~reach
            reach |= nxt
            frontier = nxt
        return all(m & reach for m in unmet)


def _h_components(h: Graph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for v in range(h.n):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in h.adjacency(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _to_networkx(g: Graph) -> "nx.Graph":
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


def _is_planar(g: Graph) -> bool:
    ok, _ = nx.check_planarity(_to_networkx(g), counterexample=False)
    return ok


def _induced_small(g: Graph, vertices: list[int]) -> tuple[Graph, list[int]]:
    index = {v: j for j, v in enumerate(vertices)}
    edges = [(index[u], index[w]) for u in vertices for w in g.adjacency(u)
             if w in index and index[u] < index[w]]
    return Graph(len(vertices), g.d, edges), vertices


def _search_regions(kgraph: Graph, h: Graph) -> list[list[int]]:
    """Vertex regions of the kernel that could host an embedding of H.

    A connected H lives inside one connected component; a 2-connected H
    lives inside one block.  Regions are ordered densest first so present
    minors are found quickly.
    """
    if kgraph.n == 0:
        return []
    if len(_h_components(h)) > 1:
        return [list(range(kgraph.n))]
    gx = _to_networkx(kgraph)
    comps = [sorted(c) for c in nx.connected_components(gx)]
    regions: list[list[int]] = []
    two_connected = h.n >= 2 and (h.n == 2 or nx.is_biconnected(_to_networkx(h)))
    for comp in comps:
        if two_connected and len(comp) > 2:
            sub = gx.subgraph(comp)
            regions.extend(sorted(b) for b in nx.biconnected_components(sub))
        else:
            regions.append(comp)
    def density(region: list[int]) -> tuple[int, int]:
        rset = set(region)
        m = sum(1 for u in region for w in kgraph.adjacency(u) if w in rset) // 2
        return (m - len(region), m)
    regions.sort(key=density, reverse=True)
    return regions


def has_minor(g: Graph, h: Graph, deadline: Optional[float] = None) -> Optional[MinorEmbedding]:
    """Exact decision: a validated embedding when H is a minor of G, else None.

    ``deadline`` (a time.monotonic() value) is plumbing for callers that
    bound worst-case search; by default the search runs to completion.
    """
    if h.n == 0:
        raise GraphError("pattern must have at least one vertex")
    if h.n > g.n or h.m > g.m:
        return None
    min_deg_h = min((h.degree(x) for x in range(h.n)), default=0)
    kernel = _Kernel(g)
    if min_deg_h >= 3:
        kernel.reduce()
    kgraph, ids = kernel.to_graph()
    if kgraph.n < h.n or kgraph.m < h.m:
        return None
    if kgraph.n <= 10:
        # tiny kernels: exhaustive search beats the planarity/blocks setup
        sets = _Searcher(kgraph, h, deadline).run()
        if sets is None:
            return None
        return _lift_embedding(g, h, kernel, ids, sets, kgraph)
    h_nonplanar = not _is_planar(h)
    if h_nonplanar and _is_planar(kgraph):
        return None
    for region in _search_regions(kgraph, h):
        if len(region) < h.n:
            continue
        rgraph, rids = _induced_small(kgraph, region)
        if rgraph.m < h.m:
            continue
        if h_nonplanar and _is_planar(rgraph):
            continue
        searcher = _Searcher(rgraph, h, deadline)
        sets = searcher.run()
        if sets is not None:
            kernel_sets = [sum(1 << rids[j] for j in _bits(mask)) for mask in sets]
            return _lift_embedding(g, h, kernel, ids, kernel_sets, kgraph)
    return None


# -- brute-force oracle ----------------------------------------------------------

BRUTEFORCE_LIMIT = 12


def has_minor_bruteforce(g: Graph, h: Graph) -> Optional[MinorEmbedding]:
    """Exhaustive reference: enumerate assignments of disjoint connected
    vertex sets to H-vertices in id order, filtering by the embedding
    invariants only.  Limited to |V(G)| <= 12."""
    if g.n > BRUTEFORCE_LIMIT:
        raise GraphError(f"brute force is limited to {BRUTEFORCE_LIMIT} vertices")
    if h.n == 0:
        raise GraphError("pattern must have at least one vertex")
    if h.n > g.n:
        return None
    nbr = [0] * g.n
    for v in range(g.n):
        for w in g.adjacency(v):
            nbr[v] |= 1 << w
    connected: list[int] = []
    for mask in range(1, 1 << g.n):
        low = mask & -mask
        reach = low
        while True:
            grow = reach
            for v in _bits(reach):
                grow |= nbr[v] & mask
            if grow == reach:
                break
            reach = grow
        if reach == mask:
            connected.append(mask)
    connected.sort(key=lambda m: m.bit_count())
    adj_of = {m: _mask_adjacency(m, nbr) for m in connected}
    chosen: list[int] = [0] * h.n
    h_adj = [set(h.adjacency(x)) for x in range(h.n)]

    full = (1 << g.n) - 1

    def assign(x: int, used: int) -> bool:
        if x == h.n:
            return True
        # every later H-vertex still needs a nonempty disjoint set
        room = g.n - used.bit_count() - (h.n - x)
        if room < 0:
            return False
        for mask in connected:
            if mask.bit_count() - 1 > room:
                break
            if mask & used:
                continue
            ok = True
            for y in h_adj[x]:
                if y < x and not (adj_of[mask] & chosen[y]):
                    ok = False
                    break
            if not ok:
                continue
            chosen[x] = mask
            if assign(x + 1, used | mask):
                return True
        chosen[x] = 0
        return False

    if not assign(0, 0):
        return None
    branch = {x: frozenset(_bits(chosen[x])) for x in range(h.n)}
    witnesses: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in h.edges():
        pick = None
        for u in branch[x]:
            inter = nbr[u] & chosen[y]
            if inter:
                pick = (u, (inter & -inter).bit_length() - 1)
                break
        witnesses[(x, y)] = pick
    emb = MinorEmbedding(h, branch, witnesses)
    problems = validate_embedding(g, h, emb)
    if problems:
        raise AssertionError(f"brute-force embedding invalid: {problems}")
    return emb


def _mask_adjacency(mask: int, nbr: list[int]) -> int:
    out = 0
    for v in _bits(mask):
        out |= nbr[v]
    return out & ~mask


# -- named patterns and the planarity certificate ---------------------------------

def pattern_k5() -> Graph:
    return complete_graph(5)


def pattern_k33() -> Graph:
    return complete_bipartite(3, 3)


def forbidden_minor_certificate(g: Graph,
                                deadline: Optional[float] = None) -> Optional[MinorEmbedding]:
    """A K_{3,3} or K_5 embedding when one exists; None implies planarity."""
    emb = has_minor(g, pattern_k33(), deadline)
    if emb is not None:
        return emb
    return has_minor(g, pattern_k5(), deadline)


# -- certificate files -------------------------------------------------------------

def write_certificate(emb: MinorEmbedding, path: str) -> None:
    h = emb.pattern
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"pattern {h.n} {h.m}\n")
        for x, y in h.edges():
            fh.write(f"e {x} {y}\n")
        for x in sorted(emb.branch_sets):
            members = " ".join(str(v) for v in sorted(emb.branch_sets[x]))
            fh.write(f"branch {x}: {members}\n")
        for (x, y), (gu, gv) in sorted(emb.edge_witnesses.items()):
            fh.write(f"witness {x}-{y}: {gu} {gv}\n")


def read_certificate(path: str) -> MinorEmbedding:
    n_h = m_h = None
    h_edges: list[tuple[int, int]] = []
    branch: dict[int, frozenset[int]] = {}
    witnesses: dict[tuple[int, int], tuple[int, int]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "pattern":
                    n_h, m_h = int(parts[1]), int(parts[2])
                elif parts[0] == "e":
                    h_edges.append((int(parts[1]), int(parts[2])))
                elif parts[0] == "branch":
                    hid = int(parts[1].rstrip(":"))
                    branch[hid] = frozenset(int(v) for v in parts[2:])
                elif parts[0] == "witness":
                    hx, hy = parts[1].rstrip(":").split("-")
                    witnesses[(int(hx), int(hy))] = (int(parts[2]), int(parts[3]))
                else:
                    raise GraphError(f"{path}:{lineno}: unknown record '{parts[0]}'")
            except (IndexError, ValueError):
                raise GraphError(f"{path}:{lineno}: malformed certificate line") from None
    if n_h is None:
        raise GraphError(f"{path}: missing pattern header")
    if len(h_edges) != m_h:
        raise GraphError(f"{path}: pattern header declares {m_h} edges, found {len(h_edges)}")
    try:
        pattern = Graph(n_h, max(n_h - 1, 1), h_edges)
    except GraphError as exc:
        raise GraphError(f"{path}: bad pattern: {exc}") from None
    return MinorEmbedding(pattern, branch, witnesses)
