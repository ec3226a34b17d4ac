"""Lazy random walks, exact walk distributions, and returning-walk vectors.

The walk convention everywhere: from the current vertex ``v``, with
probability 1/2 stay put (no oracle query); otherwise draw a slot
``i`` uniformly from 1..d and issue a neighbor query, moving to the
answer or staying when the slot is empty.  On an undirected graph the
resulting transition operator is symmetric and doubly stochastic.

Exact operations use dense/sparse double-precision arithmetic and are
meant for analysis at desk scale (n up to a few thousand).  They never
touch the query ledger; only sampled operations do.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .graph import Graph, GraphError, QueryLedger

MASS_TOL = 1e-12


# -- transition operator ------------------------------------------------------

def transition_matrix(g: Graph) -> sp.csr_matrix:
    """The lazy walk operator M as a sparse matrix (cached per graph).

    M[u, v] = 1/(2d) for each edge, and M[v, v] = 1/2 + (d - deg(v))/(2d).
    """
    cached = g._cache.get("transition")
    if cached is not None:
        return cached
    offsets, neighbors = g.csr()
    n, d = g.n, g.d
    if n == 0:
        mat = sp.csr_matrix((0, 0))
        g._cache["transition"] = mat
        return mat
    degs = g.degrees()
    if d == 0:
        mat = sp.identity(n, format="csr")
        g._cache["transition"] = mat
        return mat
    rows = np.concatenate([np.repeat(np.arange(n), degs), np.arange(n)])
    cols = np.concatenate([neighbors, np.arange(n)])
    vals = np.concatenate([
        np.full(len(neighbors), 1.0 / (2 * d)),
        0.5 + (d - degs) / (2.0 * d),
    ])
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    g._cache["transition"] = mat
    return mat


def evolve(g: Graph, vec: np.ndarray, steps: int) -> np.ndarray:
    """Apply the transition operator ``steps`` times to a dense vector/matrix."""
    mat = transition_matrix(g)
    out = np.asarray(vec, dtype=float)
    for _ in range(steps):
        out = mat @ out
    return out


# -- domain types -------------------------------------------------------------

class WalkPath:
    """A realized lazy walk: the vertex sequence v_0..v_t."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[int] | np.ndarray):
        self.vertices = np.asarray(vertices, dtype=np.int64)
        if self.vertices.ndim != 1 or len(self.vertices) == 0:
            raise ValueError("a walk needs at least its start vertex")

    @property
    def length(self) -> int:
        """Number of steps (one less than the number of positions)."""
        return len(self.vertices) - 1

    def at(self, t: int) -> int:
        """P(t): the vertex after t steps."""
        return int(self.vertices[t])

    def suffix(self, t: int) -> np.ndarray:
        """P(>=t): positions with index at least t."""
        return self.vertices[t:]

    def prefix_set(self, t: int) -> set[int]:
        return set(int(x) for x in self.vertices[: t + 1])

    def vertex_set(self) -> set[int]:
        return set(int(x) for x in self.vertices)

    def step_edges(self) -> list[tuple[int, int]]:
        """Traversed edges (lazy stays excluded), as (min, max) pairs."""
        out = []
        vs = self.vertices
        for k in range(len(vs) - 1):
            a, b = int(vs[k]), int(vs[k + 1])
            if a != b:
                out.append((min(a, b), max(a, b)))
        return out

    def check_consistent(self, g: Graph) -> bool:
        """Consecutive positions are equal (lazy) or adjacent in g."""
        vs = self.vertices
        return all(
            vs[k] == vs[k + 1] or g.has_edge(int(vs[k]), int(vs[k + 1]))
            for k in range(len(vs) - 1)
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, WalkPath) and np.array_equal(self.vertices, other.vertices)

    def __repr__(self) -> str:
        return f"WalkPath({self.vertices.tolist()})"


@dataclass(frozen=True)
class DistVec:
    """A dense distribution over vertices (entries >= 0, total mass <= 1)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if np.any(v < -MASS_TOL):
            raise ValueError("negative probability mass")
        if v.sum() > 1.0 + 1e-9:
            raise ValueError(f"total mass {v.sum()} exceeds 1")

    def __getitem__(self, v: int) -> float:
        return float(self.values[v])

    def l1(self) -> float:
        return float(self.values.sum())

    def l2_squared(self) -> float:
        return float(self.values @ self.values)

    def linf(self) -> float:
        return float(self.values.max(initial=0.0))


@dataclass(frozen=True)
class ReturningVec:
    """The vector of R-returning walk probabilities q[R],s,i.

    Entry u (for u in R) is the probability that a walk of length
    2^i * ell from s ends at u and sits inside R at every multiple
    of ell.  Indexed by position in the sorted subset R.
    """

    subset: tuple[int, ...]
    values: np.ndarray
    source: int
    phase: int
    period: int

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if len(self.subset) != len(self.values):
            raise ValueError("dimension mismatch between R and values")

    def entry(self, u: int) -> float:
        j = _index_in(self.subset, u)
        return float(self.values[j])

    def l1(self) -> float:
        return float(self.values.sum())

    def l2_squared(self) -> float:
        return float(self.values @ self.values)

    def linf(self) -> float:
        return float(self.values.max(initial=0.0))

    def dot(self, other: "ReturningVec") -> float:
        if self.subset != other.subset:
            raise ValueError("dot product requires identical R")
        return float(self.values @ other.values)

    def normalize(self) -> "ReturningVec":
        """The distribution D_{s,i}: values divided by their l1 mass."""
        mass = self.l1()
        if mass <= 0.0:
            raise ValueError("cannot normalize a zero returning vector")
        return ReturningVec(self.subset, self.values / mass, self.source,
                            self.phase, self.period)

    def to_csv_rows(self) -> list[tuple[int, float]]:
        return [(v, float(p)) for v, p in zip(self.subset, self.values)]


def _index_in(subset: tuple[int, ...], u: int) -> int:
    import bisect
    j = bisect.bisect_left(subset, u)
    if j == len(subset) or subset[j] != u:
        raise KeyError(f"vertex {u} not in subset")
    return j


# -- exact operations ---------------------------------------------------------

def walk_distribution(g: Graph, s: int, t: int) -> DistVec:
    """Exact distribution of the lazy walk after t steps from s."""
    g._check_vertex(s)
    if t < 0:
        raise ValueError("negative walk length")
    vec = np.zeros(g.n)
    vec[s] = 1.0
    return DistVec(evolve(g, vec, t))


def _check_subset(g: Graph, subset: Sequence[int]) -> np.ndarray:
    arr = np.asarray(sorted({int(v) for v in subset}), dtype=np.int64)
    if len(arr) == 0:
        raise GraphError("subset must be nonempty")
    if arr[0] < 0 or arr[-1] >= g.n:
        raise GraphError("subset contains out-of-range vertices")
    return arr


def returning_vector(g: Graph, subset: Sequence[int], s: int, i: int, ell: int) -> ReturningVec:
    """Exact q[R],s,i: alternate ell transition steps with restriction to R, 2^i times.

    With i = 0 this is simply the ell-step walk distribution restricted
    to R; no separate type exists for that special case.
    """
    arr = _check_subset(g, subset)
    if s not in set(int(x) for x in arr):
        raise GraphError(f"source {s} must lie in R")
    if i < 0 or ell < 1:
        raise GraphError("need i >= 0 and ell >= 1")
    full = np.zeros(g.n)
    full[s] = 1.0
    for _ in range(2 ** i):
        full = evolve(g, full, ell)
        restricted = np.zeros(g.n)
        restricted[arr] = full[arr]
        full = restricted
    return ReturningVec(tuple(int(x) for x in arr), full[arr], s, i, ell)


def returning_matrix(g: Graph, subset: Sequence[int], ell: int) -> np.ndarray:
    """Dense |R| x |R| matrix N with N[:, j] = restriction of the ell-step
    evolution of e_{R[j]}; powers of N give all returning vectors at once."""
    arr = _check_subset(g, subset)
    block = np.zeros((g.n, len(arr)))
    block[arr, np.arange(len(arr))] = 1.0
    block = evolve(g, block, ell)
    return block[arr, :]


def returning_matrix_power(base: np.ndarray, i: int) -> np.ndarray:
    """N^(2^i) by repeated squaring."""
    out = base
    for _ in range(i):
        out = out @ out
    return out


def returning_product_identity(g: Graph, subset: Sequence[int], s: int, u: int,
                               i: int, ell: int) -> tuple[float, float]:
    """Both sides of the product identity
    q[R],s,i+1 (u)  =  q[R],s,i . q[R],u,i, computed independently."""
    lhs = returning_vector(g, subset, s, i + 1, ell).entry(u)
    rhs = returning_vector(g, subset, s, i, ell).dot(returning_vector(g, subset, u, i, ell))
    return lhs, rhs


def returning_mass_lower_bound(g: Graph, subset: Sequence[int], i: int,
                               ell: int) -> tuple[float, float]:
    """Average l1 mass of q[R],s,i over s in R, and the bound (|R|/n)^(2^i)."""
    arr = _check_subset(g, subset)
    base = returning_matrix(g, arr, ell)
    power = returning_matrix_power(base, i)
    average = float(power.sum()) / len(arr)
    bound = (len(arr) / g.n) ** (2 ** i)
    return average, bound


def restricted_evolution(g: Graph, subset: Sequence[int], x: np.ndarray,
                         steps: int, ell: int) -> np.ndarray:
    """Evolve a vector for ``steps`` single transitions, zeroing outside R at
    every multiple of ell.  Used for infinity-norm monotonicity checks."""
    arr = _check_subset(g, subset)
    mask = np.zeros(g.n, dtype=bool)
    mask[arr] = True
    out = np.asarray(x, dtype=float).copy()
    for t in range(1, steps + 1):
        out = evolve(g, out, 1)
        if t % ell == 0:
            out = np.where(mask, out, 0.0)
    return out


# -- sampled operations -------------------------------------------------------

def lazy_step(g: Graph, v: int, rng: np.random.Generator,
              ledger: Optional[QueryLedger] = None) -> int:
    """One lazy step from v, charging a neighbor query on non-lazy draws."""
    g._check_vertex(v)
    if rng.random() < 0.5:
        return v
    if g.d == 0:
        return v
    slot = int(rng.integers(1, g.d + 1))
    from .graph import neighbor_query
    ans = neighbor_query(g, v, slot, ledger)
    return v if ans is None else ans


def lazy_walk(g: Graph, s: int, t: int, rng: np.random.Generator,
              ledger: Optional[QueryLedger] = None) -> WalkPath:
    """A sampled lazy walk of t steps from s."""
    g._check_vertex(s)
    if t < 0:
        raise ValueError("negative walk length")
    path = np.empty(t + 1, dtype=np.int64)
    path[0] = s
    v = s
    for k in range(1, t + 1):
        v = lazy_step(g, v, rng, ledger)
        path[k] = v
    return WalkPath(path)


def lazy_walk_batch(g: Graph, starts: np.ndarray, t: int, rng: np.random.Generator,
                    ledger: Optional[QueryLedger] = None) -> np.ndarray:
    """Sample many walks at once; returns an array of shape (len(starts), t+1).

    Row k is a walk from starts[k].  Each non-lazy draw charges one
    neighbor query, exactly as the scalar version does.
    """
    starts = np.asarray(starts, dtype=np.int64)
    b = len(starts)
    paths = np.empty((b, t + 1), dtype=np.int64)
    paths[:, 0] = starts
    if t == 0:
        return paths
    offsets, neighbors = g.csr()
    degs = g.degrees()
    cur = starts.copy()
    queries = 0
    for k in range(1, t + 1):
        move = rng.random(b) >= 0.5
        nmove = int(move.sum())
        if nmove and g.d > 0:
            queries += nmove
            slots = rng.integers(0, g.d, size=nmove)
            targets = cur[move].copy()
            occupied = slots < degs[targets]
            idx = offsets[targets[occupied]] + slots[occupied]
            targets[occupied] = neighbors[idx]
            nxt = cur.copy()
            nxt[move] = targets
            cur = nxt
        paths[:, k] = cur
    if ledger is not None and queries:
        ledger.charge_neighbor(queries)
    return paths


def is_returning(path: np.ndarray | WalkPath, subset_mask_or_set, ell: int) -> bool:
    """Whether a walk sits inside R at every positive multiple of ell."""
    vs = path.vertices if isinstance(path, WalkPath) else np.asarray(path)
    t = len(vs) - 1
    if isinstance(subset_mask_or_set, np.ndarray):
        member = lambda v: bool(subset_mask_or_set[v])
    else:
        sset = set(subset_mask_or_set)
        member = lambda v: v in sset
    for j in range(ell, t + 1, ell):
        if not member(int(vs[j])):
            return False
    return True


def returning_walk_sample(g: Graph, subset: Sequence[int], s: int, i: int, ell: int,
                          rng: np.random.Generator,
                          ledger: Optional[QueryLedger] = None) -> tuple[WalkPath, bool]:
    """Sample one 2^i * ell walk from s and report whether it is R-returning."""
    arr = _check_subset(g, subset)
    if s not in set(int(x) for x in arr):
        raise GraphError(f"source {s} must lie in R")
    path = lazy_walk(g, s, (2 ** i) * ell, rng, ledger)
    mask = np.zeros(g.n, dtype=bool)
    mask[arr] = True
    return path, is_returning(path, mask, ell)


# -- seeded stream derivation -------------------------------------------------

def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    """A deterministic, schedule-independent stream for (seed, *path).

    Every concurrent task derives its own stream from the master seed and
    its structural position, so results do not depend on interleaving.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.PCG64(ss))
