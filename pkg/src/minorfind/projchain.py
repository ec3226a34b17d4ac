"""Projected Markov chains on a vertex subset, Kac checks, and LS curves.

The chain M_S keeps the states in S and replaces excursions through the
complement with length-annotated transitions: e^(t)_{u,v} is the total
probability of a t-step walk in G from u to v whose internal vertices
all avoid S.  Transition lengths are truncated at ``t_max``; the mass of
excursions that have not returned by then is tracked per state as an
explicit residual, so truncation error stays visible to every consumer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .graph import Graph, GraphError
from .walks import transition_matrix, _check_subset

ROW_TOL = 1e-9
SYM_TOL = 1e-12


class ProjectedChain:
    """M_S with truncated length-annotated transitions.

    ``mats[t-1]`` is the |S| x |S| matrix of e^(t) probabilities, and
    ``residual[j]`` the mass of walks from S[j] still outside S after
    t_max steps.  One "hop" of the chain is a single transition of any
    length; "length" always refers to steps in G.
    """

    def __init__(self, g: Graph, subset: np.ndarray, t_max: int,
                 mats: list[sp.csr_matrix], residual: np.ndarray):
        self.g = g
        self.n = g.n
        self.subset = subset
        self.t_max = t_max
        self.mats = mats
        self.residual = residual
        self.size = len(subset)
        self._index = {int(v): j for j, v in enumerate(subset)}
        self._hop = None

    def index_of(self, v: int) -> int:
        try:
            return self._index[int(v)]
        except KeyError:
            raise GraphError(f"vertex {v} not in S") from None

    def hop_matrix(self) -> sp.csr_matrix:
        """One-hop transition probabilities, summed over lengths <= t_max."""
        if self._hop is None:
            acc = self.mats[0].copy()
            for m in self.mats[1:]:
                acc = acc + m
            self._hop = acc.tocsr()
        return self._hop

    def transitions(self, u: int, v: int) -> list[tuple[int, float]]:
        """All (length, probability) entries for the ordered pair (u, v)."""
        ju, jv = self.index_of(u), self.index_of(v)
        out = []
        for t, m in enumerate(self.mats, start=1):
            p = m[ju, jv]
            if p != 0.0:
                out.append((t, float(p)))
        return out

    def hop_distribution(self, s: int, hops: int) -> np.ndarray:
        """Distribution over S after ``hops`` transitions from s.

        Mass lost to truncated excursions simply disappears, which is the
        conservative reading for every consumer here.
        """
        vec = np.zeros(self.size)
        vec[self.index_of(s)] = 1.0
        hop = self.hop_matrix()
        for _ in range(hops):
            vec = hop.T @ vec
        return vec

    def expected_hop_length(self) -> np.ndarray:
        """Per-state expected length of one hop, crediting residual mass
        with exactly t_max steps (a lower bound on its true length)."""
        out = np.zeros(self.size)
        for t, m in enumerate(self.mats, start=1):
            out += t * np.asarray(m.sum(axis=1)).ravel()
        out += self.t_max * self.residual
        return out

    def check_invariants(self) -> list[str]:
        """Row-sum conservation and e^(t) symmetry; empty when clean."""
        problems = []
        total = self.residual.copy()
        for m in self.mats:
            total += np.asarray(m.sum(axis=1)).ravel()
        bad = np.abs(total - 1.0) > ROW_TOL
        for j in np.nonzero(bad)[0]:
            problems.append(f"row mass {total[j]:.12f} at state {int(self.subset[j])}")
        for t, m in enumerate(self.mats, start=1):
            gap = abs(m - m.T)
            if gap.nnz and gap.max() > SYM_TOL:
                problems.append(f"asymmetry {gap.max():.3e} in e^({t})")
        return problems


def build_projected_chain(g: Graph, subset: Sequence[int], t_max: int) -> ProjectedChain:
    """Exact truncated M_S.

    For each start u in S the excursion measure is evolved through G with
    S-states absorbing: the mass arriving in S at step t is recorded as
    the e^(t) row of u, and whatever is still outside after t_max steps
    becomes the residual.
    """
    arr = _check_subset(g, subset)
    if t_max < 1:
        raise GraphError("t_max must be at least 1")
    k = len(arr)
    mat = transition_matrix(g)
    outside = np.ones(g.n, dtype=bool)
    outside[arr] = False
    # Columns track all starts at once: block[:, j] is the mass distribution
    # of the walk from S[j] restricted to not-yet-returned trajectories.
    block = np.zeros((g.n, k))
    block[arr, np.arange(k)] = 1.0
    mats: list[sp.csr_matrix] = []
    for _ in range(t_max):
        block = mat @ block
        arrived = block[arr, :]          # mass entering S at this step
        mats.append(sp.csr_matrix(arrived.T))
        block[arr, :] = 0.0
    residual = block.sum(axis=0)
    return ProjectedChain(g, arr, t_max, mats, residual)


# -- Kac's formula check -------------------------------------------------------

@dataclass(frozen=True)
class KacResult:
    expected: float
    target: float
    residual_bound: float
    slack: float
    status: str        # "ok" or "inconclusive"
    hops: int
    subset_size: int

    def holds(self) -> bool:
        return self.status == "ok" and self.slack >= 0.0


def kac_check(g: Graph, subset: Sequence[int], hops: int, t_max: int,
              residual_limit: float = 1e-6,
              chain: Optional[ProjectedChain] = None) -> KacResult:
    """Compare the expected total length of an h-hop stationary walk in M_S
    with h*n/|S|.

    The truncated chain can only under- or over-shoot by the unresolved
    excursion mass, so the tolerance is h*n*residual + 1e-6.  When the
    residual exceeds ``residual_limit`` the check is inconclusive rather
    than failed: the gap says nothing about correctness then.
    """
    ch = chain if chain is not None else build_projected_chain(g, subset, t_max)
    per_state = ch.expected_hop_length()
    expected = hops * float(per_state.mean())
    target = hops * g.n / ch.size
    residual_bound = float(ch.residual.max(initial=0.0))
    allowed = hops * g.n * residual_bound + 1e-6
    slack = allowed - abs(expected - target)
    status = "ok" if residual_bound < residual_limit else "inconclusive"
    return KacResult(expected, target, residual_bound, slack, status, hops, ch.size)


def expected_return_time_exact(g: Graph, subset: Sequence[int]) -> float:
    """Mean return time to S from the uniform distribution on S, via a
    direct linear solve on the complement (independent of the chain)."""
    arr = _check_subset(g, subset)
    mat = transition_matrix(g).toarray()
    outside = np.setdiff1d(np.arange(g.n), arr)
    if len(outside) == 0:
        return 1.0
    sub = mat[np.ix_(outside, outside)]
    # exit[w] = expected steps from outside-vertex w until S is reached
    exit_time = np.linalg.solve(np.eye(len(outside)) - sub, np.ones(len(outside)))
    lookup = np.zeros(g.n)
    lookup[outside] = exit_time
    total = 0.0
    for u in arr:
        row = mat[u]
        total += 1.0 + float(row[outside] @ exit_time)
    return total / len(arr)


# -- conductance ---------------------------------------------------------------

def conductance(chain: ProjectedChain, block: Sequence[int]) -> float:
    """Phi(T) in M_S: one-hop crossing probability out of T over min(|T|, |S\\T|)."""
    t_ids = sorted({int(v) for v in block})
    if not t_ids or len(t_ids) >= chain.size:
        raise GraphError("conductance needs an interior subset of S")
    idx = np.array([chain.index_of(v) for v in t_ids])
    mask = np.zeros(chain.size, dtype=bool)
    mask[idx] = True
    hop = chain.hop_matrix()
    crossing = float(hop[idx][:, ~mask].sum())
    return crossing / min(len(t_ids), chain.size - len(t_ids))


# -- Lovasz-Simonovits curve ----------------------------------------------------

@dataclass(frozen=True)
class LSCurve:
    """The concave excess-probability curve of a hop distribution.

    ``breakpoints[k]`` is h_t(k) = sum of the k largest probabilities
    minus k/|S|; ``ordering[j]`` is the j-th vertex in decreasing
    probability order (ties broken by vertex id).
    """

    breakpoints: np.ndarray
    ordering: np.ndarray
    probs: np.ndarray
    hops: int
    source: int

    @property
    def size(self) -> int:
        return len(self.ordering)

    def value(self, x: float) -> float:
        """Evaluate by linear interpolation; arguments are clamped to [0, |S|]."""
        x = min(max(x, 0.0), float(self.size))
        lo = int(np.floor(x))
        if lo == self.size:
            return float(self.breakpoints[-1])
        frac = x - lo
        return float((1 - frac) * self.breakpoints[lo] + frac * self.breakpoints[lo + 1])

    def level_set(self, k: int) -> list[int]:
        return [int(v) for v in self.ordering[:k]]

    def min_probability(self, k: int) -> float:
        """Probability of the k-th vertex in the ordering (k >= 1)."""
        if not (1 <= k <= self.size):
            raise GraphError("level-set size out of range")
        return float(self.probs[k - 1])

    def is_concave(self, tol: float = 1e-12) -> bool:
        inc = np.diff(self.breakpoints)
        return bool(np.all(np.diff(inc) <= tol))


def ls_curve(chain: ProjectedChain, s: int, hops: int) -> LSCurve:
    """The curve for the ``hops``-hop distribution of M_S from s."""
    dist = chain.hop_distribution(s, hops)
    order = np.lexsort((chain.subset, -dist))
    sorted_probs = dist[order]
    excess = sorted_probs - 1.0 / chain.size
    breakpoints = np.concatenate([[0.0], np.cumsum(excess)])
    return LSCurve(breakpoints, chain.subset[order], sorted_probs, hops, s)


@dataclass(frozen=True)
class LSLemmaReport:
    lhs: float
    rhs: float
    slack: float
    phi: float
    k: int
    hops: int

    def holds(self, tol: float = 1e-9) -> bool:
        return self.slack >= -tol


def ls_lemma_check(chain: ProjectedChain, s: int, hops: int, k: int) -> LSLemmaReport:
    """Evaluate h_t(k) against the chord bound
    (h_{t-1}(k - 2*min(k, |S|-k)*Phi) + h_{t-1}(k + ...)) / 2,
    with Phi the conductance of the level set L_{k,t}.  Out-of-range
    curve arguments are clamped, the standard convention."""
    if hops < 1:
        raise GraphError("the chord bound needs hops >= 1")
    if not (0 <= k <= chain.size):
        raise GraphError("k out of range")
    cur = ls_curve(chain, s, hops)
    prev = ls_curve(chain, s, hops - 1)
    if k == 0 or k == chain.size:
        phi = 0.0
    else:
        phi = conductance(chain, cur.level_set(k))
    width = 2.0 * min(k, chain.size - k) * phi
    lhs = float(cur.breakpoints[k])
    rhs = 0.5 * (prev.value(k - width) + prev.value(k + width))
    return LSLemmaReport(lhs, rhs, rhs - lhs, phi, k, hops)
