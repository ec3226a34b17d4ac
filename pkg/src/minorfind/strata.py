"""Stratification of a residue set, correlation checks, and graph decomposition.

Stratification peels a residue set R_0 into strata: at phase i, every
s in R_i whose returning vector q[R_i],s,i+1 has squared l2 norm at
least 1/n^(delta*i) moves into stratum S_i, and R_{i+1} is what is
left.  The decomposition procedure repeatedly extracts low-conductance
pieces around such vertices from exact projected chains; both are
analysis tools operating on full graphs, not on the query oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import Graph, GraphError
from .projchain import ProjectedChain, build_projected_chain, conductance
from .walks import evolve, returning_matrix, returning_matrix_power

FP_TOL = 1e-12


# -- stratification -----------------------------------------------------------

@dataclass(frozen=True)
class Stratification:
    """Residues R_0..R_{i_max+1}, strata S_0..S_{i_max}, and placement map."""

    delta: float
    ell: int
    i_max: int
    n: int
    residues: tuple[tuple[int, ...], ...]
    strata: tuple[tuple[int, ...], ...]

    def stratum_of(self, v: int) -> Optional[int]:
        """Index of the stratum holding v, or None when v survives past i_max."""
        for i, stratum in enumerate(self.strata):
            if v in stratum:
                return i
        return None

    def threshold(self, i: int) -> float:
        return 1.0 / self.n ** (self.delta * i)

    def check_algebra(self) -> list[str]:
        """R_i = R_0 minus earlier strata, disjointness of strata."""
        problems = []
        r0 = set(self.residues[0])
        removed: set[int] = set()
        for i, stratum in enumerate(self.strata):
            if removed & set(stratum):
                problems.append(f"stratum {i} overlaps an earlier stratum")
            if set(self.residues[i]) != r0 - removed:
                problems.append(f"residue {i} is not R_0 minus earlier strata")
            removed |= set(stratum)
        if set(self.residues[-1]) != r0 - removed:
            problems.append("final residue mismatch")
        return problems


def stratify(g: Graph, r0: Sequence[int], delta: float, ell: int, i_max: int) -> Stratification:
    """Compute the stratification of r0 with exact returning vectors.

    The per-vertex norms at phase i come from powers of the restricted
    walk matrix on R_i: the returning vectors are its columns, so the
    squared column norms give every membership test at once.
    """
    if not (0.0 < delta < 1.0):
        raise GraphError("delta must be in (0,1)")
    if ell < 1 or i_max < 0:
        raise GraphError("need ell >= 1 and i_max >= 0")
    current = sorted({int(v) for v in r0})
    for v in current:
        g._check_vertex(v)
    residues = [tuple(current)]
    strata: list[tuple[int, ...]] = []
    for i in range(i_max + 1):
        if not current:
            strata.append(())
            residues.append(())
            continue
        base = returning_matrix(g, current, ell)
        power = returning_matrix_power(base, i + 1)
        norms = np.einsum("ij,ij->j", power, power)
        thr = 1.0 / g.n ** (delta * i)
        placed = [v for v, sq in zip(current, norms) if sq >= thr]
        strata.append(tuple(placed))
        current = [v for v in current if v not in set(placed)]
        residues.append(tuple(current))
    return Stratification(delta, ell, i_max, g.n, tuple(residues), tuple(strata))


# -- theorem checks over a stratification --------------------------------------

@dataclass(frozen=True)
class ClaimViolation:
    claim: str
    phase: int
    vertex: int
    j: int
    value: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.value


@dataclass(frozen=True)
class StrataClaimsReport:
    violations: tuple[ClaimViolation, ...]
    checked: int
    residue_tail_size: Optional[int] = None
    residue_tail_bound: Optional[float] = None
    tail_applicable: bool = False

    def ok(self) -> bool:
        tail_ok = (not self.tail_applicable
                   or self.residue_tail_size <= self.residue_tail_bound)
        return not self.violations and tail_ok


def strata_claims_check(g: Graph, strat: Stratification,
                        epsilon: Optional[float] = None) -> StrataClaimsReport:
    """Numerically verify the norm claims the stratification must satisfy.

    For every phase i and every s in R_i:
      * squared l2 of q[R_i],s,j is at most n^(-delta(j-1)) for 1 <= j <= i;
      * sup norm of q[R_i],s,j is at most n^(-delta(j-2)) for 2 <= j <= i+1;
    and for s in S_i the l1 mass of q[R_i],s,i+1 is at least n^(-delta).
    With ``epsilon`` given and the stratification deep enough, also check
    that at most epsilon*n/log(n) vertices survive to phase 1/delta + 3.

    These are theorems; any violation beyond fp tolerance is a bug in the
    walk machinery, which is exactly what this check is for.
    """
    n, delta, ell = strat.n, strat.delta, strat.ell
    violations: list[ClaimViolation] = []
    checked = 0
    for i, residue in enumerate(strat.residues[:-1]):
        if not residue:
            continue
        base = returning_matrix(g, residue, ell)
        power = base
        powers = {0: base}
        for j in range(1, i + 2):
            power = power @ power
            powers[j] = power
        stratum = set(strat.strata[i]) if i < len(strat.strata) else set()
        for j in range(1, i + 2):
            mat = powers[j]
            sq = np.einsum("ij,ij->j", mat, mat)
            sup = mat.max(axis=0)
            for col, s in enumerate(residue):
                checked += 1
                if j <= i:
                    bound = n ** (-delta * (j - 1))
                    if sq[col] > bound + FP_TOL:
                        violations.append(ClaimViolation("l2", i, s, j, float(sq[col]), bound))
                if 2 <= j <= i + 1:
                    bound = n ** (-delta * (j - 2))
                    if sup[col] > bound + FP_TOL:
                        violations.append(ClaimViolation("linf", i, s, j, float(sup[col]), bound))
                if j == i + 1 and s in stratum:
                    mass = float(mat[:, col].sum())
                    bound = n ** (-delta)
                    if mass < bound - FP_TOL:
                        violations.append(ClaimViolation("l1", i, s, j, mass, bound))
    tail_size = tail_bound = None
    applicable = False
    if epsilon is not None and n > 1:
        tail_phase = math.ceil(1.0 / delta) + 3
        if tail_phase < len(strat.residues):
            tail_size = len(strat.residues[tail_phase])
            tail_bound = epsilon * n / math.log(n)
            # the tail bound is a theorem only under its proof's premise:
            # epsilon >= log(n) * n^(-2*delta / 2^(ceil(1/delta)+4)); at
            # desk scale that threshold usually exceeds 1 and the bound
            # says nothing
            exponent = 2.0 * delta / 2.0 ** (math.ceil(1.0 / delta) + 4)
            applicable = epsilon >= math.log(n) * n ** (-exponent)
    return StrataClaimsReport(tuple(violations), checked, tail_size, tail_bound,
                              applicable)


@dataclass(frozen=True)
class CorrelationReport:
    lhs: float
    general_bound: float
    stratum_bound: float
    phase: int
    vertex: int

    def holds(self, tol: float = FP_TOL) -> bool:
        return self.lhs >= self.general_bound - tol and self.lhs >= self.stratum_bound - tol


def correlation_check(g: Graph, strat: Stratification, i: int, s: int) -> CorrelationReport:
    """Exact E_{u1,u2 ~ D_{s,i}}[q_{u1,i} . q_{u2,i}] against both lower bounds.

    D_{s,i} is the l1-normalized returning vector at phase i+1.  The
    expectation collapses to |y|^2 with y the D-weighted average of the
    phase-i vectors.  Requires s in S_i.
    """
    if i >= len(strat.strata) or s not in set(strat.strata[i]):
        raise GraphError(f"vertex {s} is not in stratum {i}")
    residue = strat.residues[i]
    n, delta, ell = strat.n, strat.delta, strat.ell
    base = returning_matrix(g, residue, ell)
    q_i = returning_matrix_power(base, i)
    q_next = q_i @ q_i
    col = residue.index(s)
    qs_next = q_next[:, col]
    mass = float(qs_next.sum())
    if mass <= 0.0:
        raise GraphError("zero returning mass; distribution undefined")
    dist = qs_next / mass
    y = q_i @ dist
    lhs = float(y @ y)
    qs_i_sq = float(q_i[:, col] @ q_i[:, col])
    general = (float(qs_next @ qs_next) ** 2) / (mass ** 2 * qs_i_sq)
    stratum = n ** (-delta * (i + 1))
    return CorrelationReport(lhs, general, stratum, i, s)


# -- decomposition profiles -----------------------------------------------------

@dataclass(frozen=True)
class DecomposeProfile:
    """Thresholds driving piece extraction.

    The theory constructor computes every constant from (n, delta, eps, r)
    with the published formulas; at desk scale those collapse to useless
    extremes, so tests and the CLI normally pin explicit values via the
    practical constructor.  Whatever is used gets recorded in the result.
    """

    alpha: float
    i_range: tuple[int, ...]
    hop_sweep_max: int
    chain_t_max: int
    cond_threshold: float
    min_prob: dict[int, float]
    reach_t_max: dict[int, int]
    reach_min_prob: dict[int, float]
    name: str = "custom"

    @staticmethod
    def theory(n: int, delta: float, epsilon: float, r: int) -> "DecomposeProfile":
        alpha = epsilon / (50.0 * r ** 4 * math.log(n)) if n > 1 else epsilon
        i_range = tuple(range(1, 5 * r ** 4 + 1))
        return DecomposeProfile(
            alpha=alpha,
            i_range=i_range,
            hop_sweep_max=max(1, math.ceil(n ** delta)),
            chain_t_max=max(1, math.ceil(n ** delta)) * 4,
            cond_threshold=n ** (-delta / 4.0),
            min_prob={i: 1.0 / (10.0 * n ** (delta * (i + 6))) for i in i_range},
            reach_t_max={i: math.ceil(160.0 * n ** (delta * (i + 7)) / alpha) for i in i_range},
            reach_min_prob={i: alpha / n ** (delta * (2 * i + 14)) for i in i_range},
            name="theory",
        )

    @staticmethod
    def practical(alpha: float, i_range: Sequence[int], hop_sweep_max: int,
                  chain_t_max: int, cond_threshold: float, min_prob: float,
                  reach_t_max: int, reach_min_prob: float) -> "DecomposeProfile":
        irange = tuple(i_range)
        return DecomposeProfile(
            alpha=alpha,
            i_range=irange,
            hop_sweep_max=hop_sweep_max,
            chain_t_max=chain_t_max,
            cond_threshold=cond_threshold,
            min_prob={i: min_prob for i in irange},
            reach_t_max={i: reach_t_max for i in irange},
            reach_min_prob={i: reach_min_prob for i in irange},
            name="practical",
        )


# -- low-conductance piece extraction --------------------------------------------

@dataclass(frozen=True)
class Piece:
    seed: int
    vertices: tuple[int, ...]
    witness_hops: int
    min_probability: float
    conductance_value: float
    level: int
    cut_edges: int
    s_size: int


def find_low_conductance_piece(chain: ProjectedChain, s: int, i: int, delta: float,
                               alpha: float,
                               profile: Optional[DecomposeProfile] = None
                               ) -> Optional[tuple[list[int], int]]:
    """Sweep hop counts and level sets for a trapped, poorly-connected set.

    Returns the first (in (hops, k) order) level set of the hop
    distribution from s whose minimum probability clears the trapping
    threshold, whose conductance in M_S falls below the cut threshold,
    and whose size is at most |S|/2; None when the sweep is exhausted.
    """
    n = chain.n
    if profile is None:
        min_prob = 1.0 / (10.0 * n ** (delta * (i + 6)))
        cond_thr = n ** (-delta / 4.0)
        sweep_max = max(1, math.ceil(n ** delta))
    else:
        min_prob = profile.min_prob.get(i, 1.0 / (10.0 * n ** (delta * (i + 6))))
        cond_thr = profile.cond_threshold
        sweep_max = profile.hop_sweep_max
    hop = chain.hop_matrix().toarray()
    row_out = hop.sum(axis=1)
    half = chain.size / 2.0
    vec = np.zeros(chain.size)
    vec[chain.index_of(s)] = 1.0
    for hops in range(1, sweep_max + 1):
        vec = hop.T @ vec
        order = np.lexsort((chain.subset, -vec))
        probs = vec[order]
        crossing = 0.0
        inside = np.zeros(chain.size, dtype=bool)
        for k in range(1, chain.size):
            j = order[k - 1]
            crossing += row_out[j] - 2.0 * float(hop[j, inside].sum()) - hop[j, j]
            inside[j] = True
            if k > half:
                break
            if probs[k - 1] < min_prob:
                break
            phi = max(crossing, 0.0) / min(k, chain.size - k)
            if phi < cond_thr:
                return [int(chain.subset[x]) for x in order[:k]], hops
    return None


# -- Decompose -------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionResult:
    n: int
    pieces: tuple[Piece, ...]
    excess: dict[int, tuple[int, ...]]
    remainder: tuple[int, ...]
    profile: DecomposeProfile
    delta: float
    ell: int
    extraction_failed: bool = False

    def excess_union(self) -> tuple[int, ...]:
        out: list[int] = []
        for i in sorted(self.excess):
            out.extend(self.excess[i])
        return tuple(out)

    def covered_fraction(self) -> float:
        return sum(len(p.vertices) for p in self.pieces) / self.n if self.n else 0.0

    def check_partition(self) -> list[str]:
        """Pieces, excess, and remainder must partition the vertex set."""
        problems = []
        seen: set[int] = set()
        for p in self.pieces:
            if seen & set(p.vertices):
                problems.append(f"piece at seed {p.seed} overlaps earlier sets")
            seen |= set(p.vertices)
        for i, xs in self.excess.items():
            if seen & set(xs):
                problems.append(f"excess X_{i} overlaps earlier sets")
            seen |= set(xs)
        if seen & set(self.remainder):
            problems.append("remainder overlaps earlier sets")
        seen |= set(self.remainder)
        if seen != set(range(self.n)):
            problems.append("union does not cover the vertex set")
        return problems


def _norm_survivors(g: Graph, live: list[int], i: int, delta: float, ell: int) -> list[int]:
    """Vertices of ``live`` whose phase-(i+1) returning norm clears 1/n^(delta*i)."""
    if not live:
        return []
    base = returning_matrix(g, live, ell)
    power = returning_matrix_power(base, i + 1)
    norms = np.einsum("ij,ij->j", power, power)
    thr = 1.0 / g.n ** (delta * i)
    return [v for v, sq in zip(live, norms) if sq >= thr]


def decompose(g: Graph, epsilon: float, delta: float, r: int, ell: int,
              profile: Optional[DecomposeProfile] = None) -> PartitionResult:
    """Partition V into low-conductance pieces, excess sets, and a remainder.

    Follows the double loop literally: for each level i, while the set of
    norm-survivors S' stays above alpha*n, extract a piece around the
    lowest-id survivor for which the sweep succeeds, remove it from S, and
    recompute S' against the shrunken S.  Survivors for which no piece can
    be extracted are the gap between the procedure and its existence lemma;
    when none succeeds the loop ends and S' drains into the excess set.
    """
    if profile is None:
        profile = DecomposeProfile.theory(g.n, delta, epsilon, r)
    live = list(range(g.n))
    pieces: list[Piece] = []
    excess: dict[int, tuple[int, ...]] = {}
    extraction_failed = False
    for i in profile.i_range:
        if not live:
            excess[i] = ()
            continue
        survivors = _norm_survivors(g, live, i, delta, ell)
        while len(survivors) >= profile.alpha * g.n:
            chain = build_projected_chain(g, live, profile.chain_t_max)
            hit = None
            for s in survivors:
                got = find_low_conductance_piece(chain, s, i, delta, profile.alpha, profile)
                if got is not None:
                    hit = (s, got)
                    break
            if hit is None:
                extraction_failed = True
                break
            s, (members, hops) = hit
            member_set = set(members)
            live_set = set(live)
            cut = sum(1 for u in members for w in g.adjacency(u)
                      if w in live_set and w not in member_set)
            dist = chain.hop_distribution(s, hops)
            ranked = sorted((chain.index_of(v) for v in members), key=lambda j: -dist[j])
            pieces.append(Piece(
                seed=s,
                vertices=tuple(sorted(members)),
                witness_hops=hops,
                min_probability=float(dist[ranked[-1]]),
                conductance_value=conductance(chain, members),
                level=i,
                cut_edges=cut,
                s_size=len(live),
            ))
            live = [v for v in live if v not in member_set]
            survivors = _norm_survivors(g, live, i, delta, ell)
        excess[i] = tuple(survivors)
        removed = set(survivors)
        live = [v for v in live if v not in removed]
        if not live:
            break
    return PartitionResult(g.n, tuple(pieces), excess, tuple(live), profile,
                           delta, ell, extraction_failed)


# -- partition verification -------------------------------------------------------

@dataclass(frozen=True)
class BulletReport:
    name: str
    passed: bool
    detail: str
    slack: float


@dataclass(frozen=True)
class PartitionVerification:
    bullets: tuple[BulletReport, ...]

    def ok(self) -> bool:
        return all(b.passed for b in self.bullets)


def verify_partition(g: Graph, part: PartitionResult, epsilon: float,
                     alpha: Optional[float] = None) -> PartitionVerification:
    """Check every bullet of the partition guarantees that needs no tester.

    Per piece: the edge cut to the rest of the live set at extraction time
    within 2 * cond_threshold * d * |P|, and every member reachable from the
    seed by some exact walk of length at most reach_t_max with probability
    at least reach_min_prob.  Globally: |X| <= epsilon * n / 10.
    """
    prof = part.profile
    alpha = prof.alpha if alpha is None else alpha
    bullets: list[BulletReport] = []
    removed: set[int] = set()
    for idx, piece in enumerate(part.pieces):
        live = [v for v in range(g.n) if v not in removed]
        member_set = set(piece.vertices)
        live_set = set(live)
        cut = sum(1 for u in piece.vertices for w in g.adjacency(u)
                  if w in live_set and w not in member_set)
        bound = 2.0 * prof.cond_threshold * g.d * len(piece.vertices)
        bullets.append(BulletReport(
            name=f"cut[{idx}]",
            passed=cut <= bound + FP_TOL,
            detail=f"seed {piece.seed}: cut {cut} vs bound {bound:.3f}",
            slack=bound - cut,
        ))
        t_cap = prof.reach_t_max.get(piece.level, max(prof.reach_t_max.values(), default=1))
        p_floor = prof.reach_min_prob.get(piece.level,
                                          min(prof.reach_min_prob.values(), default=0.0))
        vec = np.zeros(g.n)
        vec[piece.seed] = 1.0
        best = np.zeros(g.n)
        for _ in range(int(t_cap)):
            vec = evolve(g, vec, 1)
            np.maximum(best, vec, out=best)
            if all(best[v] >= p_floor for v in piece.vertices):
                break
        worst = min(float(best[v]) for v in piece.vertices)
        bullets.append(BulletReport(
            name=f"reach[{idx}]",
            passed=worst >= p_floor,
            detail=f"seed {piece.seed}: min max-prob {worst:.3e} vs floor {p_floor:.3e}",
            slack=worst - p_floor,
        ))
        removed |= member_set
    x_size = len(part.excess_union())
    x_bound = epsilon * g.n / 10.0
    bullets.append(BulletReport(
        name="excess",
        passed=x_size <= x_bound + FP_TOL,
        detail=f"|X| = {x_size} vs eps*n/10 = {x_bound:.3f}",
        slack=x_bound - x_size,
    ))
    return PartitionVerification(tuple(bullets))
