"""The four-procedure minor tester: collision path finding, biclique
search, local search, and the outer driver.

The driver is one-sided by construction: it only ever reports a minor
after the exact checker has produced an embedding that validates against
the input graph, so on minor-free inputs every run accepts.

Parameter profiles: the theory profile computes every count with the
published formulas (astronomically large for any feasible n; usable for
formula audits only), while the practical profile carries explicit
counts, the shipped defaults living in ``profiles/practical.json``.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, replace
from decimal import Decimal, getcontext
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .graph import Graph, GraphError, QueryLedger, complete_bipartite, induced_subgraph, sample_vertex
from .minor import MinorEmbedding, SearchBudgetExceeded, has_minor, validate_embedding
from .walks import WalkPath, derive_rng, lazy_walk_batch


# -- configuration ---------------------------------------------------------------

def _ceil_pow(n: int, exponent: float) -> int:
    """ceil(n**exponent) as an exact integer, however large."""
    getcontext().prec = 60
    getcontext().Emax = 10 ** 9
    value = Decimal(n) ** Decimal(repr(exponent))
    return int(value.to_integral_value(rounding="ROUND_CEILING"))


@dataclass(frozen=True)
class TesterConfig:
    """Everything find_minor needs besides the graph itself."""

    __test__ = False    # not a pytest collectable despite the name

    pattern: Graph
    epsilon: float
    delta: float
    ell: int
    eps_cutoff: float
    outer_repeats: int
    ls_max_len: int
    ls_walks_per_len: int
    biclique_i_range: tuple[int, ...]
    findpath_k: dict[int, int]
    master_seed: int = 0
    profile_name: str = "custom"
    collect_diagnostics: bool = False
    assemble_biclique: bool = False
    minor_budget_s: Optional[float] = None   # per exact-checker call; CLI layering

    @property
    def r(self) -> int:
        return self.pattern.n

    def k_for(self, i: int) -> int:
        try:
            return self.findpath_k[i]
        except KeyError:
            raise GraphError(f"no walk count configured for i={i}") from None

    def check(self) -> None:
        if self.ell < 1 or self.outer_repeats < 1:
            raise GraphError("counts must be at least 1")
        if self.ls_max_len < 1 or self.ls_walks_per_len < 1:
            raise GraphError("local-search counts must be at least 1")
        if self.epsilon < self.eps_cutoff:
            return    # the cutoff branch never touches the walk machinery
        if not self.biclique_i_range:
            raise GraphError("the biclique i-range must be nonempty")
        for i in self.biclique_i_range:
            if self.k_for(i) < 1:
                raise GraphError(f"walk count for i={i} must be at least 1")

    def seeded(self, seed: int) -> "TesterConfig":
        return replace(self, master_seed=seed)


def theory_config(n: int, epsilon: float, delta: float, pattern: Graph,
                  seed: int = 0) -> TesterConfig:
    """The published parameterization, computed exactly.

    The counts grow like n**(35*delta*r^4) and friends: they audit the
    formulas, they do not run at desk scale.  The theory i-range
    [5r^4, 1/delta + 4] is empty for any delta above roughly r^-4, which
    the practical profile papers over explicitly.
    """
    r = pattern.n
    ell = _ceil_pow(n, 5 * delta)
    # n^(-delta/exp(2/delta)) in log space: exp(2/delta) overflows floats
    # for small delta while the cutoff itself tends to 1
    eps_cutoff = math.exp(-delta * math.log(n) * math.exp(-2.0 / delta))
    # for any delta above ~r^-4 this range is empty; kept faithful, the
    # practical profile is what actually runs
    lo, hi = 5 * r ** 4, math.floor(1.0 / delta) + 4
    i_range = tuple(range(lo, hi + 1))
    k = {i: max(1, _ceil_pow(n, delta * (i + 18) / 2.0)) for i in i_range}
    eps_term = math.ceil(epsilon ** -2) if epsilon > 0 else 1
    return TesterConfig(
        pattern=pattern,
        epsilon=epsilon,
        delta=delta,
        ell=ell,
        eps_cutoff=eps_cutoff,
        outer_repeats=eps_term * _ceil_pow(n, 35 * delta * r ** 4),
        ls_max_len=_ceil_pow(n, 7 * delta * r ** 4),
        ls_walks_per_len=math.ceil(1.0 / epsilon) * _ceil_pow(n, 30 * delta * r ** 4),
        biclique_i_range=i_range,
        findpath_k=k,
        master_seed=seed,
        profile_name="theory",
    )


def practical_config(n: int, epsilon: float, pattern: Graph, seed: int = 0,
                     profile: Optional[dict] = None,
                     collect_diagnostics: bool = False) -> TesterConfig:
    """Build a runnable configuration from an explicit profile record.

    The record pins every count; scaling entries (``k_coeff``,
    ``k_growth_base``, ``k_n_exponent``) expand to per-i walk counts
    k(i) = ceil(k_coeff * base**i * n**exp).
    """
    prof = dict(shipped_profile() if profile is None else profile)
    i_range = tuple(int(i) for i in prof["i_range"])
    if "findpath_k" in prof:
        k = {int(i): int(v) for i, v in prof["findpath_k"].items()}
    else:
        coeff = float(prof.get("k_coeff", 1.0))
        base = float(prof.get("k_growth_base", math.sqrt(2.0)))
        expo = float(prof.get("k_n_exponent", 0.25))
        k = {i: max(1, math.ceil(coeff * base ** i * n ** expo)) for i in i_range}
    walks_coeff = float(prof.get("ls_walks_coeff", 1.0))
    walks_exp = float(prof.get("ls_walks_n_exponent", 0.0))
    return TesterConfig(
        pattern=pattern,
        epsilon=epsilon,
        delta=float(prof.get("delta", 0.3)),
        ell=int(prof["ell"]),
        eps_cutoff=float(prof.get("eps_cutoff", 0.0)),
        outer_repeats=int(prof["outer_repeats"]),
        ls_max_len=int(prof["ls_max_len"]),
        ls_walks_per_len=max(1, math.ceil(walks_coeff * n ** walks_exp)),
        biclique_i_range=i_range,
        findpath_k=k,
        master_seed=seed,
        profile_name=str(prof.get("name", "practical")),
        collect_diagnostics=collect_diagnostics,
    )


def shipped_profile() -> dict:
    """The frozen practical defaults shipped with the package."""
    text = resources.files("minorfind").joinpath("profiles/practical.json").read_text()
    return json.loads(text)


# -- counters and report ------------------------------------------------------------

@dataclass
class PhaseCounters:
    walks: int = 0
    walk_steps: int = 0
    findpath_calls: int = 0
    findpath_successes: int = 0
    localsearch_calls: int = 0
    biclique_iterations: int = 0
    f_formed: int = 0
    minor_checks: int = 0
    minor_budget_hits: int = 0

    def note_walks(self, count: int, length: int) -> None:
        self.walks += count
        self.walk_steps += count * length

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class TesterReport:
    __test__ = False    # not a pytest collectable despite the name

    outcome: str                    # "minor-found" | "accept"
    provenance: Optional[str]       # "local-search" | "biclique(i)" | "cutoff"
    embedding: Optional[MinorEmbedding]
    queries: dict
    counters: dict
    bad_events: Optional[dict]
    seed: int
    profile: str
    repeats_used: int
    elapsed_s: float

    def to_text(self) -> str:
        lines = [
            f"outcome: {self.outcome}",
            f"provenance: {self.provenance or '-'}",
            f"seed: {self.seed}",
            f"profile: {self.profile}",
            f"repeats used: {self.repeats_used}",
            f"neighbor queries: {self.queries['neighbor_queries']}",
            f"vertex samples: {self.queries['vertex_samples']}",
            f"induced-subgraph queries: {self.queries['induced_subgraph_queries']}",
            f"elapsed: {self.elapsed_s:.3f}s",
        ]
        for key, val in sorted(self.counters.items()):
            lines.append(f"{key}: {val}")
        if self.bad_events is not None:
            for t in (1, 2, 3):
                lines.append(f"bad events type {t}: {self.bad_events.get(t, 0)}")
        return "\n".join(lines)

    CSV_COLUMNS = ("outcome", "provenance", "seed", "profile", "repeats_used",
                   "neighbor_queries", "vertex_samples", "induced_subgraph_queries",
                   "walks", "walk_steps", "findpath_calls", "findpath_successes",
                   "f_formed", "minor_checks", "elapsed_s")

    def to_csv_row(self) -> list:
        return [self.outcome, self.provenance or "", self.seed, self.profile,
                self.repeats_used,
                self.queries["neighbor_queries"], self.queries["vertex_samples"],
                self.queries["induced_subgraph_queries"],
                self.counters["walks"], self.counters["walk_steps"],
                self.counters["findpath_calls"], self.counters["findpath_successes"],
                self.counters["f_formed"], self.counters["minor_checks"],
                f"{self.elapsed_s:.4f}"]


# -- FindPath -------------------------------------------------------------------------

def find_path(g: Graph, u: int, v: int, k: int, i: int, ell: int,
              rng: np.random.Generator, ledger: Optional[QueryLedger] = None,
              counters: Optional[PhaseCounters] = None,
              keep_walks: bool = False):
    """k walks of length 2^i * ell from each endpoint; the lexicographically
    least colliding pair of walks when two terminate at the same vertex.

    Returns (walk_from_u, walk_from_v) or None; with ``keep_walks`` the
    full walk arrays ride along for diagnostics, as
    ((walk_u, walk_v), walks_u, walks_v) or (None, walks_u, walks_v).
    """
    if k < 1:
        raise GraphError("need at least one walk per endpoint")
    length = (2 ** i) * ell
    walks_u = lazy_walk_batch(g, np.full(k, u, dtype=np.int64), length, rng, ledger)
    walks_v = lazy_walk_batch(g, np.full(k, v, dtype=np.int64), length, rng, ledger)
    if counters is not None:
        counters.note_walks(2 * k, length)
        counters.findpath_calls += 1
    pair = _least_collision(walks_u, walks_v)
    if pair is not None and counters is not None:
        counters.findpath_successes += 1
    return (pair, walks_u, walks_v) if keep_walks else pair


def _least_collision(walks_u: np.ndarray, walks_v: np.ndarray):
    """Lexicographically least colliding (u-walk, v-walk) pair, or None."""
    ends_v = walks_v[:, -1]
    first_j: dict[int, int] = {}
    for j in range(len(ends_v) - 1, -1, -1):
        first_j[int(ends_v[j])] = j
    for a in range(len(walks_u)):
        j = first_j.get(int(walks_u[a, -1]))
        if j is not None:
            return WalkPath(walks_u[a]), WalkPath(walks_v[j])
    return None


def collision_probability_exact(g: Graph, u: int, v: int, k: int, i: int, ell: int) -> float:
    """P(find_path succeeds), computed from exact endpoint distributions.

    Exact for any k via enumeration over the multiset of u-endpoints when
    k <= 3 (O(n^k)); for larger k on two-vertex graphs a closed form over
    endpoint counts is used.  The oracle side of the collision statistics.
    """
    from .walks import walk_distribution
    length = (2 ** i) * ell
    pu = walk_distribution(g, u, length).values
    pv = walk_distribution(g, v, length).values
    n = g.n
    if n == 2:
        p_no = 0.0
        for c in range(k + 1):
            w_u = math.comb(k, c) * pu[0] ** c * pu[1] ** (k - c)
            if c == k:
                avoid = pv[1] ** k
            elif c == 0:
                avoid = pv[0] ** k
            else:
                avoid = 0.0
            p_no += w_u * avoid
        return 1.0 - p_no
    if k > 3:
        raise GraphError("exact collision probability implemented for k <= 3")
    idx = np.arange(n)
    p_no = 0.0
    if k == 1:
        return float(pu @ pv)
    if k == 2:
        for a in idx:
            for b in idx:
                avoid = 1.0 - pv[a] - (pv[b] if b != a else 0.0)
                p_no += pu[a] * pu[b] * avoid ** 2
        return 1.0 - p_no
    for a in idx:
        for b in idx:
            for c in idx:
                mass = pv[a] + (pv[b] if b != a else 0.0) + (pv[c] if c not in (a, b) else 0.0)
                p_no += pu[a] * pu[b] * pu[c] * (1.0 - mass) ** 3
    return 1.0 - p_no


# -- FindBiclique ----------------------------------------------------------------------

@dataclass(frozen=True)
class BicliqueOutcome:
    i: int
    subgraph: Graph
    vertex_map: list[int]
    embedding: Optional[MinorEmbedding]
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    connector_paths: dict
    walk_sets: Optional[dict]
    bad_events: Optional[dict]
    assembled: Optional[MinorEmbedding]


def _paths_to_graph(g: Graph, paths: Sequence[np.ndarray]) -> tuple[Graph, list[int]]:
    """The union of walks as a subgraph: traversed edges only."""
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for path in paths:
        arr = path.vertices if isinstance(path, WalkPath) else path
        vertices.update(int(x) for x in arr)
        for a, b in zip(arr[:-1], arr[1:]):
            a, b = int(a), int(b)
            if a != b:
                edges.add((min(a, b), max(a, b)))
    ids = sorted(vertices)
    index = {v: j for j, v in enumerate(ids)}
    sub = Graph(len(ids), g.d, [(index[a], index[b]) for a, b in edges])
    return sub, ids


def _remap_embedding(emb: MinorEmbedding, ids: list[int]) -> MinorEmbedding:
    return MinorEmbedding(
        emb.pattern,
        {x: frozenset(ids[v] for v in s) for x, s in emb.branch_sets.items()},
        {e: (ids[a], ids[b]) for e, (a, b) in emb.edge_witnesses.items()},
    )


def _run_minor_check(g: Graph, h: Graph, cfg: TesterConfig,
                     counters: PhaseCounters) -> Optional[MinorEmbedding]:
    counters.minor_checks += 1
    deadline = None
    if cfg.minor_budget_s is not None:
        deadline = time.monotonic() + cfg.minor_budget_s
    try:
        return has_minor(g, h, deadline)
    except SearchBudgetExceeded:
        counters.minor_budget_hits += 1
        return None


def find_biclique(g: Graph, s: int, cfg: TesterConfig, rng: np.random.Generator,
                  ledger: Optional[QueryLedger] = None,
                  counters: Optional[PhaseCounters] = None) -> Optional[BicliqueOutcome]:
    """For each configured i: sample endpoint multisets A and B with 2r^2
    walks of length 2^(i+1) * ell, try to connect every pair in A x B via
    find_path, and when the whole grid connects, hand the union of the
    discovered paths to the exact checker.

    Stops at the first certified minor.  When the grid connects at some i
    but the checker finds nothing, the loop continues; the last such F is
    still returned afterwards (with no embedding) for diagnostics.
    """
    counters = counters if counters is not None else PhaseCounters()
    r = cfg.r
    side = r * r
    formed: Optional[BicliqueOutcome] = None
    for i in cfg.biclique_i_range:
        counters.biclique_iterations += 1
        seed_len = (2 ** (i + 1)) * cfg.ell
        seeds = lazy_walk_batch(g, np.full(2 * side, s, dtype=np.int64), seed_len,
                                rng, ledger)
        counters.note_walks(2 * side, seed_len)
        endpoints = seeds[:, -1]
        side_a = tuple(int(x) for x in endpoints[:side])
        side_b = tuple(int(x) for x in endpoints[side:])
        k = cfg.k_for(i)
        length = (2 ** i) * cfg.ell
        pairs = [(ai, bj) for ai in range(side) for bj in range(side)]
        # the box runs every pair before judging the grid, so failed pairs
        # still cost their walks; one fused batch covers the whole grid
        starts_u = np.repeat([side_a[ai] for ai, _ in pairs], k).astype(np.int64)
        starts_v = np.repeat([side_b[bj] for _, bj in pairs], k).astype(np.int64)
        walks_u = lazy_walk_batch(g, starts_u, length, rng, ledger)
        walks_v = lazy_walk_batch(g, starts_v, length, rng, ledger)
        counters.note_walks(2 * len(pairs) * k, length)
        counters.findpath_calls += len(pairs)
        connectors: dict = {}
        walk_sets: Optional[dict] = {} if cfg.collect_diagnostics else None
        all_found = True
        for p, (ai, bj) in enumerate(pairs):
            block_u = walks_u[p * k:(p + 1) * k]
            block_v = walks_v[p * k:(p + 1) * k]
            if cfg.collect_diagnostics:
                walk_sets[("A", ai, bj)] = block_u
                walk_sets[("B", bj, ai)] = block_v
            pair = _least_collision(block_u, block_v)
            if pair is None:
                all_found = False
            else:
                counters.findpath_successes += 1
                connectors[(ai, bj)] = pair
        if not all_found:
            continue
        counters.f_formed += 1
        flat: list[np.ndarray] = []
        for wu, wv in connectors.values():
            flat.append(wu.vertices)
            flat.append(wv.vertices)
        sub, ids = _paths_to_graph(g, flat)
        emb = _run_minor_check(sub, cfg.pattern, cfg, counters)
        mapped = _remap_embedding(emb, ids) if emb is not None else None
        bad = None
        if cfg.collect_diagnostics and walk_sets is not None:
            tau = ((2 ** i) * cfg.ell) // 2
            bad = detect_bad_events(walk_sets, connectors, tau)
        assembled = None
        if cfg.assemble_biclique:
            tau = ((2 ** i) * cfg.ell) // 2
            assembled = assemble_biclique_minor(g, connectors, side_a, side_b, tau)
        if mapped is not None:
            problems = validate_embedding(g, cfg.pattern, mapped)
            if problems:
                raise AssertionError(f"biclique embedding failed validation: {problems}")
            return BicliqueOutcome(i, sub, ids, mapped, side_a, side_b,
                                   connectors, walk_sets, bad, assembled)
        formed = BicliqueOutcome(i, sub, ids, None, side_a, side_b,
                                 connectors, walk_sets, bad, assembled)
    return formed


# -- LocalSearch -------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalSearchOutcome:
    embedding: Optional[MinorEmbedding]
    ball_size: int


def local_search(g: Graph, s: int, cfg: TesterConfig, rng: np.random.Generator,
                 ledger: Optional[QueryLedger] = None,
                 counters: Optional[PhaseCounters] = None) -> LocalSearchOutcome:
    """Collect endpoints of walks of every length up to ls_max_len, induce
    the subgraph on them, and run the exact checker on it."""
    counters = counters if counters is not None else PhaseCounters()
    counters.localsearch_calls += 1
    members: set[int] = {s}
    for length in range(1, cfg.ls_max_len + 1):
        walks = lazy_walk_batch(g, np.full(cfg.ls_walks_per_len, s, dtype=np.int64),
                                length, rng, ledger)
        counters.note_walks(cfg.ls_walks_per_len, length)
        members.update(int(x) for x in walks[:, -1])
    sub, ids = induced_subgraph(g, members, ledger)
    emb = _run_minor_check(sub, cfg.pattern, cfg, counters)
    if emb is None:
        return LocalSearchOutcome(None, len(members))
    mapped = _remap_embedding(emb, ids)
    problems = validate_embedding(g, cfg.pattern, mapped)
    if problems:
        raise AssertionError(f"local-search embedding failed validation: {problems}")
    return LocalSearchOutcome(mapped, len(members))


# -- FindMinor ---------------------------------------------------------------------------

def find_minor(g: Graph, cfg: TesterConfig) -> TesterReport:
    """The outer driver.  Below the epsilon cutoff it queries the whole
    graph and runs the exact checker; otherwise it repeatedly samples a
    start vertex and tries local search then biclique search, stopping at
    the first validated embedding."""
    cfg.check()
    started = time.monotonic()
    ledger = QueryLedger()
    counters = PhaseCounters()
    bad_events: Optional[dict] = {1: 0, 2: 0, 3: 0} if cfg.collect_diagnostics else None

    def report(outcome: str, provenance: Optional[str], emb: Optional[MinorEmbedding],
               repeats: int) -> TesterReport:
        if emb is not None:
            problems = validate_embedding(g, cfg.pattern, emb)
            if problems:
                raise AssertionError(f"reported embedding failed validation: {problems}")
        return TesterReport(outcome, provenance, emb, ledger.snapshot(),
                            counters.as_dict(), bad_events, cfg.master_seed,
                            cfg.profile_name, repeats,
                            time.monotonic() - started)

    if cfg.epsilon < cfg.eps_cutoff:
        ledger.charge_neighbor(g.n * g.d)
        emb = _run_minor_check(g, cfg.pattern, cfg, counters)
        if emb is not None:
            return report("minor-found", "cutoff", emb, 0)
        return report("accept", None, None, 0)

    for rep in range(cfg.outer_repeats):
        rng_sample = derive_rng(cfg.master_seed, rep, 0)
        s = sample_vertex(g, rng_sample, ledger)
        ls = local_search(g, s, cfg, derive_rng(cfg.master_seed, rep, 1), ledger, counters)
        if ls.embedding is not None:
            return report("minor-found", "local-search", ls.embedding, rep + 1)
        fb = find_biclique(g, s, cfg, derive_rng(cfg.master_seed, rep, 2), ledger, counters)
        if fb is not None:
            if bad_events is not None and fb.bad_events is not None:
                for t in (1, 2, 3):
                    bad_events[t] += fb.bad_events.get(t, 0)
            if fb.embedding is not None:
                return report("minor-found", f"biclique({fb.i})", fb.embedding, rep + 1)
    return report("accept", None, None, cfg.outer_repeats)


# -- Claim-style biclique assembly and bad-event diagnostics -------------------------------

def _loop_erase(path: np.ndarray) -> list[int]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for x in path:
        v = int(x)
        if v in pos:
            del_from = pos[v] + 1
            for w in out[del_from:]:
                del pos[w]
            del out[del_from:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def assemble_biclique_minor(g: Graph, connectors: dict, side_a: Sequence[int],
                            side_b: Sequence[int], tau: int) -> Optional[MinorEmbedding]:
    """Build the complete-bipartite minor the connector grid promises.

    Each connected pair contributes a simple a-to-b path split into a
    prefix inside the first half of the a-walk, a suffix inside the first
    half of the b-walk, and a middle.  Prefixes rooted at the same
    multiset element merge into its branch set; middles are absorbed into
    the a-side set of their own pair.  Intersections (the bad events)
    surface as validation failures, in which case this returns None; an
    invalid embedding is never returned.
    """
    na, nb = len(side_a), len(side_b)
    if set(connectors) != {(i, j) for i in range(na) for j in range(nb)}:
        return None
    branch: dict[int, set[int]] = {x: set() for x in range(na + nb)}
    witnesses: dict[tuple[int, int], tuple[int, int]] = {}
    for (ai, bj), (walk_a, walk_b) in connectors.items():
        wa = walk_a.vertices if isinstance(walk_a, WalkPath) else np.asarray(walk_a)
        wb = walk_b.vertices if isinstance(walk_b, WalkPath) else np.asarray(walk_b)
        if int(wa[-1]) != int(wb[-1]):
            return None
        sp_a = _loop_erase(wa)
        sp_b = _loop_erase(wb)
        in_b = {v: idx for idx, v in enumerate(sp_b)}
        meet_a = next(idx for idx, v in enumerate(sp_a) if v in in_b)
        combined = sp_a[:meet_a + 1] + list(reversed(sp_b[:in_b[sp_a[meet_a]]]))
        first_half_a = set(int(x) for x in wa[:tau + 1])
        first_half_b = set(int(x) for x in wb[:tau + 1])
        p_end = 0
        while p_end + 1 < len(combined) and combined[p_end + 1] in first_half_a:
            p_end += 1
        s_start = len(combined) - 1
        while s_start - 1 > p_end and combined[s_start - 1] in first_half_b:
            s_start -= 1
        branch[ai].update(combined[:p_end + 1])
        branch[na + bj].update(combined[s_start:])
        # middle rides with the a-side set of this pair
        branch[ai].update(combined[p_end + 1:s_start])
        if s_start == 0:
            return None
        witnesses[(ai, na + bj)] = (combined[s_start - 1], combined[s_start])
    pattern = complete_bipartite(na, nb)
    emb = MinorEmbedding(pattern,
                         {x: frozenset(v for v in vs) for x, vs in branch.items()},
                         witnesses)
    if validate_embedding(g, pattern, emb):
        return None
    return emb


def detect_bad_events(walk_sets: dict, connectors: dict, tau: int) -> dict:
    """Count the three intersection patterns that can break disjointness.

    ``walk_sets`` maps (side, element index, partner index) to the walk
    array performed in that find_path call; ``connectors`` maps (ai, bj)
    to the returned pair.  Counts are over witnessing combinations:
    type 1 per (other element, pair), type 2 per ordered triple, type 3
    per colliding walk pair.
    """
    conpath_sets: dict[tuple[int, int], set[int]] = {}
    for (ai, bj), (walk_a, walk_b) in connectors.items():
        wa = walk_a.vertices if isinstance(walk_a, WalkPath) else np.asarray(walk_a)
        wb = walk_b.vertices if isinstance(walk_b, WalkPath) else np.asarray(walk_b)
        conpath_sets[(ai, bj)] = set(int(x) for x in wa) | set(int(x) for x in wb)
    elements = sorted({(side, idx) for side, idx, _ in walk_sets})
    union_walk_vertices: dict[tuple[str, int], set[int]] = {e: set() for e in elements}
    for (side, idx, partner), walks in walk_sets.items():
        for row in np.atleast_2d(walks):
            union_walk_vertices[(side, idx)].update(int(x) for x in row)
    counts = {1: 0, 2: 0, 3: 0}
    for (ai, bj), cset in conpath_sets.items():
        for elem in elements:
            if elem in (("A", ai), ("B", bj)):
                continue
            if union_walk_vertices[elem] & cset:
                counts[1] += 1
    for (side, idx, partner), walks in walk_sets.items():
        for (ai, bj), cset in conpath_sets.items():
            if side == "A" and idx == ai and partner != bj:
                if any(set(int(x) for x in row[tau:]) & cset for row in np.atleast_2d(walks)):
                    counts[2] += 1
            if side == "B" and idx == bj and partner != ai:
                if any(set(int(x) for x in row[tau:]) & cset for row in np.atleast_2d(walks)):
                    counts[2] += 1
    for (ai, bj) in conpath_sets:
        walks_a = np.atleast_2d(walk_sets.get(("A", ai, bj), np.empty((0, 1), dtype=np.int64)))
        walks_b = np.atleast_2d(walk_sets.get(("B", bj, ai), np.empty((0, 1), dtype=np.int64)))
        for row_a in walks_a:
            for row_b in walks_b:
                if int(row_a[-1]) != int(row_b[-1]):
                    continue
                early_a = set(int(x) for x in row_a[:tau + 1])
                early_b = set(int(x) for x in row_b[:tau + 1])
                full_a = set(int(x) for x in row_a)
                full_b = set(int(x) for x in row_b)
                if (early_a & full_b) or (early_b & full_a):
                    counts[3] += 1
    return counts
