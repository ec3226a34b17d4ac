"""Command line front end.

Subcommands: generate (instance families), test (run the tester), analyze
(exact analysis suites), bench (query-scaling measurements), validate
(check a certificate file).  Exit codes: 0 accept/ok, 1 minor found (a
certificate is written when requested), 2 usage error, 3 time budget
exceeded mid-search.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import generators, plots
from .graph import (Graph, GraphError, complete_bipartite, complete_graph,
                    cycle_graph, path_graph, read_graph, validate, write_graph)
from .minor import read_certificate, validate_embedding, write_certificate
from .projchain import build_projected_chain, kac_check, ls_curve
from .strata import (DecomposeProfile, correlation_check, decompose,
                     strata_claims_check, stratify, verify_partition)
from .tester import (TesterReport, find_minor, practical_config,
                     theory_config)
from .walks import returning_mass_lower_bound, returning_product_identity

EXIT_OK = 0
EXIT_MINOR = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def parse_pattern(spec: str) -> Graph:
    """K5, K33, K<r>, K<a>:<b>, C<k>, P<k>, or a graph file path."""
    s = spec.strip()
    if s.upper() == "K33":
        return complete_bipartite(3, 3)
    try:
        if s[0] in "Kk" and ":" in s:
            a, b = s[1:].split(":")
            return complete_bipartite(int(a), int(b))
        if s[0] in "Kk":
            return complete_graph(int(s[1:]))
        if s[0] in "Cc":
            return cycle_graph(int(s[1:]))
        if s[0] in "Pp":
            return path_graph(int(s[1:]))
    except (ValueError, IndexError):
        pass
    if Path(s).exists():
        return read_graph(s)
    raise GraphError(f"cannot parse pattern '{spec}'")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None, help="CSV/report output path")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minorfind",
                                 description="find forbidden minors in bounded-degree graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a benchmark instance")
    g.add_argument("--family", required=True,
                   choices=["grid", "random-regular", "planar-plus-matching",
                            "tree", "cycle", "fan", "ladder"])
    g.add_argument("--w", type=int, default=10)
    g.add_argument("--h", type=int, default=10)
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--d", type=int, default=8)
    g.add_argument("--extra", type=int, default=0)
    _add_common(g)

    t = sub.add_parser("test", help="run the minor tester on a graph file")
    t.add_argument("--graph", required=True)
    t.add_argument("--pattern", default="K5")
    t.add_argument("--epsilon", type=float, default=0.1)
    t.add_argument("--delta", type=float, default=0.3)
    t.add_argument("--profile", choices=["theory", "practical"], default="practical")
    t.add_argument("--profile-file", type=str, default=None)
    t.add_argument("--time-budget", type=float, default=None,
                   help="seconds allowed per exact-checker call")
    t.add_argument("--certificate", type=str, default=None,
                   help="write a found embedding here")
    t.add_argument("--diagnostics", action="store_true",
                   help="collect bad-event diagnostics (slow)")
    _add_common(t)

    a = sub.add_parser("analyze", help="exact analysis suites")
    a.add_argument("--graph", required=True)
    a.add_argument("--suite", required=True,
                   choices=["stratify", "decompose", "ls-curve", "kac", "lemmas"])
    a.add_argument("--delta", type=float, default=0.3)
    a.add_argument("--ell", type=int, default=1)
    a.add_argument("--imax", type=int, default=3)
    a.add_argument("--epsilon", type=float, default=0.5)
    a.add_argument("--r", type=int, default=3)
    a.add_argument("--source", type=int, default=0)
    a.add_argument("--hops", type=int, default=3)
    a.add_argument("--tmax", type=int, default=400)
    a.add_argument("--subset-size", type=int, default=None)
    a.add_argument("--alpha", type=float, default=0.05)
    a.add_argument("--no-plot", action="store_true")
    _add_common(a)

    b = sub.add_parser("bench", help="query scaling across sizes")
    b.add_argument("--family", default="random-regular",
                   choices=["grid", "random-regular", "planar-plus-matching", "tree"])
    b.add_argument("--sizes", default="4096,8192,16384",
                   help="comma-separated vertex counts")
    b.add_argument("--d", type=int, default=8)
    b.add_argument("--extra-frac", type=float, default=0.05)
    b.add_argument("--seeds", type=int, default=5)
    b.add_argument("--pattern", default="K5")
    b.add_argument("--epsilon", type=float, default=0.1)
    b.add_argument("--profile-file", type=str, default=None)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--time-budget", type=float, default=None)
    b.add_argument("--no-plot", action="store_true")
    _add_common(b)

    v = sub.add_parser("validate", help="check a certificate against a graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--certificate", required=True)
    _add_common(v)
    return ap


# -- generate ---------------------------------------------------------------------

def cmd_generate(args) -> int:
    fam = args.family
    if fam == "grid":
        g = generators.grid(args.w, args.h)
    elif fam == "random-regular":
        g = generators.random_regular(args.n, args.d, args.seed)
    elif fam == "planar-plus-matching":
        g = generators.planar_plus_matching(args.n, args.extra, args.seed)
    else:
        g = generators.minor_free_family(fam, args.n, args.seed)
    bad = validate(g)
    if bad:
        raise AssertionError(f"generator produced an invalid graph: {bad[:3]}")
    if args.out:
        write_graph(g, args.out)
        print(f"wrote {g.n} vertices, {g.m} edges (d={g.d}) to {args.out}")
    else:
        write_graph(g, "/dev/stdout")
    return EXIT_OK


# -- test ---------------------------------------------------------------------------

def _make_config(pattern: Graph, n: int, args):
    if args.profile == "theory":
        return theory_config(n, args.epsilon, args.delta, pattern, seed=args.seed)
    prof = None
    if args.profile_file:
        prof = json.loads(Path(args.profile_file).read_text())
    cfg = practical_config(n, args.epsilon, pattern, seed=args.seed, profile=prof,
                           collect_diagnostics=getattr(args, "diagnostics", False))
    if args.time_budget is not None:
        from dataclasses import replace
        cfg = replace(cfg, minor_budget_s=args.time_budget)
    return cfg


def _write_report_csv(report: TesterReport, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TesterReport.CSV_COLUMNS)
        writer.writerow(report.to_csv_row())


def cmd_test(args) -> int:
    g = read_graph(args.graph)
    pattern = parse_pattern(args.pattern)
    cfg = _make_config(pattern, g.n, args)
    report = find_minor(g, cfg)
    print(report.to_text())
    if args.out:
        _write_report_csv(report, args.out)
    if report.outcome == "minor-found":
        if args.certificate:
            write_certificate(report.embedding, args.certificate)
            print(f"certificate written to {args.certificate}")
        return EXIT_MINOR
    if report.counters.get("minor_budget_hits", 0) > 0:
        print("time budget exhausted during exact checks; result inconclusive")
        return EXIT_BUDGET
    return EXIT_OK


# -- analyze -------------------------------------------------------------------------

def _maybe_plot(args, render) -> None:
    if args.out and not args.no_plot:
        render(str(Path(args.out).with_suffix(".png")))


def cmd_analyze(args) -> int:
    g = read_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    if args.suite == "stratify":
        strat = stratify(g, range(g.n), args.delta, args.ell, args.imax)
        rows = [(v, strat.stratum_of(v)) for v in range(g.n)]
        for i, stratum in enumerate(strat.strata):
            print(f"stratum {i}: {len(stratum)} vertices")
        print(f"beyond i_max: {len(strat.residues[-1])}")
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["vertex", "stratum"])
                for v, s in rows:
                    w.writerow([v, s if s is not None else ""])
        _maybe_plot(args, lambda p: plots.strata_figure(strat, p))
        return EXIT_OK
    if args.suite == "decompose":
        prof = DecomposeProfile.practical(
            alpha=args.alpha, i_range=range(1, args.imax + 1), hop_sweep_max=16,
            chain_t_max=max(args.tmax, 16), cond_threshold=0.15, min_prob=0.005,
            reach_t_max=200, reach_min_prob=1e-5)
        part = decompose(g, args.epsilon, args.delta, args.r, args.ell, prof)
        ver = verify_partition(g, part, args.epsilon)
        print(f"pieces: {len(part.pieces)}  covered: {part.covered_fraction():.1%}  "
              f"excess: {len(part.excess_union())}  remainder: {len(part.remainder)}")
        for bullet in ver.bullets:
            print(f"  {bullet.name}: {'ok' if bullet.passed else 'VIOLATED'} ({bullet.detail})")
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["vertex", "piece"])
                owner = {}
                for idx, piece in enumerate(part.pieces):
                    for v in piece.vertices:
                        owner[v] = idx
                for v in range(g.n):
                    w.writerow([v, owner.get(v, "")])
        _maybe_plot(args, lambda p: plots.partition_figure(part, p))
        return EXIT_OK if ver.ok() else EXIT_MINOR
    if args.suite == "ls-curve":
        chain = build_projected_chain(g, range(g.n), args.tmax)
        curves = [ls_curve(chain, args.source, t) for t in range(args.hops + 1)]
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["t", "k", "h_t_k"])
                for curve in curves:
                    for k, val in enumerate(curve.breakpoints):
                        w.writerow([curve.hops, k, f"{val:.12g}"])
        print(f"curves for t=0..{args.hops} from vertex {args.source}; "
              f"h_{args.hops}(1) = {curves[-1].breakpoints[1]:.6g}")
        _maybe_plot(args, lambda p: plots.ls_curve_figure(curves, p))
        return EXIT_OK
    if args.suite == "kac":
        size = args.subset_size or max(1, g.n // 2)
        subset = sorted(rng.choice(g.n, size=size, replace=False).tolist())
        res = kac_check(g, subset, args.hops, args.tmax)
        print(f"expected length: {res.expected:.6f}  target h*n/|S|: {res.target:.6f}")
        print(f"residual bound: {res.residual_bound:.3e}  status: {res.status}  "
              f"slack: {res.slack:.3e}")
        if args.out:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["expected", "target", "residual_bound", "slack", "status"])
                w.writerow([res.expected, res.target, res.residual_bound, res.slack, res.status])
        return EXIT_OK if res.status == "ok" and res.slack >= 0 else EXIT_MINOR
    if args.suite == "lemmas":
        violations = 0
        strat = stratify(g, range(g.n), args.delta, args.ell, args.imax)
        claims = strata_claims_check(g, strat, epsilon=args.epsilon)
        violations += len(claims.violations)
        for i, stratum in enumerate(strat.strata):
            for s in stratum:
                rep = correlation_check(g, strat, i, s)
                if not rep.holds():
                    violations += 1
        pairs = 0
        for _ in range(20):
            size = max(2, int(rng.integers(2, g.n + 1)))
            subset = sorted(rng.choice(g.n, size=size, replace=False).tolist())
            s, u = subset[0], subset[-1]
            i = int(rng.integers(0, 2))
            lhs, rhs = returning_product_identity(g, subset, s, u, i, args.ell)
            if abs(lhs - rhs) > 1e-10:
                violations += 1
            avg, bound = returning_mass_lower_bound(g, subset, i, args.ell)
            if avg < bound - 1e-12:
                violations += 1
            pairs += 1
        print(f"checked {claims.checked} strata norms, {pairs} identity sweeps: "
              f"{violations} violations")
        return EXIT_OK if violations == 0 else EXIT_MINOR
    raise GraphError(f"unknown suite {args.suite}")


# -- bench ---------------------------------------------------------------------------

def _bench_one(task) -> dict:
    fam, n, d, extra_frac, seed, pattern_spec, epsilon, prof, budget = task
    if fam == "random-regular":
        g = generators.random_regular(n, d, seed)
    elif fam == "grid":
        side = int(math.isqrt(n))
        g = generators.grid(side, side)
    elif fam == "planar-plus-matching":
        g = generators.planar_plus_matching(n, int(extra_frac * n), seed)
    else:
        g = generators.random_tree(n, seed)
    pattern = parse_pattern(pattern_spec)
    cfg = practical_config(g.n, epsilon, pattern, seed=seed, profile=prof)
    if budget is not None:
        from dataclasses import replace
        cfg = replace(cfg, minor_budget_s=budget)
    report = find_minor(g, cfg)
    return {"n": n, "actual_n": g.n, "seed": seed, "outcome": report.outcome,
            "queries": report.queries["neighbor_queries"],
            "elapsed": report.elapsed_s}


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    prof = json.loads(Path(args.profile_file).read_text()) if args.profile_file else None
    tasks = [(args.family, n, args.d, args.extra_frac, seed, args.pattern,
              args.epsilon, prof, args.time_budget)
             for n in sizes for seed in range(args.seed, args.seed + args.seeds)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, tasks))
    else:
        results = [_bench_one(t) for t in tasks]
    rows = []
    prev_median = None
    for n in sizes:
        runs = sorted((r for r in results if r["n"] == n), key=lambda r: r["seed"])
        med = statistics.median(r["queries"] for r in runs)
        rate = sum(1 for r in runs if r["outcome"] == "minor-found") / len(runs)
        ratio = med / prev_median if prev_median else float("nan")
        rows.append({"family": args.family, "n": n, "seeds": len(runs),
                     "median_queries": med, "success_rate": rate,
                     "doubling_ratio": ratio})
        prev_median = med
        print(f"n={n:>8}  median queries={med:>12.0f}  success={rate:.2f}  "
              f"ratio={ratio:.3f}" if not math.isnan(ratio) else
              f"n={n:>8}  median queries={med:>12.0f}  success={rate:.2f}")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=["family", "n", "seeds", "median_queries",
                                               "success_rate", "doubling_ratio"])
            w.writeheader()
            for row in rows:
                w.writerow(row)
        if not args.no_plot:
            plots.bench_figure(rows, str(Path(args.out).with_suffix(".png")))
    return EXIT_OK


# -- validate -----------------------------------------------------------------------

def cmd_validate(args) -> int:
    g = read_graph(args.graph)
    emb = read_certificate(args.certificate)
    problems = validate_embedding(g, emb.pattern, emb)
    if problems:
        for p in problems:
            print(f"violation: {p}")
        return EXIT_MINOR
    print(f"certificate ok: {emb.pattern.n}-vertex pattern, "
          f"{len(emb.vertices_used())} graph vertices used")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"generate": cmd_generate, "test": cmd_test, "analyze": cmd_analyze,
                "bench": cmd_bench, "validate": cmd_validate}
    try:
        return handlers[args.command](args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
