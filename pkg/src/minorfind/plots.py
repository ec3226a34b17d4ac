"""Figure rendering for CLI reports.

Every report path that writes delimited output can drop a matplotlib
figure next to it; these helpers own the styling so the CLI stays thin.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def bench_figure(rows: list[dict], path: str) -> None:
    """Median query counts against n on log-log axes, with a sqrt(n) guide."""
    ns = np.array([row["n"] for row in rows], dtype=float)
    medians = np.array([row["median_queries"] for row in rows], dtype=float)
    success = np.array([row["success_rate"] for row in rows], dtype=float)
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax.loglog(ns, medians, "o-", label="median queries")
    if medians[0] > 0:
        guide = medians[0] * np.sqrt(ns / ns[0])
        ax.loglog(ns, guide, "--", color="gray", label=r"$\sqrt{n}$ guide")
    ax.set_xlabel("n")
    ax.set_ylabel("neighbor queries")
    ax.legend(fontsize=8)
    ax.set_title("query scaling")
    ax2.semilogx(ns, success, "s-", color="tab:green")
    ax2.set_ylim(-0.05, 1.05)
    ax2.set_xlabel("n")
    ax2.set_ylabel("success rate")
    ax2.set_title("far-instance success")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def ls_curve_figure(curves: list, path: str) -> None:
    """Overlay of excess-probability curves for successive hop counts."""
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for curve in curves:
        xs = np.arange(len(curve.breakpoints))
        ax.plot(xs, curve.breakpoints, label=f"t={curve.hops}")
    ax.set_xlabel("k")
    ax.set_ylabel("h_t(k)")
    ax.set_title(f"curve from vertex {curves[0].source}" if curves else "curve")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def strata_figure(strat, path: str) -> None:
    """Stratum occupancy bars plus the surviving residue."""
    sizes = [len(s) for s in strat.strata]
    labels = [f"S{i}" for i in range(len(sizes))]
    sizes.append(len(strat.residues[-1]))
    labels.append("rest")
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(labels, sizes, color=["tab:blue"] * (len(sizes) - 1) + ["tab:orange"])
    ax.set_ylabel("vertices")
    ax.set_title(f"strata (delta={strat.delta}, ell={strat.ell})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def partition_figure(part, path: str) -> None:
    """Piece size distribution for a decomposition."""
    sizes = sorted((len(p.vertices) for p in part.pieces), reverse=True)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if sizes:
        ax.bar(range(len(sizes)), sizes)
    ax.set_xlabel("piece rank")
    ax.set_ylabel("size")
    covered = part.covered_fraction()
    ax.set_title(f"{len(sizes)} pieces, {covered:.0%} covered")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
