"""Matplotlib renderings for the regression report path.

Two diagram types: a per-alternative snapshot of votes, phantom positions
and medians (the state of a moving-phantom mechanism at its normalization
time), and an arc diagram of a linked allocation ordering.  Rendering is
presentation only; values are converted to floats at the boundary.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def phantom_snapshot(votes_by_alt, phantoms_by_alt, medians, budget,
                     title: str, path: str) -> None:
    """Draw one column per alternative with vote marks (solid), phantom
    marks (dashed) and a box on the median."""
    m = len(votes_by_alt)
    fig, ax = plt.subplots(figsize=(1.6 * m + 1.5, 4.0))
    half = 0.32
    for j in range(m):
        x = j + 1
        ax.axvspan(x - half, x + half, color="0.92", zorder=0)
        for v in votes_by_alt[j]:
            ax.hlines(float(v), x - half, x + half, color="black", lw=2.2, zorder=3)
        for ph in phantoms_by_alt[j]:
            ax.hlines(float(ph), x - half - 0.06, x + half + 0.06,
                      color="tab:orange", lw=2.0, ls=(0, (2, 2)), zorder=2)
        med = float(medians[j])
        ax.add_patch(plt.Rectangle((x - half, med - 0.09), 2 * half, 0.18,
                                   fill=False, ec="tab:blue", lw=1.8, zorder=4))
    ax.set_xlim(0.4, m + 0.6)
    ax.set_ylim(-0.3, budget + 0.3)
    ax.set_xticks(range(1, m + 1))
    ax.set_xlabel("alternative")
    ax.set_ylabel("budget units")
    ax.set_yticks(range(0, budget + 1))
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def adjacency_arcs(labels, witnesses, title: str, path: str) -> None:
    """Arc diagram of an ordering: each element connects back to the earlier
    elements named by its witness list."""
    k = len(labels)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * k), 3.4))
    for i, mates in enumerate(witnesses):
        for w in mates:
            span = i - w
            theta = [t / 40 for t in range(41)]
            xs = [w + span * t for t in theta]
            ys = [0.9 * (span / k) * 4 * t * (1 - t) for t in theta]
            ax.plot(xs, ys, color="tab:blue", lw=0.9, alpha=0.7)
    ax.plot(range(k), [0] * k, "o", color="black", ms=3.5)
    for i, lab in enumerate(labels):
        ax.text(i, -0.05, lab, rotation=90, ha="center", va="top", fontsize=7)
    ax.set_ylim(-0.45, 1.0)
    ax.set_xlim(-1, k)
    ax.axis("off")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
