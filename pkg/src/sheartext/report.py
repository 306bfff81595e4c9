"""Figure rendering for evaluation and benchmark reports.

Figures are written next to the delimited output so a run leaves both a
machine-readable record (CSV/JSON) and something a human can glance at.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCORE_COLORS = {"recall": "#1f77b4", "precision": "#ff7f0e", "fmeasure": "#2ca02c"}


def save_eval_figure(report, path):
    """Per-frame score bars plus aggregate block rates."""
    names = [fs.frame for fs in report.frames]
    n = max(len(names), 1)
    fig, (ax_scores, ax_blocks) = plt.subplots(
        1, 2, figsize=(max(7.0, 0.6 * n + 4.0), 3.6), gridspec_kw={"width_ratios": [3, 1]}
    )

    x = np.arange(n)
    width = 0.27
    for offset, key in zip((-width, 0.0, width), SCORE_COLORS):
        values = [getattr(fs, key) for fs in report.frames] or [0.0]
        ax_scores.bar(x + offset, values, width, label=key, color=SCORE_COLORS[key])
    ax_scores.axhline(report.fmeasure, color="black", lw=0.8, ls="--",
                      label=f"micro f = {report.fmeasure:.3f}")
    ax_scores.set_xticks(x)
    ax_scores.set_xticklabels(names or ["(none)"], rotation=45, ha="right", fontsize=7)
    ax_scores.set_ylim(0, 1.05)
    ax_scores.set_ylabel("score")
    ax_scores.set_title("per-frame scores")
    ax_scores.legend(fontsize=7)

    rates = [report.blocks.dr, report.blocks.fpr, report.blocks.mdr]
    ax_blocks.bar(["DR", "FPR", "MDR"], rates, color="#888888")
    ax_blocks.set_ylim(0, 1.05)
    ax_blocks.set_title("block rates")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_bench_figure(stats, path):
    """Horizontal bars of median stage time with p10-p90 whiskers."""
    stages = list(stats)
    medians = [stats[s][1] for s in stages]
    lo = [stats[s][1] - stats[s][0] for s in stages]
    hi = [stats[s][2] - stats[s][1] for s in stages]

    fig, ax = plt.subplots(figsize=(6.5, 0.5 * len(stages) + 1.5))
    y = np.arange(len(stages))
    ax.barh(y, medians, xerr=[lo, hi], color="#4c72b0", capsize=3)
    ax.set_yticks(y)
    ax.set_yticklabels(stages)
    ax.invert_yaxis()
    ax.set_xlabel("per-frame time (ms), median with p10-p90")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
