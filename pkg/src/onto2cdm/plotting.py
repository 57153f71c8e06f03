"""Figures for evaluation reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

METRICS = ("recall", "precision", "intervention")
COLORS = ("#1b9e77", "#d95f02", "#7570b3")


def plot_report(report, path, title=None):
    """Grouped bars of recall, precision and intervention per category.

    The last group is the pooled (micro) total. The figure format follows
    the file suffix of ``path``.
    """
    labels = list(report.categories) + ["total"]
    scores = list(report.categories.values()) + [report.total]
    x = np.arange(len(labels))
    width = 0.26

    fig, ax = plt.subplots(figsize=(7.5, 4.0))
    for i, (metric, color) in enumerate(zip(METRICS, COLORS)):
        values = [getattr(s, metric) for s in scores]
        bars = ax.bar(x + (i - 1) * width, values, width, label=metric, color=color)
        ax.bar_label(bars, fmt="%.2f", fontsize=7, padding=1)
    ax.set_xticks(x, labels)
    top = max([1.0] + [s.intervention for s in scores])
    ax.set_ylim(0, top * 1.12)
    ax.set_ylabel("score")
    ax.axhline(1.0, color="0.6", linewidth=0.6, linestyle=":")
    ax.legend(frameon=False, ncol=3, loc="upper center", bbox_to_anchor=(0.5, 1.13))
    if title:
        ax.set_title(title, pad=24)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
