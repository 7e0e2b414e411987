"""PNG figures for reports (matplotlib, Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_META = {"Software": None}


def _save(fig, path):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return path


def rank_heatmap(matrix, labels, title, path, col_labels=None):
    """Annotated heatmap of an integer matrix (rows = sources, columns = targets)."""
    n, m = len(matrix), len(matrix[0]) if matrix else 0
    fig, ax = plt.subplots(figsize=(1.2 + 0.55 * max(m, 2), 1.0 + 0.5 * max(n, 2)))
    ax.imshow(matrix if n and m else [[0]], cmap="Blues", vmin=0)
    ax.set_xticks(range(m))
    ax.set_yticks(range(n))
    ax.set_xticklabels(col_labels or labels, rotation=45, ha="right")
    ax.set_yticklabels(labels)
    for i in range(n):
        for j in range(m):
            ax.text(j, i, str(matrix[i][j]), ha="center", va="center", fontsize=8)
    ax.set_xlabel("target")
    ax.set_ylabel("source")
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    return _save(fig, path)


def rank_growth(ranks, title, path, expected=None):
    """Ranks along a wrapping sequence, optionally against the expected values."""
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    xs = list(range(len(ranks)))
    ax.plot(xs, ranks, marker="o", label="computed")
    if expected is not None:
        ax.plot(xs, expected, linestyle="--", color="grey", label="expected")
        ax.legend(frameon=False)
    ax.set_xlabel("i")
    ax.set_ylabel("rank")
    ax.set_title(title, fontsize=10)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)
