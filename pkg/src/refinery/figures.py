"""Matplotlib rendering for the figure tables the CLI emits."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_curves(path, x_label, y_label, curves, title=None):
    """Plot named (x, y) curves on shared axes and save to path."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for name, xs, ys in curves:
        ax.plot(xs, ys, label=name, linewidth=1.4)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_refinement_terms(path, blocks):
    """Grid of (weight, score, product) panels, one row per model block.

    ``blocks`` is a list of (label, xs, weight, score, product) tuples.
    """
    n = len(blocks)
    fig, axes = plt.subplots(n, 3, figsize=(10.5, 2.8 * n), squeeze=False)
    column_titles = ("P(x)", "J(eta(x))", "P(x) J(eta(x))")
    for row, (label, xs, weight, score, product) in enumerate(blocks):
        for col, ys in enumerate((weight, score, product)):
            ax = axes[row][col]
            ax.plot(xs, ys, linewidth=1.2)
            ax.grid(True, alpha=0.3)
            if row == 0:
                ax.set_title(column_titles[col], fontsize=10)
            if col == 0:
                ax.set_ylabel(label, fontsize=9)
            if row == n - 1:
                ax.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
