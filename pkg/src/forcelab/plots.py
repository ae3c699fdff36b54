"""Figure rendering for report verbs that have something worth drawing.

Everything goes through the Agg backend and straight to files; figures are a
convenience sidecar, the canonical JSON reports stay the primary output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_level_figure(levels: dict[int, int], path: str) -> str:
    """Bar chart of the scattering hierarchy: class size per level."""
    height = max(levels.values()) + 1 if levels else 0
    sizes = [sum(1 for v in levels.values() if v == lvl) for lvl in range(height)]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(range(height), sizes, color="#4878a8")
    ax.set_xlabel("level")
    ax.set_ylabel("points")
    ax.set_title("scattering levels")
    ax.set_xticks(range(height))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_suite_figure(criteria: list, path: str) -> str:
    """Horizontal pass/fail strip for the acceptance battery."""
    names = [c.name for c in criteria]
    values = [1 if c.passed else 0 for c in criteria]
    colors = ["#3c8a50" if v else "#b03a3a" for v in values]
    fig, ax = plt.subplots(figsize=(6, 0.5 + 0.4 * len(names)))
    ax.barh(range(len(names)), [1] * len(names), color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names)
    ax.set_xticks([])
    ax.invert_yaxis()
    for i, c in enumerate(criteria):
        ax.text(0.5, i, "pass" if c.passed else "fail", va="center", ha="center", color="white")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def figure_path(plot_dir: str, name: str) -> str:
    os.makedirs(plot_dir, exist_ok=True)
    return os.path.join(plot_dir, name)
