"""Figure rendering for bound curves (written to files, never shown)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_AXIS_LABELS = {
    "loss": "loss",
    "noise": "noise",
    "phase": "loss",
    "two_parameter": "swept parameter",
}


def render_curve(
    rows: Sequence[tuple[float, float, float]],
    path: str,
    target: str,
    sweep: str,
    subtitle: str = "",
) -> str:
    """Plot log10 RLD and SLD bounds versus the sweep parameter and save."""
    xs = [r[0] for r in rows]
    rld = [r[1] for r in rows]
    sld = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(xs, rld, marker="o", markersize=3, label="log10 RLD bound")
    ax.plot(xs, sld, marker="s", markersize=3, label="log10 SLD bound")
    ax.set_xlabel(sweep)
    ax.set_ylabel("log10 of error lower bound")
    title = f"{target} estimation"
    if subtitle:
        title += f" ({subtitle})"
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    # fixed metadata keeps PNG output byte-identical across runs
    fig.savefig(path, dpi=150, metadata={"Software": "qfisher"})
    plt.close(fig)
    return path
