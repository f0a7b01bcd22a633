"""Render report curves to PNG files.

Figures are a presentation convenience layered on the plot-data CSVs; the
simulation module itself only emits data.  Uses the Agg backend so rendering
works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_curve", "render_report_figures"]


def render_curve(curve: Mapping, path: str | Path, title: str | None = None) -> Path:
    path = Path(path)
    xs = [p[0] for p in curve["points"]]
    ys = [p[1] for p in curve["points"]]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if curve.get("kind") == "scatter":
        ax.scatter(xs, ys, s=12, alpha=0.7)
    else:
        ax.plot(xs, ys, marker="o", markersize=3)
        if len(xs) > 1 and max(xs) / max(min(x for x in xs if x > 0), 1e-12) > 50:
            ax.set_xscale("log")
    ax.set_xlabel(curve["x_label"])
    ax.set_ylabel(curve["y_label"])
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_report_figures(report, outdir: str | Path, stem: str | None = None) -> list[Path]:
    """One PNG per curve of an experiment report."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = stem or report.experiment
    written = []
    for name, curve in report.curves.items():
        written.append(render_curve(curve, outdir / f"{stem}_{name}.png", title=name.replace("_", " ")))
    return written
