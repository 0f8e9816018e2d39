"""Render figure CSVs into publication-style PNG images.

Rendering is read-only over its inputs and byte-stable: identical CSVs yield
identical image bytes (the matplotlib software tag, the only embedded
non-content metadata, is suppressed).
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .recipes import FIGURE_COLUMNS, RECIPES, FigureRecipe, PanelSpec  # noqa: E402

DPI = 150


class RenderError(ValueError):
    pass


def read_figure_rows(path: Path) -> dict:
    """Parse a long-format figure CSV into panel -> series -> [(x, y)]."""
    if not path.exists():
        raise RenderError(f"missing input: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        for column in FIGURE_COLUMNS:
            if column not in header:
                raise RenderError(f"missing column {column!r} in {path}")
        panels: dict = defaultdict(lambda: defaultdict(list))
        for row in reader:
            panels[row["panel"]][row["series"]].append(
                (float(row["x"]), float(row["y"]) if row["y"] else math.nan))
    if not panels:
        raise RenderError(f"no data rows in {path}")
    return panels


def _draw_panel(ax, spec: PanelSpec, series: dict, legend: bool) -> None:
    names = sorted(series)
    if spec.kind == "scatter":
        for name in names:
            xs, ys = zip(*series[name])
            ax.scatter(xs, ys, s=2, alpha=0.4, linewidths=0)
    elif spec.kind == "bars":
        width = 0.8 / max(len(names), 1)
        for i, name in enumerate(names):
            xs, ys = zip(*sorted(series[name]))
            offset = (i - (len(names) - 1) / 2) * width
            ax.bar([x + offset for x in xs], ys, width=width, label=name)
    elif spec.kind == "fan":
        for name in names:
            xs, ys = zip(*sorted(series[name]))
            ax.plot(xs, ys, linewidth=0.7, alpha=0.5)
    else:
        for name in names:
            xs, ys = zip(*sorted(series[name]))
            ax.plot(xs, ys, marker="o", markersize=3, label=name)
    ax.set_title(spec.title, fontsize=9)
    ax.set_xlabel(spec.xlabel, fontsize=8)
    ax.set_ylabel(spec.ylabel, fontsize=8)
    ax.tick_params(labelsize=7)
    if legend and spec.kind in ("line", "bars"):
        ax.legend(fontsize=7)


def render(figure_id: str, input_dir: str | Path, output_dir: str | Path) -> Path:
    """Render one figure id from `input_dir` CSVs; returns the image path."""
    if figure_id not in RECIPES:
        raise RenderError(f"unknown figure id {figure_id!r}; "
                          f"valid ids: {', '.join(sorted(RECIPES))}")
    recipe: FigureRecipe = RECIPES[figure_id]
    panels = read_figure_rows(Path(input_dir) / recipe.input_csv)

    ncols = min(recipe.ncols, len(recipe.panels))
    nrows = math.ceil(len(recipe.panels) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows),
                             squeeze=False)
    try:
        for i, spec in enumerate(recipe.panels):
            ax = axes[i // ncols][i % ncols]
            series = panels.get(spec.key, {})
            if not series:
                raise RenderError(
                    f"no rows for panel {spec.key!r} of figure {figure_id} "
                    f"in {recipe.input_csv}")
            _draw_panel(ax, spec, series, recipe.legend)
        for i in range(len(recipe.panels), nrows * ncols):
            axes[i // ncols][i % ncols].set_axis_off()
        fig.suptitle(recipe.title, fontsize=11)
        fig.tight_layout(rect=(0, 0, 1, 0.95))
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"fig{figure_id}.png"
        fig.savefig(path, dpi=DPI, metadata={"Software": None})
    finally:
        plt.close(fig)
    return path
