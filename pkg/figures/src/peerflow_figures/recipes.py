"""Figure recipes: which CSV each figure id consumes and how its panels are laid out."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PanelSpec:
    key: str
    title: str
    xlabel: str
    ylabel: str
    kind: str = "line"  # line | scatter | bars | fan


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    input_csv: str
    title: str
    panels: tuple
    ncols: int = 2
    legend: bool = True


RECIPES: dict[str, FigureRecipe] = {
    "1": FigureRecipe(
        figure_id="1", input_csv="fig1.csv",
        title="Manuscript quality distribution",
        ncols=3,
        panels=(
            PanelSpec("a", "(a) probability density", "quality", "density"),
            PanelSpec("b", "(b) cumulative distribution", "quality", "probability"),
            PanelSpec("c", "(c) sampled qualities", "sample", "quality", kind="scatter"),
        ),
        legend=False,
    ),
    "3": FigureRecipe(
        figure_id="3", input_csv="fig3.csv",
        title="Average reviews per reviewer",
        panels=(
            PanelSpec("a", "(a) by submission scale (final issue)", "new manuscripts per issue",
                      "reviews per reviewer"),
            PanelSpec("b", "(b) by issue", "issue", "reviews per reviewer"),
        ),
    ),
    "4": FigureRecipe(
        figure_id="4", input_csv="fig4.csv",
        title="Submissions needed before acceptance",
        panels=(
            PanelSpec("a", "(a) journal-mediated system", "submission count", "acceptances",
                      kind="bars"),
            PanelSpec("b", "(b) platform-mediated system", "submission count", "acceptances",
                      kind="bars"),
        ),
    ),
    "5": FigureRecipe(
        figure_id="5", input_csv="fig5.csv",
        title="Quartile quality by issue (journal-mediated system)",
        panels=(
            PanelSpec("a", "(a) Q1", "issue", "mean quality"),
            PanelSpec("b", "(b) Q2", "issue", "mean quality"),
            PanelSpec("c", "(c) Q3", "issue", "mean quality"),
            PanelSpec("d", "(d) Q4", "issue", "mean quality"),
        ),
        legend=False,
    ),
    "6": FigureRecipe(
        figure_id="6", input_csv="fig6.csv",
        title="Quartile quality by issue (platform-mediated system)",
        panels=(
            PanelSpec("a", "(a) Q1", "issue", "mean quality"),
            PanelSpec("b", "(b) Q2", "issue", "mean quality"),
            PanelSpec("c", "(c) Q3", "issue", "mean quality"),
            PanelSpec("d", "(d) Q4", "issue", "mean quality"),
        ),
        legend=False,
    ),
    "7": FigureRecipe(
        figure_id="7", input_csv="fig7.csv",
        title="Journal quality evolution (simplified submission rule)",
        ncols=1,
        panels=(PanelSpec("a", "", "issue", "journal quality", kind="fan"),),
        legend=False,
    ),
    "8": FigureRecipe(
        figure_id="8", input_csv="fig8.csv",
        title="Journal quality evolution at smaller submission scales",
        panels=(
            PanelSpec("a", "(a) two-thirds scale", "issue", "journal quality", kind="fan"),
            PanelSpec("b", "(b) larger scale", "issue", "journal quality", kind="fan"),
        ),
        legend=False,
    ),
}

FIGURE_COLUMNS = ("figure", "panel", "series", "x", "y")

#: Which sensitivity-table file a swept parameter belongs to, mirroring the
#: quality / review-noise / revision parameter groups.
TABLE_GROUPS = {
    "table1": ("a", "b", "c"),
    "table2": ("beta", "gamma"),
    "table3": ("mu", "alpha", "sigma"),
}

SUMMARY_COLUMNS = ("parameter", "lo", "hi", "step", "runs_per_point", "grid_points",
                   "q1_min", "q1_max", "q2_min", "q2_max", "q3_min", "q3_max",
                   "q4_min", "q4_max", "burden_min", "burden_max",
                   "first_try_min", "first_try_max")
