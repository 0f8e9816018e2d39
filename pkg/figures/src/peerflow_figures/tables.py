"""Format sweep summaries into the three sensitivity tables (quality-shape,
review-noise, and revision parameter groups)."""

from __future__ import annotations

import csv
from pathlib import Path

from .recipes import SUMMARY_COLUMNS, TABLE_GROUPS

HEADERS = ("Parameter", "Range", "Step", "Q1", "Q2", "Q3", "Q4",
           "Reviewer burden", "First-try probability")

_RANGE_COLUMNS = (("q1_min", "q1_max"), ("q2_min", "q2_max"), ("q3_min", "q3_max"),
                  ("q4_min", "q4_max"), ("burden_min", "burden_max"),
                  ("first_try_min", "first_try_max"))


class TableError(ValueError):
    pass


def _fmt(x: float, digits: int = 3) -> str:
    return f"{float(x):.{digits}g}"


def read_summary(path: Path) -> dict:
    if not path.exists():
        raise TableError(f"missing summary file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        for column in SUMMARY_COLUMNS:
            if column not in header:
                raise TableError(f"missing column {column!r} in {path}")
        rows = list(reader)
    if len(rows) != 1:
        raise TableError(f"expected one summary row in {path}, found {len(rows)}")
    return rows[0]


def _table_row(summary: dict) -> tuple:
    cells = [summary["parameter"],
             f"[{_fmt(summary['lo'])}-{_fmt(summary['hi'])}]",
             _fmt(summary["step"])]
    for lo_col, hi_col in _RANGE_COLUMNS:
        cells.append(f"[{_fmt(summary[lo_col])}-{_fmt(summary[hi_col])}]")
    return tuple(cells)


def _format_table(title: str, rows: list) -> str:
    table = [HEADERS, *rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(HEADERS))]
    lines = [title]
    for r, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


TABLE_TITLES = {
    "table1": "Table 1: sensitivity to the quality-distribution shape parameters",
    "table2": "Table 2: sensitivity to the review-noise parameters",
    "table3": "Table 3: sensitivity to the revision parameters",
}


def render_tables(summary_paths, output_dir: str | Path) -> list[Path]:
    """Group sweep summaries by parameter family and write one text table each."""
    summaries = [read_summary(Path(p)) for p in summary_paths]
    by_group: dict[str, list] = {name: [] for name in TABLE_GROUPS}
    for summary in summaries:
        parameter = summary["parameter"]
        group = next((g for g, params in TABLE_GROUPS.items() if parameter in params),
                     None)
        if group is None:
            raise TableError(f"parameter {parameter!r} belongs to no table group")
        by_group[group].append(_table_row(summary))
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for group, rows in by_group.items():
        if not rows:
            continue
        path = out / f"{group}.txt"
        path.write_text(_format_table(TABLE_TITLES[group], sorted(rows)),
                        encoding="utf-8")
        written.append(path)
    return written
