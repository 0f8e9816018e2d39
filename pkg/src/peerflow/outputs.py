"""CSV and manifest writers for runs, sweeps, and per-figure data files.

Column orders here are the documented interface consumed by the figures
package; see README for the schemas. All files are written with plain '\\n'
line endings and shortest-roundtrip float formatting so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .config import config_to_dict
from .metrics import IssueMetrics
from .sweep import OUTPUT_NAMES, SweepResult
from .systems import IssueLedger, SimResult

ISSUE_METRICS_CSV = "issue_metrics.csv"
LEDGERS_CSV = "ledgers.csv"
JOURNALS_CSV = "journals.csv"
MANIFEST_JSON = "manifest.json"
SWEEP_CSV = "sweep.csv"
TABLE_SUMMARY_CSV = "table_summary.csv"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def write_issue_metrics_csv(path: Path, metrics: Sequence[IssueMetrics]) -> Path:
    max_tries = max((max(m.acceptances_by_submission_count, default=0) for m in metrics),
                    default=0)
    header = ["issue", "mean_reviews_per_reviewer",
              "q1_mean_quality", "q2_mean_quality", "q3_mean_quality", "q4_mean_quality",
              "first_try_acceptance_fraction", "backlog_size", "acceptances"]
    header += [f"tries_{t}" for t in range(1, max_tries + 1)]
    rows = []
    for m in metrics:
        hist = m.acceptances_by_submission_count
        row = [m.issue, m.mean_reviews_per_reviewer, *m.quartile_mean_quality,
               m.first_try_acceptance_fraction, m.backlog_size, sum(hist.values())]
        row += [hist.get(t, 0) for t in range(1, max_tries + 1)]
        rows.append(row)
    return write_csv(path, header, rows)


def write_ledgers_csv(path: Path, ledgers: Sequence[IssueLedger]) -> Path:
    header = ["issue", "carried_in", "created", "reviews_performed",
              "applications_filed", "acceptances", "rejections_carried", "retirements"]
    rows = [[l.issue, l.carried_in, l.created, l.reviews_performed,
             l.applications_filed, len(l.acceptances), l.rejections_carried,
             l.retirements] for l in ledgers]
    return write_csv(path, header, rows)


def write_journals_csv(path: Path, result: SimResult) -> Path:
    header = ["issue", "journal_id", "quartile", "published_count",
              "issue_mean_quality", "running_quality"]
    rows = []
    n_issues = len(result.ledgers)
    for j in result.journals:
        per_issue = {issue: (mean, count) for issue, mean, count in j.quality_per_issue}
        for issue in range(1, n_issues + 1):
            mean, count = per_issue.get(issue, (math.nan, 0))
            series = j.running_quality_series
            running = series[issue - 1] if issue - 1 < len(series) else math.nan
            rows.append([issue, j.id, j.quartile, count, mean, running])
    rows.sort(key=lambda r: (r[0], r[1]))
    return write_csv(path, header, rows)


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path: Path, result: SimResult, files: Sequence[Path],
                   started: str, finished: str) -> Path:
    manifest = {
        "config": config_to_dict(result.cfg),
        "system": result.cfg.system,
        "seed": result.cfg.seed,
        "started_utc": started,
        "finished_utc": finished,
        "outputs": [{"name": f.name, "sha256": sha256_of(f), "bytes": f.stat().st_size}
                    for f in files],
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def write_sweep_csv(path: Path, result: SweepResult) -> Path:
    header = ["parameter", "value", "runs_per_point", *OUTPUT_NAMES]
    rows = [[result.spec.parameter, p.value, result.spec.runs_per_point,
             *[p.outputs[name] for name in OUTPUT_NAMES]] for p in result.points]
    return write_csv(path, header, rows)


def write_table_summary_csv(path: Path, result: SweepResult) -> Path:
    header = ["parameter", "lo", "hi", "step", "runs_per_point", "grid_points"]
    row = [result.spec.parameter, result.spec.lo, result.spec.hi, result.spec.step,
           result.spec.runs_per_point, len(result.points)]
    for name in OUTPUT_NAMES:
        header += [f"{name}_min", f"{name}_max"]
        row += list(result.ranges[name])
    return write_csv(path, header, [row])


def write_figure_csv(path: Path, rows: Sequence[tuple]) -> Path:
    """Long-format figure data: one (figure, panel, series, x, y) row per point."""
    return write_csv(path, ["figure", "panel", "series", "x", "y"], rows)
