"""Command-line driver: run single simulations, sensitivity sweeps, and emit
per-figure data files.

    peerflow run    [--config FILE] [--system S] [--n N] [--issues K]
                    [--seed U] [--out DIR]
    peerflow sweep  --param NAME --lo F --hi F --step F [--runs R] ...
    peerflow figdata RUNDIR FIGURE [--out DIR]

The environment variable PEERFLOW_THREADS caps sweep and figure-data
parallelism (default: machine parallelism).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import outputs
from .config import config_from_dict, load_config
from .metrics import run_issue_metrics, run_submission_histogram
from .model import SimConfig, validate_config
from .stochastic import RngStream, build_cdf, quantile
from .sweep import SweepSpec, run_sweep
from .systems import SimResult, run_simulation

FIGURE_IDS = ("1", "3", "4", "5", "6", "7", "8")

#: Samples drawn for the distribution figure's scatter panel.
FIG1_SAMPLES = 4000
FIG1_GRID = 512


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _load_effective_config(args) -> SimConfig:
    cfg = load_config(args.config) if args.config else SimConfig()
    over = {}
    if getattr(args, "system", None):
        over["system"] = args.system
    if getattr(args, "n", None) is not None:
        over["n_new_per_issue"] = args.n
    if getattr(args, "issues", None) is not None:
        over["n_issues"] = args.issues
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    return replace(cfg, **over) if over else cfg


def cmd_run(args) -> int:
    cfg = _load_effective_config(args)
    violations = validate_config(cfg)
    if violations:
        for v in violations:
            print(f"config error: {v}", file=sys.stderr)
        return 1
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory {out}: {exc}", file=sys.stderr)
        return 1
    started = _utcnow()
    result = run_simulation(cfg)
    metrics = run_issue_metrics(result)
    files = [
        outputs.write_issue_metrics_csv(out / outputs.ISSUE_METRICS_CSV, metrics),
        outputs.write_ledgers_csv(out / outputs.LEDGERS_CSV, result.ledgers),
        outputs.write_journals_csv(out / outputs.JOURNALS_CSV, result),
    ]
    outputs.write_manifest(out / outputs.MANIFEST_JSON, result, files,
                           started, _utcnow())
    print(f"wrote {len(files) + 1} files to {out}")
    return 0


def cmd_sweep(args) -> int:
    base = _load_effective_config(args)
    spec = SweepSpec(parameter=args.param, lo=args.lo, hi=args.hi, step=args.step,
                     runs_per_point=args.runs, base=base)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory {out}: {exc}", file=sys.stderr)
        return 1
    try:
        result = run_sweep(spec)
    except ValueError as exc:
        print(f"sweep error: {exc}", file=sys.stderr)
        return 1
    outputs.write_sweep_csv(out / outputs.SWEEP_CSV, result)
    outputs.write_table_summary_csv(out / outputs.TABLE_SUMMARY_CSV, result)
    print(f"wrote sweep files to {out}")
    return 0


# ---------------------------------------------------------------------------
# figure data extraction
# ---------------------------------------------------------------------------

def _scaled_capacity(cfg: SimConfig, n: int) -> int:
    """Per-journal capacity rescaled with n so total capacity stays below n."""
    cap = max(1, int(cfg.capacity_per_journal * n / cfg.n_new_per_issue))
    if cap * cfg.n_journals >= n:
        cap = max(1, (n - 1) // cfg.n_journals)
    return cap


def _sub_config(cfg: SimConfig, system: str, n: int, issues: int,
                scale_reviewers: bool = False) -> SimConfig:
    """Derive a sub-run config at a different scale n.

    Capacity always rescales with n (total capacity must stay below n).
    Reviewer count rescales only for the journal-evolution experiments, which
    compare quality formation across n and need a comparable review-noise
    regime; the burden experiments keep the reviewer pool fixed because load
    growth with n is exactly what they measure.
    """
    kw = {}
    if scale_reviewers:
        kw["n_reviewers"] = max(1, round(cfg.n_reviewers * n / cfg.n_new_per_issue))
    return replace(cfg, system=system, n_new_per_issue=n, n_issues=issues,
                   capacity_per_journal=_scaled_capacity(cfg, n), **kw)


class _RunCache:
    def __init__(self):
        self._cache: dict = {}

    def get(self, cfg: SimConfig) -> SimResult:
        if cfg not in self._cache:
            self._cache[cfg] = run_simulation(cfg)
        return self._cache[cfg]


def _fig1_rows(cfg: SimConfig):
    table = build_cdf(cfg.dist, grid_points=4096)
    idx = np.linspace(0, table.grid.size - 1, FIG1_GRID).astype(int)
    rows = [("1", "a", "pdf", float(table.grid[i]), float(table.pdf_values[i]))
            for i in idx]
    rows += [("1", "b", "cdf", float(table.grid[i]), float(table.cdf_values[i]))
             for i in idx]
    samples = quantile(table, RngStream(cfg.seed, "figure-samples").uniform(FIG1_SAMPLES))
    rows += [("1", "c", "samples", i + 1, float(s)) for i, s in enumerate(samples)]
    return rows


def _n_ladder(cfg: SimConfig) -> list[int]:
    n = cfg.n_new_per_issue
    ladder = sorted({max(cfg.n_journals + 1, round(n * f / 3)) for f in (1, 2, 3)})
    return ladder


def _fig3_rows(cfg: SimConfig, cache: _RunCache):
    rows = []
    for system in ("novel", "regular"):
        for n in _n_ladder(cfg):
            result = cache.get(_sub_config(cfg, system, n, cfg.n_issues))
            metrics = run_issue_metrics(result)
            rows.append(("3", "a", system, n, metrics[-1].mean_reviews_per_reviewer))
    for system in ("novel", "regular"):
        result = cache.get(_sub_config(cfg, system, cfg.n_new_per_issue, cfg.n_issues))
        for m in run_issue_metrics(result):
            rows.append(("3", "b", system, m.issue, m.mean_reviews_per_reviewer))
    return rows


def _fig4_rows(cfg: SimConfig, cache: _RunCache):
    rows = []
    for panel, system in (("a", "regular"), ("b", "novel")):
        for n in _n_ladder(cfg):
            result = cache.get(_sub_config(cfg, system, n, cfg.n_issues))
            hist = run_submission_histogram(result.ledgers)
            for tries in range(1, max(hist, default=0) + 1):
                rows.append(("4", panel, f"n={n}", tries, hist.get(tries, 0)))
    return rows


def _quartile_series_rows(figure: str, cfg: SimConfig, system: str, cache: _RunCache):
    result = cache.get(_sub_config(cfg, system, cfg.n_new_per_issue, cfg.n_issues))
    rows = []
    panels = dict(zip((1, 2, 3, 4), ("a", "b", "c", "d")))
    for m in run_issue_metrics(result):
        for q in (1, 2, 3, 4):
            rows.append((figure, panels[q], f"Q{q}", m.issue,
                         m.quartile_mean_quality[q - 1]))
    return rows


def _journal_series_rows(figure: str, panel: str, cfg: SimConfig, n: int,
                         issues: int, cache: _RunCache):
    result = cache.get(_sub_config(cfg, "simplified", n, issues, scale_reviewers=True))
    rows = []
    for j in result.journals:
        for issue, quality in enumerate(j.running_quality_series, start=1):
            rows.append((figure, panel, f"journal_{j.id}", issue, quality))
    return rows


def _figure_rows(figure: str, cfg: SimConfig, cache: _RunCache):
    n, issues = cfg.n_new_per_issue, cfg.n_issues
    if figure == "1":
        return _fig1_rows(cfg)
    if figure == "3":
        return _fig3_rows(cfg, cache)
    if figure == "4":
        return _fig4_rows(cfg, cache)
    if figure == "5":
        return _quartile_series_rows("5", cfg, "regular", cache)
    if figure == "6":
        return _quartile_series_rows("6", cfg, "novel", cache)
    if figure == "7":
        return _journal_series_rows("7", "a", cfg, round(10 * n / 3), 2 * issues, cache)
    if figure == "8":
        rows = _journal_series_rows("8", "a", cfg, round(5 * n / 3), 2 * issues, cache)
        rows += _journal_series_rows("8", "b", cfg, round(7 * n / 3), 2 * issues, cache)
        return rows
    raise ValueError(f"unknown figure id {figure!r}; valid ids: {', '.join(FIGURE_IDS)}")


def cmd_figdata(args) -> int:
    rundir = Path(args.rundir)
    manifest_path = rundir / outputs.MANIFEST_JSON
    if not manifest_path.exists():
        print(f"missing input: {manifest_path}", file=sys.stderr)
        return 1
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    cfg = config_from_dict(manifest["config"])
    if args.figure not in FIGURE_IDS:
        print(f"unknown figure id {args.figure!r}; valid ids: {', '.join(FIGURE_IDS)}",
              file=sys.stderr)
        return 1
    out = Path(args.out) if args.out else rundir
    out.mkdir(parents=True, exist_ok=True)
    rows = _figure_rows(args.figure, cfg, _RunCache())
    path = outputs.write_figure_csv(out / f"fig{args.figure}.csv", rows)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="peerflow", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--system", choices=("novel", "regular", "simplified"))
        p.add_argument("--n", type=int, help="new manuscripts per issue")
        p.add_argument("--issues", type=int, help="number of issues to simulate")
        p.add_argument("--seed", type=int, help="64-bit unsigned seed")
        p.add_argument("--out", default="peerflow_out", help="output directory")

    run_p = sub.add_parser("run", help="run one simulation and write CSV outputs")
    common(run_p)
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="one-at-a-time parameter sweep")
    common(sweep_p)
    sweep_p.add_argument("--param", required=True)
    sweep_p.add_argument("--lo", type=float, required=True)
    sweep_p.add_argument("--hi", type=float, required=True)
    sweep_p.add_argument("--step", type=float, required=True)
    sweep_p.add_argument("--runs", type=int, default=10)
    sweep_p.set_defaults(func=cmd_sweep)

    fig_p = sub.add_parser("figdata", help="extract the data series behind a figure")
    fig_p.add_argument("rundir", help="directory of a completed `peerflow run`")
    fig_p.add_argument("figure", help=f"figure id, one of {', '.join(FIGURE_IDS)}")
    fig_p.add_argument("--out", help="output directory (default: the run directory)")
    fig_p.set_defaults(func=cmd_figdata)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
