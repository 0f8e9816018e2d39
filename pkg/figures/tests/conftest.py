"""Build real peerflow artifacts once per session through the primary CLI; the
figures package is exercised only against those documented outputs."""

import pytest

from peerflow.cli import main as peerflow_main

TINY = """
n_new_per_issue = 120
n_journals = 10
n_reviewers = 40
capacity_per_journal = 9
n_issues = 3
seed = 7
"""

SWEEPS = {
    "b": ("0.25", "0.35", "0.05"),      # quality-shape group
    "beta": ("0.05", "0.15", "0.05"),   # review-noise group
    "mu": ("0.4", "0.6", "0.1"),        # revision group
}


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("peerflow_artifacts")
    cfg = root / "tiny.cfg"
    cfg.write_text(TINY, encoding="utf-8")
    rundir = root / "run"
    assert peerflow_main(["run", "--config", str(cfg), "--out", str(rundir)]) == 0
    for figure_id in ("1", "3", "4", "5", "6", "7", "8"):
        assert peerflow_main(["figdata", str(rundir), figure_id]) == 0
    summaries = []
    for param, (lo, hi, step) in SWEEPS.items():
        out = root / f"sweep_{param}"
        assert peerflow_main(["sweep", "--config", str(cfg), "--out", str(out),
                              "--param", param, "--lo", lo, "--hi", hi,
                              "--step", step, "--runs", "1"]) == 0
        summaries.append(out / "table_summary.csv")
    return {"root": root, "rundir": rundir, "summaries": summaries}
