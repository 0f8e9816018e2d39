import csv
import json
from pathlib import Path

import pytest

from peerflow.cli import main

TINY = """
n_new_per_issue = 120
n_journals = 10
n_reviewers = 40
capacity_per_journal = 9
n_issues = 3
seed = 7
"""


@pytest.fixture
def tiny_config_file(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY, encoding="utf-8")
    return path


def _read_csv(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _run(tmp_path, tiny_config_file, out="run", extra=()):
    outdir = tmp_path / out
    code = main(["run", "--config", str(tiny_config_file), "--out", str(outdir), *extra])
    return code, outdir


class TestRun:
    def test_happy_path_writes_four_files(self, tmp_path, tiny_config_file):
        code, outdir = _run(tmp_path, tiny_config_file)
        assert code == 0
        for name in ("issue_metrics.csv", "ledgers.csv", "journals.csv", "manifest.json"):
            assert (outdir / name).exists()
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert manifest["config"]["n_new_per_issue"] == 120
        assert len(manifest["outputs"]) == 3

    def test_manifest_digests_match_files(self, tmp_path, tiny_config_file):
        from peerflow.outputs import sha256_of
        code, outdir = _run(tmp_path, tiny_config_file)
        manifest = json.loads((outdir / "manifest.json").read_text())
        for entry in manifest["outputs"]:
            assert sha256_of(outdir / entry["name"]) == entry["sha256"]

    def test_same_seed_means_byte_identical_csvs(self, tmp_path, tiny_config_file):
        _, a = _run(tmp_path, tiny_config_file, out="a")
        _, b = _run(tmp_path, tiny_config_file, out="b")
        for name in ("issue_metrics.csv", "ledgers.csv", "journals.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_flag_overrides_compose_with_file(self, tmp_path, tiny_config_file):
        code, outdir = _run(tmp_path, tiny_config_file, extra=("--system", "regular",
                                                               "--issues", "2", "--seed", "9"))
        assert code == 0
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert manifest["system"] == "regular"
        assert manifest["config"]["n_issues"] == 2
        assert manifest["seed"] == 9
        assert len(_read_csv(outdir / "ledgers.csv")) == 2

    def test_invalid_config_exits_nonzero_with_violations(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text(TINY + "capacity_per_journal = 50\n")
        code = main(["run", "--config", str(bad), "--out", str(tmp_path / "x")])
        assert code != 0
        assert "total capacity" in capsys.readouterr().err

    def test_unwritable_output_directory(self, tmp_path, tiny_config_file, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        code = main(["run", "--config", str(tiny_config_file),
                     "--out", str(blocker / "sub")])
        assert code != 0

    def test_metrics_recompute_from_persisted_ledgers(self, tmp_path, tiny_config_file):
        # metrics CSV values must be pure functions of the ledger CSV contents
        _, outdir = _run(tmp_path, tiny_config_file)
        metrics = _read_csv(outdir / "issue_metrics.csv")
        ledgers = _read_csv(outdir / "ledgers.csv")
        for m, l in zip(metrics, ledgers):
            assert float(m["mean_reviews_per_reviewer"]) == pytest.approx(
                int(l["reviews_performed"]) / 40)
            assert int(m["backlog_size"]) == int(l["rejections_carried"])


class TestSweep:
    def test_writes_sweep_files(self, tmp_path, tiny_config_file):
        outdir = tmp_path / "sweep"
        code = main(["sweep", "--config", str(tiny_config_file), "--out", str(outdir),
                     "--param", "beta", "--lo", "0.05", "--hi", "0.15", "--step", "0.05",
                     "--runs", "1"])
        assert code == 0
        rows = _read_csv(outdir / "sweep.csv")
        assert len(rows) == 3
        assert [float(r["value"]) for r in rows] == pytest.approx([0.05, 0.10, 0.15])
        summary = _read_csv(outdir / "table_summary.csv")
        assert len(summary) == 1
        assert float(summary[0]["first_try_min"]) <= float(summary[0]["first_try_max"])

    def test_sweep_determinism(self, tmp_path, tiny_config_file):
        args = ["sweep", "--config", str(tiny_config_file), "--param", "gamma",
                "--lo", "0.3", "--hi", "0.4", "--step", "0.05", "--runs", "1"]
        code_a = main(args + ["--out", str(tmp_path / "sa")])
        code_b = main(args + ["--out", str(tmp_path / "sb")])
        assert code_a == code_b == 0
        assert ((tmp_path / "sa" / "sweep.csv").read_bytes()
                == (tmp_path / "sb" / "sweep.csv").read_bytes())

    def test_bad_spec_fails(self, tmp_path, tiny_config_file, capsys):
        code = main(["sweep", "--config", str(tiny_config_file),
                     "--out", str(tmp_path / "s"), "--param", "zeta",
                     "--lo", "0", "--hi", "1", "--step", "0.5"])
        assert code != 0
        assert "zeta" in capsys.readouterr().err


class TestFigdata:
    def test_unknown_figure_id_lists_valid_ones(self, tmp_path, tiny_config_file, capsys):
        _, rundir = _run(tmp_path, tiny_config_file)
        code = main(["figdata", str(rundir), "2"])
        assert code != 0
        assert "valid ids" in capsys.readouterr().err

    def test_missing_run_directory_names_the_file(self, tmp_path, capsys):
        code = main(["figdata", str(tmp_path / "nowhere"), "1"])
        assert code != 0
        assert "manifest.json" in capsys.readouterr().err

    def test_fig1_distribution_series(self, tmp_path, tiny_config_file):
        _, rundir = _run(tmp_path, tiny_config_file)
        assert main(["figdata", str(rundir), "1"]) == 0
        rows = _read_csv(rundir / "fig1.csv")
        panels = {r["panel"] for r in rows}
        assert panels == {"a", "b", "c"}
        samples = [r for r in rows if r["series"] == "samples"]
        assert len(samples) == 4000
        assert all(0 <= float(r["y"]) <= 10 for r in samples)

    def test_fig3_burden_ladder(self, tmp_path, tiny_config_file):
        _, rundir = _run(tmp_path, tiny_config_file)
        assert main(["figdata", str(rundir), "3", "--out", str(tmp_path / "figs")]) == 0
        rows = _read_csv(tmp_path / "figs" / "fig3.csv")
        a = [r for r in rows if r["panel"] == "a"]
        assert {r["series"] for r in a} == {"novel", "regular"}
        assert len({r["x"] for r in a}) == 3  # three n values
        b = [r for r in rows if r["panel"] == "b"]
        assert len(b) == 2 * 3  # both systems, three issues

    def test_fig6_quartile_panels(self, tmp_path, tiny_config_file):
        _, rundir = _run(tmp_path, tiny_config_file)
        assert main(["figdata", str(rundir), "6"]) == 0
        rows = _read_csv(rundir / "fig6.csv")
        assert {r["panel"] for r in rows} == {"a", "b", "c", "d"}

    def test_fig7_journal_series(self, tmp_path, tiny_config_file):
        _, rundir = _run(tmp_path, tiny_config_file)
        assert main(["figdata", str(rundir), "7"]) == 0
        rows = _read_csv(rundir / "fig7.csv")
        assert len({r["series"] for r in rows}) == 10  # one series per journal
        assert max(int(r["x"]) for r in rows) == 6  # doubled issue count
