import math

import numpy as np
import pytest

from peerflow import (compute_issue_metrics, matthew_correlation,
                      max_rejections_before_acceptance, run_first_try_fraction,
                      run_simulation)
from peerflow.metrics import journal_quality_series, run_issue_metrics, run_outputs
from peerflow.model import Journal, Reviewer
from peerflow.systems import IssueLedger

from conftest import tiny_config


def _ledger(issue=1, reviews=0, accepted_rejections=(), carried=0):
    led = IssueLedger(issue=issue, reviews_performed=reviews,
                      rejections_carried=carried)
    for i, r in enumerate(accepted_rejections):
        led.acceptances[i] = 0
        led.accepted_rejections.append(r)
        led.accepted_eta.append(5.0)
        led.accepted_journals.append(0)
    return led


class TestIssueMetrics:
    def test_mean_reviews_per_reviewer(self):
        reviewers = [Reviewer(id=i) for i in range(500)]
        m = compute_issue_metrics(_ledger(reviews=18000), reviewers, [])
        assert m.mean_reviews_per_reviewer == pytest.approx(36.0)

    def test_zero_reviewers_is_an_error(self):
        with pytest.raises(ValueError, match="zero reviewers"):
            compute_issue_metrics(_ledger(), [], [])

    def test_all_first_try(self):
        m = compute_issue_metrics(_ledger(accepted_rejections=[0, 0, 0]),
                                  [Reviewer(id=0)], [])
        assert m.first_try_acceptance_fraction == 1.0

    def test_histogram_and_fraction(self):
        m = compute_issue_metrics(_ledger(accepted_rejections=[0, 0, 1, 3]),
                                  [Reviewer(id=0)], [])
        assert m.acceptances_by_submission_count == {1: 2, 2: 1, 4: 1}
        assert m.first_try_acceptance_fraction == pytest.approx(0.5)

    def test_histogram_total_matches_acceptances(self):
        result = run_simulation(tiny_config(n_issues=5))
        for led, m in zip(result.ledgers, run_issue_metrics(result)):
            assert sum(m.acceptances_by_submission_count.values()) == len(led.acceptances)
            assert 0.0 <= m.first_try_acceptance_fraction <= 1.0

    def test_quartile_means_from_journal_records(self):
        journals = [Journal(id=0, capacity=5, quartile=1),
                    Journal(id=1, capacity=5, quartile=1),
                    Journal(id=2, capacity=5, quartile=2)]
        journals[0].quality_per_issue.append((1, 9.0, 2))
        journals[1].quality_per_issue.append((1, 7.0, 2))
        m = compute_issue_metrics(_ledger(), [Reviewer(id=0)], journals)
        assert m.quartile_mean_quality[0] == pytest.approx(8.0)
        assert math.isnan(m.quartile_mean_quality[1])


class TestMaxRejections:
    def test_all_first_try_is_zero(self):
        assert max_rejections_before_acceptance([_ledger(accepted_rejections=[0, 0])]) == (0, False)

    def test_no_acceptances_flagged(self):
        value, no_data = max_rejections_before_acceptance([_ledger()])
        assert value == 0 and no_data

    def test_maximum_over_run(self):
        ledgers = [_ledger(accepted_rejections=[0, 2]), _ledger(issue=2, accepted_rejections=[5, 1])]
        assert max_rejections_before_acceptance(ledgers).value == 5

    def test_empty_run_rejected(self):
        with pytest.raises(ValueError):
            max_rejections_before_acceptance([])


class TestMatthewCorrelation:
    def test_preserved_ranking(self):
        series = np.tile(np.arange(10.0), (6, 1))
        assert matthew_correlation(series).rho == pytest.approx(1.0)

    def test_reversed_ranking(self):
        series = np.vstack([np.arange(10.0)] * 5 + [np.arange(10.0)[::-1]])
        assert matthew_correlation(series).rho == pytest.approx(-1.0)

    def test_constant_series_degenerate(self):
        series = np.ones((6, 10))
        result = matthew_correlation(series)
        assert result.degenerate and math.isnan(result.rho)

    def test_needs_two_issues(self):
        with pytest.raises(ValueError):
            matthew_correlation(np.ones((1, 10)))


class TestRunLevel:
    def test_first_try_fraction_pools_the_whole_run(self):
        ledgers = [_ledger(accepted_rejections=[0, 0, 1]),
                   _ledger(issue=2, accepted_rejections=[0, 3])]
        assert run_first_try_fraction(ledgers) == pytest.approx(3 / 5)

    def test_outputs_have_all_six_keys(self):
        result = run_simulation(tiny_config())
        out = run_outputs(result)
        assert set(out) == {"q1", "q2", "q3", "q4", "burden", "first_try"}
        assert out["burden"] > 0

    def test_quality_series_shape(self):
        cfg = tiny_config(system="simplified", n_issues=5)
        series = journal_quality_series(run_simulation(cfg))
        assert series.shape == (5, cfg.n_journals)
