"""Indicators computed from issue ledgers and journal records: reviewer burden,
quartile quality means, acceptance-try histograms, and the rank-persistence
(Matthew) correlation."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from .systems import IssueLedger, SimResult


@dataclass(frozen=True)
class IssueMetrics:
    issue: int
    mean_reviews_per_reviewer: float
    quartile_mean_quality: tuple  # (q1, q2, q3, q4); nan where no journal published
    acceptances_by_submission_count: dict  # tries (rejections + 1) -> count
    first_try_acceptance_fraction: float
    backlog_size: int


def compute_issue_metrics(ledger: IssueLedger, reviewers: Sequence,
                          journals: Sequence) -> IssueMetrics:
    """Fold one ledger into the per-issue indicator bundle."""
    if len(reviewers) == 0:
        raise ValueError("cannot compute reviewer burden with zero reviewers")
    mean_reviews = ledger.reviews_performed / len(reviewers)

    by_quartile: dict[int, list[float]] = {1: [], 2: [], 3: [], 4: []}
    for j in journals:
        if j.quartile is None:
            continue
        mean = j.issue_mean(ledger.issue) if hasattr(j, "issue_mean") else None
        if mean is None:
            for issue, m, _count in j.quality_per_issue:
                if issue == ledger.issue:
                    mean = m
                    break
        if mean is not None:
            by_quartile[j.quartile].append(mean)
    quartile_means = tuple(
        float(np.mean(by_quartile[q])) if by_quartile[q] else math.nan
        for q in (1, 2, 3, 4))

    histogram = dict(sorted(Counter(r + 1 for r in ledger.accepted_rejections).items()))
    total = len(ledger.accepted_rejections)
    fraction = histogram.get(1, 0) / total if total else 0.0
    return IssueMetrics(issue=ledger.issue,
                        mean_reviews_per_reviewer=mean_reviews,
                        quartile_mean_quality=quartile_means,
                        acceptances_by_submission_count=histogram,
                        first_try_acceptance_fraction=fraction,
                        backlog_size=ledger.rejections_carried)


def run_issue_metrics(result: SimResult) -> list[IssueMetrics]:
    return [compute_issue_metrics(led, result.reviewers, result.journals)
            for led in result.ledgers]


def run_first_try_fraction(ledgers: Sequence[IssueLedger]) -> float:
    """Fraction of all manuscripts accepted during the run that were accepted
    on their first submission (the Tables 1-3 headline indicator)."""
    total = sum(len(led.accepted_rejections) for led in ledgers)
    if total == 0:
        return 0.0
    first = sum(1 for led in ledgers for r in led.accepted_rejections if r == 0)
    return first / total


def run_submission_histogram(ledgers: Sequence[IssueLedger]) -> dict[int, int]:
    """Run-level histogram of tries (rejections + 1) at acceptance."""
    counts = Counter(r + 1 for led in ledgers for r in led.accepted_rejections)
    return dict(sorted(counts.items()))


class MaxRejections(NamedTuple):
    value: int
    no_data: bool


def max_rejections_before_acceptance(ledgers: Sequence[IssueLedger]) -> MaxRejections:
    """Maximum prior-rejection count over all accepted manuscripts; flagged
    no_data (with value 0) when the run produced no acceptances."""
    if not ledgers:
        raise ValueError("empty run")
    best: Optional[int] = None
    for led in ledgers:
        for r in led.accepted_rejections:
            best = r if best is None else max(best, r)
    if best is None:
        return MaxRejections(0, True)
    return MaxRejections(best, False)


class MatthewCorrelation(NamedTuple):
    rho: float
    degenerate: bool


def journal_quality_series(result: SimResult) -> np.ndarray:
    """Per-issue running quality, shape (n_issues, n_journals)."""
    return np.array([j.running_quality_series for j in result.journals], dtype=float).T


def matthew_correlation(quality_series: np.ndarray,
                        early_issue: int = 5) -> MatthewCorrelation:
    """Spearman rank correlation between journal qualities at an early issue
    and the final issue; constant series are reported degenerate."""
    series = np.asarray(quality_series, dtype=float)
    if series.shape[0] < 2:
        raise ValueError("need at least two issues of journal quality data")
    early = series[min(early_issue, series.shape[0]) - 1]
    final = series[-1]
    if np.all(early == early[0]) or np.all(final == final[0]):
        return MatthewCorrelation(math.nan, True)
    rho = stats.spearmanr(early, final).statistic
    if not np.isfinite(rho):
        return MatthewCorrelation(math.nan, True)
    return MatthewCorrelation(float(rho), False)


def run_outputs(result: SimResult) -> dict[str, float]:
    """The six sensitivity-sweep outputs of one run: final-issue quartile means,
    final-issue reviewer burden, and the run-level first-try probability."""
    metrics = run_issue_metrics(result)
    last = metrics[-1]
    q1, q2, q3, q4 = last.quartile_mean_quality
    return {"q1": q1, "q2": q2, "q3": q3, "q4": q4,
            "burden": last.mean_reviews_per_reviewer,
            "first_try": run_first_try_fraction(result.ledgers)}
