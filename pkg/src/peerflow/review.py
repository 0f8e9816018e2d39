"""Review mechanics shared by all systems: reviewer assignment, noisy scoring,
score aggregation, revision, and quartile threshold maintenance."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean
from typing import Optional, Sequence

import numpy as np

from .model import Journal, Manuscript, NoiseParams, Reviewer, RevisionParams
from .stochastic import RngStream, gaussian

#: Minimum gap kept between consecutive thresholds when repairing ordering.
THRESHOLD_EPS = 1e-6

#: Reviewers per manuscript: platform systems use 6 fresh / 3 revised,
#: the journal-mediated system invites 2 per submission.
PANEL_FRESH_PLATFORM = 6
PANEL_REVISED_PLATFORM = 3
PANEL_REGULAR = 2

#: Weight of the previous aggregated score when re-scoring a revised manuscript.
PRIOR_WEIGHT = 0.5


@dataclass(frozen=True)
class ReviewScore:
    manuscript_id: int
    reviewer_id: int
    value: float
    issue: int


@dataclass(frozen=True)
class Thresholds:
    """Lower quality bounds of quartiles Q1-Q3; strictly decreasing."""

    theta1: float
    theta2: float
    theta3: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


def noise_variance(params: NoiseParams, load) -> np.ndarray | float:
    """Review-noise variance beta * load**gamma; strictly increasing in load.

    Accepts a scalar load or an array of loads.
    """
    arr = np.asarray(load)
    if np.any(arr < 1):
        raise ValueError("reviewer scored with no assignment")
    out = params.beta * arr.astype(float) ** params.gamma
    return float(out) if np.isscalar(load) else out


def score_value(eta, delta) -> np.ndarray | float:
    """Review score eta * (1 + delta), clamped at zero."""
    return np.maximum(0.0, np.asarray(eta, dtype=float) * (1.0 + np.asarray(delta, dtype=float)))


def draw_panels(n_panels: int, panel_size: int, n_reviewers: int, rng: RngStream) -> np.ndarray:
    """Draw `panel_size` distinct reviewers uniformly for each of `n_panels` manuscripts.

    Vectorized collision-redraw: panels are built column by column, redrawing
    only entries that collide with earlier columns of the same row. Falls back
    to per-row argsort when the panel covers a large fraction of the pool.
    """
    if panel_size > n_reviewers:
        raise ValueError(f"cannot pick {panel_size} distinct reviewers from {n_reviewers}")
    if n_panels == 0:
        return np.empty((0, panel_size), dtype=np.int64)
    if 4 * panel_size >= n_reviewers:
        u = rng.uniform((n_panels, n_reviewers))
        return np.argsort(u, axis=1)[:, :panel_size].astype(np.int64)
    panels = np.empty((n_panels, panel_size), dtype=np.int64)
    panels[:, 0] = rng.integers(0, n_reviewers, n_panels)
    for col in range(1, panel_size):
        candidates = rng.integers(0, n_reviewers, n_panels)
        clash = (candidates[:, None] == panels[:, :col]).any(axis=1)
        while np.any(clash):
            idx = np.flatnonzero(clash)
            candidates[idx] = rng.integers(0, n_reviewers, idx.size)
            clash[idx] = (candidates[idx, None] == panels[idx, :col]).any(axis=1)
        panels[:, col] = candidates
    return panels


def assign_reviewers(manuscripts: Sequence[Manuscript], reviewers: Sequence[Reviewer],
                     per_manuscript: int, rng: RngStream) -> dict[int, list[int]]:
    """Assign `per_manuscript` distinct reviewers to each manuscript and bump loads."""
    panels = draw_panels(len(manuscripts), per_manuscript, len(reviewers), rng)
    for row in panels.ravel():
        reviewers[row].load_current_issue += 1
    return {m.id: panels[i].tolist() for i, m in enumerate(manuscripts)}


def score_manuscript(m: Manuscript, reviewer: Reviewer, params: NoiseParams,
                     rng: RngStream, issue: int = 0) -> ReviewScore:
    """Score one manuscript: delta ~ N(0, beta * load**gamma), value clamped at 0.

    The reviewer's load must be final for the issue (all assignments precede
    all scoring).
    """
    var = noise_variance(params, reviewer.load_current_issue)
    delta = gaussian(rng, 0.0, var)
    return ReviewScore(manuscript_id=m.id, reviewer_id=reviewer.id,
                       value=float(score_value(m.eta, delta)), issue=issue)


def aggregate_score(scores: Sequence, prior: Optional[float] = None) -> float:
    """Mean of the fresh review values; a revised manuscript's prior score is
    blended in at PRIOR_WEIGHT."""
    if len(scores) == 0:
        raise ValueError("cannot aggregate an empty score list")
    values = [s.value if isinstance(s, ReviewScore) else float(s) for s in scores]
    mean = fmean(values)
    if prior is None:
        return mean
    return (1.0 - PRIOR_WEIGHT) * mean + PRIOR_WEIGHT * prior


def revision_gain_mean(params: RevisionParams, k) -> np.ndarray | float:
    """Expected quality gain mu * alpha**k at revision count k; decreasing in k."""
    return params.mu * params.alpha ** np.asarray(k, dtype=float)


def revise(m: Manuscript, params: RevisionParams, rng: RngStream) -> Manuscript:
    """Apply one revision: eta += N(mu * alpha**k, sigma^2) clamped at 0, then k += 1."""
    gain = gaussian(rng, float(revision_gain_mean(params, m.k_revisions)), params.sigma ** 2)
    m.eta = max(0.0, m.eta + gain)
    m.k_revisions += 1
    return m


def revise_many(manuscripts: Sequence[Manuscript], params: RevisionParams,
                rng: RngStream) -> None:
    """Bulk revision with the same arithmetic as `revise`, one draw per manuscript."""
    if not manuscripts:
        return
    k = np.array([m.k_revisions for m in manuscripts], dtype=float)
    eta = np.array([m.eta for m in manuscripts], dtype=float)
    gains = params.mu * params.alpha ** k + params.sigma * rng.standard_normal(len(manuscripts))
    eta = np.maximum(0.0, eta + gains)
    for m, e in zip(manuscripts, eta):
        m.eta = float(e)
        m.k_revisions += 1


def update_thresholds(journals: Sequence[Journal], current: Thresholds,
                      issue: int) -> Thresholds:
    """Set each quartile's threshold to the minimum issue-mean published quality
    among that quartile's journals; quartiles that published nothing keep their
    threshold. Strict ordering is enforced with a THRESHOLD_EPS gap."""
    new = list(current.as_tuple())
    for q in (1, 2, 3):
        means = [j.issue_mean(issue) for j in journals if j.quartile == q]
        means = [m for m in means if m is not None]
        if means:
            new[q - 1] = min(means)
    t1 = new[0]
    t2 = min(new[1], t1 - THRESHOLD_EPS)
    t3 = min(new[2], t2 - THRESHOLD_EPS)
    return Thresholds(t1, t2, t3)
