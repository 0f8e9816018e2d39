"""The three review-system policies, each a full issue loop: manuscript
creation, review, targeting, preferential acceptance, and revision.

- novel: an intermediate platform reviews first (6 reviewers fresh, 3 revised),
  authors then apply to two journals in quartiles chosen from the released score.
- regular: authors submit blind to one journal per issue from a noisy
  self-estimate; the journal invites 2 reviewers per submission.
- simplified: quartiles bypassed; authors apply to the two journals whose
  evolving quality brackets their platform score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import (Journal, Manuscript, Reviewer, SimConfig, Status,
                    quartile_partition, validate_config)
from .review import (PANEL_FRESH_PLATFORM, PANEL_REGULAR, PANEL_REVISED_PLATFORM,
                     PRIOR_WEIGHT, Thresholds, draw_panels, noise_variance,
                     revise_many, score_value, update_thresholds)
from .stochastic import QualityCdfTable, RngStream, build_cdf, sample_quality_many

STREAM_LABELS = ("quality", "assignment", "noise", "application", "revision", "estimate")

#: Common starting quality assigned to every journal in the simplified system.
SIMPLIFIED_INITIAL_QUALITY = 5.0

#: Quality differences below this are indistinguishable to a submitting author;
#: the nearest-above / nearest-below journal is drawn uniformly among such ties.
#: Without it, journals inside dense quality clusters starve with empty issues.
SIMPLIFIED_TIE_TOL = 0.5

#: Rejection counts at which a regular-system author changes the target band:
#: below REGULAR_SETTLE he aims one band above his self-estimate, from
#: REGULAR_SETTLE he aims at it, and from REGULAR_LOWER one band below it.
REGULAR_SETTLE = 4
REGULAR_LOWER = 6


@dataclass(frozen=True)
class Application:
    """A scored manuscript's request for acceptance at a specific journal."""

    manuscript_id: int
    journal_id: int
    score: float
    issue: int


@dataclass
class IssueLedger:
    """Everything that happened in one issue, sufficient to recompute metrics."""

    issue: int
    carried_in: int = 0
    created: int = 0
    reviews_performed: int = 0
    applications_filed: int = 0
    acceptances: dict = field(default_factory=dict)  # manuscript id -> journal id
    accepted_rejections: list = field(default_factory=list)
    accepted_eta: list = field(default_factory=list)
    accepted_journals: list = field(default_factory=list)
    rejections_carried: int = 0
    retirements: int = 0


@dataclass
class SimState:
    cfg: SimConfig
    journals: list
    reviewers: list
    pending: list
    thresholds: Thresholds
    rng: dict
    table: QualityCdfTable
    quartile_members: list  # band index 0..3 -> array of journal ids
    issue: int = 0
    next_manuscript_id: int = 0


@dataclass
class SimResult:
    cfg: SimConfig
    ledgers: list
    state: SimState

    @property
    def journals(self) -> list:
        return self.state.journals

    @property
    def reviewers(self) -> list:
        return self.state.reviewers


def new_state(cfg: SimConfig) -> SimState:
    """Build the initial simulation state for a validated config."""
    streams = {label: RngStream(cfg.seed, label) for label in STREAM_LABELS}
    use_quartiles = cfg.system != "simplified"
    journals: list[Journal] = []
    members: list[np.ndarray] = []
    if use_quartiles:
        sizes = quartile_partition(cfg.n_journals)
        start = 0
        for q, size in enumerate(sizes, start=1):
            ids = np.arange(start, start + size)
            members.append(ids)
            journals.extend(Journal(id=int(i), capacity=cfg.capacity_per_journal, quartile=q)
                            for i in ids)
            start += size
    else:
        members = [np.arange(cfg.n_journals)]
        journals = [Journal(id=i, capacity=cfg.capacity_per_journal, quartile=None,
                            running_quality=SIMPLIFIED_INITIAL_QUALITY)
                    for i in range(cfg.n_journals)]
    reviewers = [Reviewer(id=i) for i in range(cfg.n_reviewers)]
    t1, t2, t3 = cfg.init_thresholds
    return SimState(cfg=cfg, journals=journals, reviewers=reviewers, pending=[],
                    thresholds=Thresholds(t1, t2, t3), rng=streams,
                    table=build_cdf(cfg.dist), quartile_members=members)


# ---------------------------------------------------------------------------
# targeting rules
# ---------------------------------------------------------------------------

def band_of(scores, thresholds: Thresholds) -> np.ndarray:
    """Quartile band index (0 = Q1 ... 3 = Q4) containing each score."""
    edges = np.array([thresholds.theta3, thresholds.theta2, thresholds.theta1])
    return 3 - np.searchsorted(edges, np.asarray(scores, dtype=float), side="right")


def target_quartiles_novel(score: float, rejections: int,
                           thresholds: Thresholds) -> tuple[int, int]:
    """Quartile pair (1..4) for a platform-scored manuscript.

    The first element is the band containing the score; the second is one band
    above while the author is fresh (Q1 saturates to (Q1, Q2)) and one band
    below once he has been rejected twice (Q4 saturates to (Q4, Q3)).
    """
    band = int(band_of(score, thresholds))
    if rejections <= 1:
        second = 1 if band == 0 else band - 1
    else:
        second = 2 if band == 3 else band + 1
    return band + 1, second + 1


def regular_target_band(estimate_band: np.ndarray, rejections: np.ndarray) -> np.ndarray:
    """Band targeted by a regular-system author who only knows his self-estimate.

    Without released scores authors first try their fortune one band above the
    estimate, settle on the estimate band after REGULAR_SETTLE rejections, and
    lower expectations one band below it after REGULAR_LOWER.
    """
    up = np.maximum(estimate_band - 1, 0)
    down = np.minimum(estimate_band + 1, 3)
    return np.where(rejections < REGULAR_SETTLE, up,
                    np.where(rejections < REGULAR_LOWER, estimate_band, down))


# ---------------------------------------------------------------------------
# preferential acceptance
# ---------------------------------------------------------------------------

def _journal_priority(journals: Sequence[Journal]) -> np.ndarray:
    """Journal ids in selection order: Q1 first, then running quality, then id."""
    ids = np.array([j.id for j in journals])
    quality = np.array([j.running_quality for j in journals], dtype=float)
    if journals and journals[0].quartile is not None:
        quartiles = np.array([j.quartile for j in journals])
        order = np.lexsort((ids, -quality, quartiles))
    else:
        order = np.lexsort((ids, -quality))
    return ids[order]


def _match(app_ms: np.ndarray, app_j: np.ndarray, app_score: np.ndarray,
           capacities: np.ndarray, journal_order: np.ndarray,
           n_manuscripts: int) -> np.ndarray:
    """Run preferential admission; returns accepted journal per manuscript (-1 = none).

    Journals select in `journal_order`; each takes its applications by score
    descending (ties by manuscript key) up to capacity, skipping manuscripts
    already taken elsewhere, whose slots pass to the next applicant.
    """
    accepted = np.full(n_manuscripts, -1, dtype=np.int64)
    if app_ms.size == 0:
        return accepted
    order = np.lexsort((app_ms, -app_score, app_j))
    sorted_j = app_j[order]
    lo = np.searchsorted(sorted_j, np.arange(capacities.size), side="left")
    hi = np.searchsorted(sorted_j, np.arange(capacities.size), side="right")
    for j in journal_order:
        cap = capacities[j]
        taken = 0
        for t in range(lo[j], hi[j]):
            if taken == cap:
                break
            ms = app_ms[order[t]]
            if accepted[ms] < 0:
                accepted[ms] = j
                taken += 1
    return accepted


def accept_applications(applications: Sequence[Application],
                        journals: Sequence[Journal]) -> dict[int, int]:
    """Public matcher over Application records: manuscript id -> accepting journal id."""
    if not applications:
        return {}
    ms_ids = sorted({a.manuscript_id for a in applications})
    key = {m: i for i, m in enumerate(ms_ids)}
    app_ms = np.array([key[a.manuscript_id] for a in applications])
    app_j = np.array([a.journal_id for a in applications])
    app_score = np.array([a.score for a in applications], dtype=float)
    capacities = np.zeros(max(j.id for j in journals) + 1, dtype=np.int64)
    for j in journals:
        capacities[j.id] = j.capacity
    accepted = _match(app_ms, app_j, app_score, capacities,
                      _journal_priority(journals), len(ms_ids))
    return {ms_ids[i]: int(j) for i, j in enumerate(accepted) if j >= 0}


# ---------------------------------------------------------------------------
# issue phases shared by the systems
# ---------------------------------------------------------------------------

def _create_manuscripts(state: SimState, n: int) -> list[Manuscript]:
    etas = sample_quality_many(state.table, state.rng["quality"], n)
    issue = state.issue
    base = state.next_manuscript_id
    state.next_manuscript_id += n
    return [Manuscript(id=base + i, eta=float(etas[i]), born_issue=issue)
            for i in range(n)]


def _assign_and_score(state: SimState, fresh: list, carried: list,
                      k_fresh: int, k_carried: int,
                      use_prior: bool) -> tuple[np.ndarray, int]:
    """Assign reviewer panels, draw noisy scores, aggregate per manuscript.

    Returns the aggregated score per participant (fresh first, carried after)
    and the number of reviews performed. Reviewer loads are finalized before
    any scoring so noise variance reflects the issue's full workload.
    """
    rng_a, rng_n = state.rng["assignment"], state.rng["noise"]
    n_rev = len(state.reviewers)
    panels_f = draw_panels(len(fresh), k_fresh, n_rev, rng_a)
    panels_c = draw_panels(len(carried), k_carried, n_rev, rng_a)
    loads = np.bincount(np.concatenate((panels_f.ravel(), panels_c.ravel())),
                        minlength=n_rev)
    for r in state.reviewers:
        r.load_current_issue = int(loads[r.id])
        r.load_history.append(int(loads[r.id]))

    noise = state.cfg.noise

    def _scores(panels: np.ndarray, etas: np.ndarray) -> np.ndarray:
        if panels.size == 0:
            return np.empty((panels.shape[0], panels.shape[1]))
        var = noise_variance(noise, loads[panels])
        deltas = rng_n.standard_normal(panels.shape) * np.sqrt(var)
        return score_value(etas[:, None], deltas)

    eta_f = np.array([m.eta for m in fresh], dtype=float)
    eta_c = np.array([m.eta for m in carried], dtype=float)
    agg_f = _scores(panels_f, eta_f).mean(axis=1) if fresh else np.empty(0)
    raw_c = _scores(panels_c, eta_c).mean(axis=1) if carried else np.empty(0)
    if carried and use_prior:
        prior = np.array([m.last_score for m in carried], dtype=float)
        agg_c = (1.0 - PRIOR_WEIGHT) * raw_c + PRIOR_WEIGHT * prior
    else:
        agg_c = raw_c
    agg = np.concatenate((agg_f, agg_c))
    participants = fresh + carried
    for m, s in zip(participants, agg):
        m.last_score = float(s)
        m.status = Status.SCORED
    reviews = k_fresh * len(fresh) + k_carried * len(carried)
    return agg, reviews


def _draw_journals_in_bands(state: SimState, bands: np.ndarray) -> np.ndarray:
    """Uniform journal choice within each manuscript's target quartile band."""
    rng = state.rng["application"]
    out = np.empty(bands.size, dtype=np.int64)
    for b in range(len(state.quartile_members)):
        idx = np.flatnonzero(bands == b)
        if idx.size:
            members = state.quartile_members[b]
            out[idx] = members[rng.integers(0, members.size, idx.size)]
    return out


def _settle_issue(state: SimState, participants: list, app_ms: np.ndarray,
                  app_j: np.ndarray, app_score: np.ndarray,
                  ledger: IssueLedger) -> None:
    """Acceptance matching, rejection handling, and journal record upkeep."""
    cfg = state.cfg
    capacities = np.array([j.capacity for j in state.journals], dtype=np.int64)
    accepted = _match(app_ms, app_j, app_score, capacities,
                      _journal_priority(state.journals), len(participants))
    ledger.applications_filed = int(app_ms.size)

    rejected: list[Manuscript] = []
    for i, m in enumerate(participants):
        j = int(accepted[i])
        if j >= 0:
            m.status = Status.ACCEPTED
            m.accepted_journal = j
            m.accepted_issue = state.issue
            ledger.acceptances[m.id] = j
            ledger.accepted_rejections.append(m.rejections)
            ledger.accepted_eta.append(m.eta)
            ledger.accepted_journals.append(j)
        else:
            rejected.append(m)

    survivors: list[Manuscript] = []
    for m in rejected:
        m.rejections += 1
        if m.rejections > cfg.max_resubmissions:
            m.status = Status.RETIRED
            ledger.retirements += 1
        else:
            survivors.append(m)
    revise_many(survivors, cfg.revision, state.rng["revision"])
    for m in survivors:
        m.status = Status.PENDING_REVIEW
    state.pending = survivors
    ledger.rejections_carried = len(survivors)

    n_j = len(state.journals)
    acc_j = np.array(ledger.accepted_journals, dtype=np.int64)
    acc_eta = np.array(ledger.accepted_eta, dtype=float)
    counts = np.bincount(acc_j, minlength=n_j) if acc_j.size else np.zeros(n_j, dtype=int)
    sums = (np.bincount(acc_j, weights=acc_eta, minlength=n_j) if acc_j.size
            else np.zeros(n_j))
    for j in state.journals:
        c = int(counts[j.id])
        if c > 0:
            mean = float(sums[j.id] / c)
            j.quality_per_issue.append((state.issue, mean, c))
            j.running_quality = mean
        j.running_quality_series.append(j.running_quality)


def _empty_issue(state: SimState) -> IssueLedger:
    return IssueLedger(issue=state.issue)


# ---------------------------------------------------------------------------
# the three issue loops
# ---------------------------------------------------------------------------

def run_issue_novel(state: SimState) -> IssueLedger:
    """One platform-mediated issue: review first, then two applications per
    manuscript into score-derived quartiles, then preferential admission."""
    cfg = state.cfg
    state.issue += 1
    fresh = _create_manuscripts(state, cfg.n_new_per_issue)
    carried = state.pending
    participants = fresh + carried
    if not participants:
        return _empty_issue(state)
    ledger = IssueLedger(issue=state.issue, created=len(fresh), carried_in=len(carried))

    agg, ledger.reviews_performed = _assign_and_score(
        state, fresh, carried, PANEL_FRESH_PLATFORM, PANEL_REVISED_PLATFORM,
        use_prior=True)

    bands = band_of(agg, state.thresholds)
    rejections = np.array([m.rejections for m in participants])
    up = np.where(bands == 0, 1, bands - 1)
    down = np.where(bands == 3, 2, bands + 1)
    second = np.where(rejections <= 1, up, down)
    first_j = _draw_journals_in_bands(state, bands)
    second_j = _draw_journals_in_bands(state, second)

    p = len(participants)
    app_ms = np.concatenate((np.arange(p), np.arange(p)))
    app_j = np.concatenate((first_j, second_j))
    app_score = np.concatenate((agg, agg))
    _settle_issue(state, participants, app_ms, app_j, app_score, ledger)
    state.thresholds = update_thresholds(state.journals, state.thresholds, state.issue)
    return ledger


def run_issue_regular(state: SimState) -> IssueLedger:
    """One journal-mediated issue: authors submit blind to a single journal from
    a noisy self-estimate; the journal invites 2 reviewers per submission."""
    cfg = state.cfg
    state.issue += 1
    fresh = _create_manuscripts(state, cfg.n_new_per_issue)
    carried = state.pending
    participants = fresh + carried
    if not participants:
        return _empty_issue(state)
    ledger = IssueLedger(issue=state.issue, created=len(fresh), carried_in=len(carried))

    eta = np.array([m.eta for m in participants], dtype=float)
    eps = state.rng["estimate"].standard_normal(len(participants)) * cfg.author_estimate_sigma
    estimate = eta * (1.0 + eps)
    est_bands = band_of(estimate, state.thresholds)
    rejections = np.array([m.rejections for m in participants])
    targets = regular_target_band(est_bands, rejections)
    journals = _draw_journals_in_bands(state, targets)

    agg, ledger.reviews_performed = _assign_and_score(
        state, fresh, carried, PANEL_REGULAR, PANEL_REGULAR, use_prior=False)

    app_ms = np.arange(len(participants))
    _settle_issue(state, participants, app_ms, journals, agg, ledger)
    state.thresholds = update_thresholds(state.journals, state.thresholds, state.issue)
    return ledger


def run_issue_simplified(state: SimState) -> IssueLedger:
    """One quartile-free issue: issue 1 assigns manuscripts to journals at
    random; afterwards authors apply to the journals whose evolving quality is
    nearest above and nearest below their platform score."""
    cfg = state.cfg
    state.issue += 1
    fresh = _create_manuscripts(state, cfg.n_new_per_issue)
    carried = state.pending
    participants = fresh + carried
    if not participants:
        return _empty_issue(state)
    ledger = IssueLedger(issue=state.issue, created=len(fresh), carried_in=len(carried))

    agg, ledger.reviews_performed = _assign_and_score(
        state, fresh, carried, PANEL_FRESH_PLATFORM, PANEL_REVISED_PLATFORM,
        use_prior=True)

    p = len(participants)
    if state.issue == 1:
        app_ms = np.arange(p)
        app_j = state.rng["application"].integers(0, cfg.n_journals, p)
        app_score = agg
    else:
        rng = state.rng["application"]
        quality = np.array([j.running_quality for j in state.journals], dtype=float)
        ids = np.array([j.id for j in state.journals])
        order = np.lexsort((ids, quality))
        sq = quality[order]
        nj = cfg.n_journals
        pos = np.searchsorted(sq, agg, side="left")
        # Nearest journal at or above the score, then at or... below it; when one
        # side is empty the author takes the two nearest on the available side.
        i_above = np.minimum(pos, nj - 1)
        i_below = np.where(pos == 0, 1, np.where(pos == nj, nj - 2, pos - 1))
        # Authors cannot resolve quality ties finer than SIMPLIFIED_TIE_TOL:
        # draw uniformly inside each tie group.
        hi = np.searchsorted(sq, sq[i_above] + SIMPLIFIED_TIE_TOL, side="right")
        pick_above = i_above + rng.integers(0, np.maximum(hi - i_above, 1))
        lo = np.searchsorted(sq, sq[i_below] - SIMPLIFIED_TIE_TOL, side="left")
        pick_below = lo + rng.integers(0, np.maximum(i_below - lo + 1, 1))
        same = pick_above == pick_below
        pick_below = np.where(same & (pick_below > 0), pick_below - 1, pick_below)
        pick_above = np.where(same & (pick_below == pick_above), pick_above + 1,
                              pick_above)
        app_ms = np.concatenate((np.arange(p), np.arange(p)))
        app_j = np.concatenate((ids[order][pick_above], ids[order][pick_below]))
        app_score = np.concatenate((agg, agg))
    _settle_issue(state, participants, app_ms, app_j, app_score, ledger)
    return ledger


_RUNNERS = {"novel": run_issue_novel, "regular": run_issue_regular,
            "simplified": run_issue_simplified}


def run_simulation(cfg: SimConfig, validate: bool = True) -> SimResult:
    """Run the configured system for cfg.n_issues issues.

    `validate=False` skips config validation for diagnostic runs (for example
    zero review noise or capacity exceeding the inflow) that deliberately
    violate the production invariants.
    """
    if validate:
        violations = validate_config(cfg)
        if violations:
            raise ValueError("invalid config: " + "; ".join(violations))
    state = new_state(cfg)
    runner = _RUNNERS[cfg.system]
    ledgers = [runner(state) for _ in range(cfg.n_issues)]
    return SimResult(cfg=cfg, ledgers=ledgers, state=state)
