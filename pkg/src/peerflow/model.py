"""Domain types, configuration, and validation shared by every simulation engine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

SYSTEMS = ("novel", "regular", "simplified")

#: Truncation point for the integrable singularity of the quality density at 0.
ETA_MIN = 1e-6


@dataclass(frozen=True)
class QualityDistParams:
    """Shape of the manuscript-quality density a * eta^-b * exp(-c * eta) on [0, eta_max].

    The density is always renormalized to integrate to 1, which makes the
    scale parameter `a` inert for sampling; it is kept for configuration
    fidelity and for plotting the unnormalized curve.
    """

    a: float = 0.255
    b: float = 0.3
    c: float = 0.2
    eta_max: float = 10.0


@dataclass(frozen=True)
class NoiseParams:
    """Review-noise variance model: variance = beta * load**gamma."""

    beta: float = 0.1
    gamma: float = 0.35


@dataclass(frozen=True)
class RevisionParams:
    """Post-rejection quality gain: N(mu * alpha**k, sigma**2) at revision count k."""

    mu: float = 0.5
    alpha: float = 0.75
    sigma: float = 0.55


@dataclass(frozen=True)
class SimConfig:
    """Complete, reproducible description of one simulation run."""

    n_new_per_issue: int = 3000
    n_journals: int = 111
    n_reviewers: int = 500
    capacity_per_journal: int = 27
    n_issues: int = 20
    init_thresholds: tuple[float, float, float] = (8.0, 6.0, 4.0)
    dist: QualityDistParams = QualityDistParams()
    noise: NoiseParams = NoiseParams()
    revision: RevisionParams = RevisionParams()
    system: str = "novel"
    seed: int = 0
    author_estimate_sigma: float = 0.15
    max_resubmissions: int = 8


def validate_config(cfg: SimConfig) -> list[str]:
    """Return a description of every violated invariant; empty means valid.

    Total function: never raises, safe to call on arbitrary field values.
    """
    v: list[str] = []
    d, nz, rv = cfg.dist, cfg.noise, cfg.revision
    if not d.a > 0:
        v.append(f"dist.a must be positive, got {d.a}")
    if not 0 < d.b < 1:
        v.append(f"dist.b must lie in (0,1) for integrability at the origin, got {d.b}")
    if not d.c > 0:
        v.append(f"dist.c must be positive, got {d.c}")
    if not d.eta_max > 0:
        v.append(f"dist.eta_max must be positive, got {d.eta_max}")
    if not nz.beta > 0:
        v.append(f"noise.beta must be positive, got {nz.beta}")
    if not nz.gamma > 0:
        v.append(f"noise.gamma must be positive, got {nz.gamma}")
    if not 0 < rv.alpha < 1:
        v.append(f"revision.alpha must lie in (0,1), got {rv.alpha}")
    if rv.sigma < 0:
        v.append(f"revision.sigma must be nonnegative, got {rv.sigma}")

    t1, t2, t3 = cfg.init_thresholds
    if not (t1 > t2 > t3):
        v.append("thresholds not strictly decreasing")
    if not t3 > 0:
        v.append(f"lowest threshold must be positive, got {t3}")

    for name in ("n_new_per_issue", "n_journals", "n_reviewers",
                 "capacity_per_journal", "max_resubmissions"):
        value = getattr(cfg, name)
        if value < 1:
            v.append(f"{name} must be at least 1, got {value}")
    if cfg.n_issues < 0:
        v.append(f"n_issues must be nonnegative, got {cfg.n_issues}")
    if cfg.n_journals < 4:
        v.append(f"too few journals to form quartiles, got {cfg.n_journals}")

    total_capacity = cfg.n_journals * cfg.capacity_per_journal
    if total_capacity >= cfg.n_new_per_issue:
        v.append(f"total capacity {total_capacity} >= n {cfg.n_new_per_issue}")

    if cfg.system not in SYSTEMS:
        v.append(f"unknown system {cfg.system!r}, expected one of {SYSTEMS}")
    if not 0 <= cfg.seed < 2 ** 64:
        v.append(f"seed must fit in 64 unsigned bits, got {cfg.seed}")
    if cfg.author_estimate_sigma < 0:
        v.append(f"author_estimate_sigma must be nonnegative, got {cfg.author_estimate_sigma}")
    return v


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5))


def quartile_partition(n_journals: int) -> tuple[int, int, int, int]:
    """Split journals into quartile bands of 10% / 15% / 25% / 50%.

    Rounding is half-away-from-zero on the cumulative 10/25/50 percent marks;
    empty bands are repaired by stealing one slot from the largest band so all
    four stay non-empty for n_journals >= 4.
    """
    if n_journals < 4:
        raise ValueError("too few journals to form quartiles")
    q1 = _round_half_away(0.10 * n_journals)
    q2 = _round_half_away(0.25 * n_journals) - q1
    q3 = _round_half_away(0.50 * n_journals) - q1 - q2
    sizes = [q1, q2, q3, n_journals - q1 - q2 - q3]
    while min(sizes) < 1:
        donor = max(range(4), key=lambda i: sizes[i])
        sizes[donor] -= 1
        sizes[sizes.index(min(sizes))] += 1
    return tuple(sizes)  # type: ignore[return-value]


class Status(Enum):
    PENDING_REVIEW = "pending_review"
    SCORED = "scored"
    ACCEPTED = "accepted"
    RETIRED = "retired"


@dataclass(slots=True)
class Manuscript:
    """A manuscript with ground-truth quality eta, mutable only through revision."""

    id: int
    eta: float
    born_issue: int
    k_revisions: int = 0
    rejections: int = 0
    last_score: Optional[float] = None
    status: Status = Status.PENDING_REVIEW
    accepted_journal: Optional[int] = None
    accepted_issue: Optional[int] = None


@dataclass(slots=True)
class Reviewer:
    """Reviewer whose per-issue assignment load drives scoring noise."""

    id: int
    load_current_issue: int = 0
    load_history: list = field(default_factory=list)


@dataclass(slots=True)
class Journal:
    """A journal: static quartile membership, per-issue capacity, publication record."""

    id: int
    capacity: int
    quartile: Optional[int] = None  # 1..4; None when quartiles are bypassed
    quality_per_issue: list = field(default_factory=list)  # (issue, mean_eta, count)
    running_quality: float = 0.0
    running_quality_series: list = field(default_factory=list)

    def issue_mean(self, issue: int) -> Optional[float]:
        if self.quality_per_issue and self.quality_per_issue[-1][0] == issue:
            return self.quality_per_issue[-1][1]
        return None


def with_overrides(cfg: SimConfig, **kw) -> SimConfig:
    """Replace top-level SimConfig fields, returning a new config."""
    return replace(cfg, **kw)
