import pytest

from peerflow import NoiseParams, SimConfig


def tiny_config(**kw) -> SimConfig:
    """A config small enough for sub-second runs that still exercises every phase."""
    base = dict(n_new_per_issue=120, n_journals=10, n_reviewers=40,
                capacity_per_journal=9, n_issues=4, seed=7)
    base.update(kw)
    return SimConfig(**base)


def zero_noise(cfg: SimConfig, **kw) -> SimConfig:
    """All Gaussian variances forced to zero (fails validation; diagnostic only)."""
    from dataclasses import replace
    return replace(cfg,
                   noise=NoiseParams(beta=0.0, gamma=0.35),
                   revision=replace(cfg.revision, sigma=0.0),
                   author_estimate_sigma=0.0, **kw)


@pytest.fixture
def tiny_cfg():
    return tiny_config()
