"""peerflow: a seedable Monte Carlo simulator of journal peer-review ecosystems."""

from .model import (Journal, Manuscript, NoiseParams, QualityDistParams,
                    RevisionParams, Reviewer, SimConfig, Status,
                    quartile_partition, validate_config)
from .review import (ReviewScore, Thresholds, aggregate_score, assign_reviewers,
                     noise_variance, revise, score_manuscript, update_thresholds)
from .stochastic import (QualityCdfTable, RngStream, build_cdf, cdf_at,
                         derive_seed, gaussian, quantile, sample_quality,
                         sample_quality_many)
from .systems import (Application, IssueLedger, SimResult, accept_applications,
                      run_issue_novel, run_issue_regular, run_issue_simplified,
                      run_simulation, target_quartiles_novel)
from .metrics import (IssueMetrics, compute_issue_metrics, matthew_correlation,
                      max_rejections_before_acceptance, run_first_try_fraction,
                      run_issue_metrics, run_outputs)
from .sweep import SweepSpec, SweepResult, grid_values, monotone_direction, run_sweep

__version__ = "0.1.0"
