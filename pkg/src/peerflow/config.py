"""Flat key=value configuration files and override merging.

Keys match the SimConfig field names; the nested distribution, noise, and
revision parameters are addressed by their own field names (a, b, c, eta_max,
beta, gamma, mu, alpha, sigma). Unknown keys are an error.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .model import SimConfig

_INT_KEYS = {"n_new_per_issue", "n_journals", "n_reviewers", "capacity_per_journal",
             "n_issues", "seed", "max_resubmissions"}
_FLOAT_KEYS = {"author_estimate_sigma"}
_DIST_KEYS = {"a", "b", "c", "eta_max"}
_NOISE_KEYS = {"beta", "gamma"}
_REVISION_KEYS = {"mu", "alpha", "sigma"}
_STR_KEYS = {"system"}
_TUPLE_KEYS = {"init_thresholds"}

KNOWN_KEYS = (_INT_KEYS | _FLOAT_KEYS | _DIST_KEYS | _NOISE_KEYS
              | _REVISION_KEYS | _STR_KEYS | _TUPLE_KEYS)


def parse_config(text: str, base: SimConfig | None = None) -> SimConfig:
    """Parse `key = value` lines ('#' starts a comment) into a SimConfig."""
    cfg = base or SimConfig()
    unknown: list[str] = []
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KNOWN_KEYS:
            unknown.append(key)
            continue
        values[key] = value
    if unknown:
        raise ValueError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    return apply_values(cfg, values)


def apply_values(cfg: SimConfig, values: dict) -> SimConfig:
    """Apply a {key: raw-or-typed value} mapping on top of a config."""
    dist, noise, revision = cfg.dist, cfg.noise, cfg.revision
    top: dict = {}
    for key, value in values.items():
        if key in _INT_KEYS:
            top[key] = int(value)
        elif key in _FLOAT_KEYS:
            top[key] = float(value)
        elif key in _STR_KEYS:
            top[key] = str(value)
        elif key in _TUPLE_KEYS:
            if isinstance(value, str):
                parts = [p for p in value.replace(",", " ").split() if p]
            else:
                parts = list(value)
            if len(parts) != 3:
                raise ValueError(f"{key} needs exactly three values, got {value!r}")
            top[key] = tuple(float(p) for p in parts)
        elif key in _DIST_KEYS:
            dist = replace(dist, **{key: float(value)})
        elif key in _NOISE_KEYS:
            noise = replace(noise, **{key: float(value)})
        elif key in _REVISION_KEYS:
            revision = replace(revision, **{key: float(value)})
        else:
            raise ValueError(f"unknown configuration key: {key}")
    return replace(cfg, dist=dist, noise=noise, revision=revision, **top)


def load_config(path: str | Path, base: SimConfig | None = None) -> SimConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), base=base)


def config_to_dict(cfg: SimConfig) -> dict:
    """Flatten a SimConfig to the documented key set (manifest snapshot form)."""
    out = {
        "n_new_per_issue": cfg.n_new_per_issue,
        "n_journals": cfg.n_journals,
        "n_reviewers": cfg.n_reviewers,
        "capacity_per_journal": cfg.capacity_per_journal,
        "n_issues": cfg.n_issues,
        "init_thresholds": list(cfg.init_thresholds),
        "system": cfg.system,
        "seed": cfg.seed,
        "author_estimate_sigma": cfg.author_estimate_sigma,
        "max_resubmissions": cfg.max_resubmissions,
        "a": cfg.dist.a, "b": cfg.dist.b, "c": cfg.dist.c, "eta_max": cfg.dist.eta_max,
        "beta": cfg.noise.beta, "gamma": cfg.noise.gamma,
        "mu": cfg.revision.mu, "alpha": cfg.revision.alpha, "sigma": cfg.revision.sigma,
    }
    return out


def config_from_dict(d: dict) -> SimConfig:
    values = dict(d)
    if "init_thresholds" in values and not isinstance(values["init_thresholds"], str):
        values["init_thresholds"] = tuple(float(x) for x in values["init_thresholds"])
    return apply_values(SimConfig(), values)
