"""One-at-a-time sensitivity sweeps over the eight kernel parameters, with
multi-run averaging, min-max range reporting, and monotonicity classification."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .metrics import run_outputs
from .model import SimConfig, validate_config
from .stochastic import derive_seed
from .systems import run_simulation

SWEEPABLE = ("a", "b", "c", "beta", "gamma", "mu", "alpha", "sigma")
OUTPUT_NAMES = ("q1", "q2", "q3", "q4", "burden", "first_try")

#: Spearman magnitude below which a parameter/output relation is called non-monotone.
MONOTONE_RHO = 0.5

_STEP_TOL = 1e-9


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    lo: float
    hi: float
    step: float
    base: SimConfig
    runs_per_point: int = 10


@dataclass(frozen=True)
class SweepPoint:
    value: float
    outputs: dict  # output name -> mean over runs


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    points: tuple
    ranges: dict  # output name -> (min, max) across the grid


def validate_spec(spec: SweepSpec) -> list[str]:
    v = []
    if spec.parameter not in SWEEPABLE:
        v.append(f"unknown sweep parameter {spec.parameter!r}, expected one of {SWEEPABLE}")
    if not spec.lo < spec.hi:
        v.append(f"sweep range must have lo < hi, got [{spec.lo}, {spec.hi}]")
    if spec.step <= 0:
        v.append(f"sweep step must be positive, got {spec.step}")
    elif spec.lo < spec.hi:
        span = spec.hi - spec.lo
        residue = abs(span - round(span / spec.step) * spec.step)
        if residue > _STEP_TOL:
            v.append(f"step {spec.step} does not divide the range {span} (residue {residue:g})")
    if spec.runs_per_point < 1:
        v.append(f"runs_per_point must be at least 1, got {spec.runs_per_point}")
    return v


def grid_values(spec: SweepSpec) -> np.ndarray:
    """Grid lo, lo+step, ..., hi with exactly floor((hi-lo)/step)+1 points."""
    count = int(np.floor((spec.hi - spec.lo) / spec.step + _STEP_TOL)) + 1
    return spec.lo + spec.step * np.arange(count)


def config_at(spec: SweepSpec, value: float) -> SimConfig:
    """Base config with the swept parameter replaced by `value`."""
    base = spec.base
    p = spec.parameter
    if p in ("a", "b", "c"):
        return replace(base, dist=replace(base.dist, **{p: value}))
    if p in ("beta", "gamma"):
        return replace(base, noise=replace(base.noise, **{p: value}))
    return replace(base, revision=replace(base.revision, **{p: value}))


def _run_job(cfg: SimConfig) -> dict:
    return run_outputs(run_simulation(cfg))


def _worker_count(n_jobs: int, max_workers: int | None) -> int:
    cap = max_workers
    env = os.environ.get("PEERFLOW_THREADS")
    if env:
        cap = int(env) if cap is None else min(cap, int(env))
    if cap is None:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def run_parallel(configs: list, max_workers: int | None = None) -> list:
    """Run independent simulations, preserving input order in the results."""
    workers = _worker_count(len(configs), max_workers)
    if workers <= 1 or len(configs) <= 1:
        return [_run_job(cfg) for cfg in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, configs, chunksize=1))


def run_sweep(spec: SweepSpec, max_workers: int | None = None) -> SweepResult:
    """Average the six outputs over runs_per_point seeded runs at each grid value.

    Run seeds derive from (base seed, run index) only, so matched runs share
    random numbers across grid points (common random numbers).
    """
    problems = validate_spec(spec)
    if problems:
        raise ValueError("invalid sweep spec: " + "; ".join(problems))
    values = grid_values(spec)
    jobs: list[SimConfig] = []
    for value in values:
        cfg = config_at(spec, float(value))
        violations = validate_config(cfg)
        if violations:
            raise ValueError(
                f"sweep grid value {spec.parameter}={value:g} yields an invalid config: "
                + "; ".join(violations))
        for run in range(spec.runs_per_point):
            jobs.append(replace(cfg, seed=derive_seed(spec.base.seed, run)))
    outputs = run_parallel(jobs, max_workers=max_workers)

    points = []
    for gi, value in enumerate(values):
        chunk = outputs[gi * spec.runs_per_point:(gi + 1) * spec.runs_per_point]
        means = {name: float(np.mean([o[name] for o in chunk])) for name in OUTPUT_NAMES}
        points.append(SweepPoint(value=float(value), outputs=means))
    ranges = {}
    for name in OUTPUT_NAMES:
        col = np.array([p.outputs[name] for p in points])
        ranges[name] = (float(np.nanmin(col)), float(np.nanmax(col)))
    return SweepResult(spec=spec, points=tuple(points), ranges=ranges)


def monotone_direction(result: SweepResult, output: str) -> str:
    """Classify an output's response to the swept parameter as increasing,
    decreasing, or non-monotone by the sign of the Spearman correlation."""
    if len(result.points) < 3:
        raise ValueError("need at least three grid points to classify monotonicity")
    x = np.array([p.value for p in result.points])
    y = np.array([p.outputs[output] for p in result.points])
    rho = stats.spearmanr(x, y).statistic
    if not np.isfinite(rho) or abs(rho) < MONOTONE_RHO:
        return "non-monotone"
    return "increasing" if rho > 0 else "decreasing"
