"""Seeded paired trials and parameter sweeps.

Trial streams: trial ``i`` of a scenario with master seed ``s`` uses
``SeedSequence(s, spawn_key=(i,))`` and spawns four children, in order:

0. eavesdropper placement on the road,
1. channel fading,
2. optimizer restart initializations,
3. the random-phase baseline profile.

Each trial is reproducible on its own, independent of evaluation order. A
given trial index sees the same eve placement and direct-link fading at every
swept value, and the IRS coefficients for ``M`` elements are a prefix of
those for any larger ``M`` (common random numbers across the sweep).
"""
from __future__ import annotations

import csv
import dataclasses
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import draw_realization
from .config import ScenarioConfig
from .irs import PhaseProfile, effective_channels
from .optimizer import alternate_optimize, optimal_power
from .secrecy import SecrecyOutcome, secrecy_capacity

OPTIMIZED_IRS = "optimized_irs"
NO_IRS = "no_irs"
RANDOM_PHASE = "random_phase"
BASELINES = (OPTIMIZED_IRS, NO_IRS, RANDOM_PHASE)

SWEEPABLE = ("power_max", "m_elements")

SWEEP_COLUMNS = ("swept_value", "baseline", "mean_secrecy", "stderr", "trials", "zero_fraction")


def fmt(value) -> str:
    """Nine significant digits, the fixed CSV numeric format."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".9g")


def trial_streams(master_seed: int, trial_index: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(master_seed, spawn_key=(int(trial_index),)).spawn(4)
    return [np.random.default_rng(child) for child in children]


def _closed_form(realization, profile, config) -> SecrecyOutcome:
    """Evaluate a fixed profile with the bang-bang power rule."""
    h_user, h_eves = effective_channels(realization, profile)
    power = optimal_power(abs(h_user) ** 2, float(np.max(np.abs(h_eves) ** 2)), config.power_max)
    return secrecy_capacity(realization, profile, power, config.fading)


def run_trial(
    config: ScenarioConfig,
    trial_index: int,
    baselines=BASELINES,
    traces: list | None = None,
) -> dict[str, SecrecyOutcome]:
    """Draw trial ``trial_index`` and evaluate every requested baseline on it.

    All baselines share the one realization. ``traces``, when given, receives
    the optimizer trace of the optimized-IRS baseline.
    """
    unknown = set(baselines) - set(BASELINES)
    if unknown or not baselines:
        raise ValueError(f"baselines must be a non-empty subset of {BASELINES}, got {baselines}")
    geometry_rng, fading_rng, optimizer_rng, phase_rng = trial_streams(config.master_seed, trial_index)
    topology = config.topology.sample(config.k_eves, geometry_rng)
    realization = draw_realization(topology, config.fading, config.m_elements, fading_rng)

    outcomes = {}
    if OPTIMIZED_IRS in baselines:
        outcome, trace = alternate_optimize(realization, config.fading, config.optimizer, optimizer_rng)
        outcomes[OPTIMIZED_IRS] = outcome
        if traces is not None:
            traces.append(trace)
    if NO_IRS in baselines:
        outcomes[NO_IRS] = _closed_form(realization.truncated(0), PhaseProfile.empty(), config)
    if RANDOM_PHASE in baselines:
        profile = PhaseProfile.random(config.m_elements, phase_rng)
        outcomes[RANDOM_PHASE] = _closed_form(realization, profile, config)
    return {name: outcomes[name] for name in BASELINES if name in outcomes}


def _run_chunk(config, indices, baselines):
    return [run_trial(config, i, baselines) for i in indices]


def run_trials(config: ScenarioConfig, baselines=BASELINES, jobs: int = 1, trials: int | None = None):
    """Run trials ``0 .. trials-1``; the result list is indexed by trial regardless of ``jobs``."""
    n = config.trials if trials is None else trials
    indices = list(range(n))
    if jobs <= 1 or n < 2:
        return _run_chunk(config, indices, baselines)
    chunks = [indices[i::jobs] for i in range(jobs)]
    results = [None] * n
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_chunk, config, chunk, tuple(baselines)) for chunk in chunks]
        for chunk, future in zip(chunks, futures):
            for i, outcome in zip(chunk, future.result()):
                results[i] = outcome
    return results


@dataclass(frozen=True)
class SweepSpec:
    swept: str
    values: tuple
    trials: int
    baselines: tuple = BASELINES

    def __post_init__(self):
        if self.swept not in SWEEPABLE:
            raise ValueError(f"swept must be one of {SWEEPABLE}, got {self.swept!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("swept values must be strictly increasing")
        if self.swept == "m_elements":
            if any(int(v) != v or v < 0 for v in values):
                raise ValueError("element counts must be non-negative integers")
            values = tuple(int(v) for v in values)
        elif any(not v > 0 for v in values):
            raise ValueError("powers must be > 0")
        object.__setattr__(self, "values", values)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        baselines = tuple(b for b in BASELINES if b in set(self.baselines))
        if not baselines or set(self.baselines) - set(BASELINES):
            raise ValueError(f"baselines must be a non-empty subset of {BASELINES}")
        object.__setattr__(self, "baselines", baselines)


@dataclass(frozen=True)
class SweepRow:
    swept_value: float
    baseline: str
    mean_secrecy: float
    stderr: float
    trials: int
    zero_fraction: float


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Aggregated sweep statistics plus the per-trial capacities behind them.

    ``capacities[baseline]`` has shape ``(len(values), trials)``; column ``j``
    of every baseline comes from the same trial index.
    """

    spec: SweepSpec
    rows: tuple[SweepRow, ...]
    capacities: dict = field(default_factory=dict)

    @property
    def values(self):
        return self.spec.values

    def mean(self, baseline: str) -> np.ndarray:
        return self.capacities[baseline].mean(axis=1)

    def stderr(self, baseline: str) -> np.ndarray:
        return np.array([r.stderr for r in self.rows if r.baseline == baseline])

    def gap(self, better: str = OPTIMIZED_IRS, worse: str = NO_IRS):
        """Mean difference of two baselines and the standard error from the reported stderrs."""
        return self.mean(better) - self.mean(worse), np.hypot(self.stderr(better), self.stderr(worse))

    def to_csv(self, stream=None) -> str:
        out = io.StringIO() if stream is None else stream
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in self.rows:
            writer.writerow(
                [fmt(row.swept_value), row.baseline, fmt(row.mean_secrecy), fmt(row.stderr),
                 fmt(row.trials), fmt(row.zero_fraction)]
            )
        return out.getvalue() if stream is None else ""


def summarize(capacities: np.ndarray) -> tuple[float, float, float]:
    """Mean, standard error of the mean, and fraction of exact zeros."""
    n = capacities.size
    stderr = float(capacities.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return float(capacities.mean()), stderr, float(np.mean(capacities == 0.0))


def run_sweep(config: ScenarioConfig, spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Paired trials at each swept value; rows ordered by value, then baseline."""
    capacities = {b: np.empty((len(spec.values), spec.trials)) for b in spec.baselines}
    rows = []
    for i, value in enumerate(spec.values):
        scenario = dataclasses.replace(config, **{spec.swept: value})
        outcomes = run_trials(scenario, spec.baselines, jobs=jobs, trials=spec.trials)
        for baseline in spec.baselines:
            column = np.array([o[baseline].secrecy_capacity for o in outcomes])
            capacities[baseline][i] = column
            mean, stderr, zeros = summarize(column)
            rows.append(SweepRow(value, baseline, mean, stderr, spec.trials, zeros))
    return SweepResult(spec, tuple(rows), capacities)
