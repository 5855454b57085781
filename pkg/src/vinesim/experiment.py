"""Monte Carlo harness over agents and spot-count scenarios.

Trial seeding is counter based: trial ``k`` of the ``n``-spot scenario draws
its spots from ``SeedSequence([master_seed, n, k])``. Every agent in a trial
sees the same spot set, and a trial's outcome depends on nothing but those
three integers, so serial and parallel runs agree bit for bit. Aggregates
are reduced in trial-index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from .agents import BASELINE, AgentProfile, builtin_profiles
from .errors import ConfigError, DomainError
from .field import FieldGeometry, generate_spots, preset_field
from .phases import simulate_scan, simulate_treatment
from .routing import PLANNERS

PHASES = ("detection", "treatment", "total")
DEFAULT_SPOT_COUNTS = (20, 30, 40)


@dataclass(frozen=True)
class ScenarioConfig:
    field: FieldGeometry = dc_field(default_factory=preset_field)
    spot_counts: tuple[int, ...] = DEFAULT_SPOT_COUNTS
    trials: int = 100
    p_difficult: float = 0.5
    master_seed: int = 0
    agents: tuple[str, ...] = ("human", "immersive", "non_immersive")
    planner: str = "nn2opt"
    profiles: Mapping[str, AgentProfile] = dc_field(default_factory=builtin_profiles)
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.spot_counts:
            raise ConfigError("spot_counts must not be empty")
        if any(n < 0 for n in self.spot_counts):
            raise ConfigError("spot counts must be non-negative")
        if not 0.0 <= self.p_difficult <= 1.0:
            raise ConfigError("p_difficult must lie in [0, 1]")
        if self.planner not in PLANNERS:
            raise ConfigError(f"unknown planner {self.planner!r}; choose from {PLANNERS}")
        unknown = [a for a in self.agents if a not in self.profiles]
        if unknown:
            raise ConfigError(f"unknown agent(s) {unknown}; known: {sorted(self.profiles)}")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")


def trial_seed(master_seed: int, spot_count: int, trial_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, spot_count, trial_index])


def run_trial(config: ScenarioConfig, spot_count: int, trial_index: int) -> dict[str, tuple[float, float]]:
    """(detection, treatment) total seconds per agent for one trial."""
    spots = generate_spots(config.field, spot_count, config.p_difficult,
                           trial_seed(config.master_seed, spot_count, trial_index))
    out = {}
    for name in config.agents:
        profile = config.profiles[name]
        scan = simulate_scan(config.field, profile, spots)
        treat = simulate_treatment(config.field, profile, spots, config.planner)
        out[name] = (scan.total_time, treat.total_time)
    return out


def _run_trial_args(args):
    return run_trial(*args)


def percent_difference(agent_mean: float, baseline_mean: float) -> float:
    if not baseline_mean > 0:
        raise DomainError(f"baseline mean must be positive, got {baseline_mean}")
    return (agent_mean - baseline_mean) / baseline_mean * 100.0


@dataclass(frozen=True)
class StatRow:
    agent: str
    scenario_spots: int
    phase: str
    mean_s: float
    std_s: float
    min_s: float
    max_s: float
    pct_diff_vs_human: float  # nan when the baseline agent was not simulated


@dataclass
class ExperimentStats:
    rows: list[StatRow]
    # per (agent, spots, phase): per-trial totals in trial-index order
    samples: dict[tuple[str, int, str], np.ndarray] = dc_field(default_factory=dict, repr=False)

    def get(self, agent: str, spots: int, phase: str) -> StatRow:
        for row in self.rows:
            if (row.agent, row.scenario_spots, row.phase) == (agent, spots, phase):
                return row
        raise KeyError((agent, spots, phase))

    @property
    def agents(self) -> list[str]:
        return list(dict.fromkeys(r.agent for r in self.rows))

    @property
    def spot_counts(self) -> list[int]:
        return list(dict.fromkeys(r.scenario_spots for r in self.rows))


def aggregate(samples: dict[tuple[str, int, str], np.ndarray],
              baseline: str = BASELINE) -> list[StatRow]:
    means = {key: float(np.mean(vals)) for key, vals in samples.items()}
    rows = []
    for (agent, n, phase), vals in samples.items():
        base = means.get((baseline, n, phase))
        pct = percent_difference(means[(agent, n, phase)], base) if base else math.nan
        rows.append(StatRow(agent, n, phase, means[(agent, n, phase)], float(np.std(vals)),
                            float(np.min(vals)), float(np.max(vals)), pct))
    return rows


def run_experiment(config: ScenarioConfig) -> ExperimentStats:
    tasks = [(config, n, k) for n in config.spot_counts for k in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_trial_args, tasks, chunksize=8))
    else:
        results = [run_trial(*t) for t in tasks]
    by_task = {(n, k): res for (_, n, k), res in zip(tasks, results)}

    samples = {}
    for n in config.spot_counts:
        trials = [by_task[(n, k)] for k in range(config.trials)]
        for agent in config.agents:
            detection = np.array([t[agent][0] for t in trials])
            treatment = np.array([t[agent][1] for t in trials])
            samples[(agent, n, "detection")] = detection
            samples[(agent, n, "treatment")] = treatment
            samples[(agent, n, "total")] = detection + treatment
    return ExperimentStats(aggregate(samples), samples)


# --------------------------------------------------------------------------
# Summary tables

DISPLAY_NAMES = {
    "human": "Human",
    "immersive": "Immersive VR",
    "non_immersive": "Non-immersive VR",
}


def format_hm(seconds: float) -> str:
    """Render seconds as 'HH hrs MM mins', rounded to the nearest minute."""
    minutes = math.floor(seconds / 60.0 + 0.5)
    return f"{minutes // 60:02d} hrs {minutes % 60:02d} mins"


def format_pct(pct: float) -> str:
    if math.isnan(pct):
        return ""
    return f"{pct:+.0f}%"


@dataclass
class Table:
    title: str
    headers: list[str]
    rows: list[list[str]]


def _phase_table(stats: ExperimentStats, phase: str, title: str) -> Table:
    agents = stats.agents
    headers = ["Spots"]
    for a in agents:
        headers.append(DISPLAY_NAMES.get(a, a))
        if a != BASELINE:
            headers.append("% Difference")
    headers += [f"{a}_s" for a in agents]
    rows = []
    for n in stats.spot_counts:
        row = [str(n)]
        for a in agents:
            s = stats.get(a, n, phase)
            row.append(format_hm(s.mean_s))
            if a != BASELINE:
                row.append(format_pct(s.pct_diff_vs_human))
        row += [repr(stats.get(a, n, phase).mean_s) for a in agents]
        rows.append(row)
    return Table(title, headers, rows)


def summarize_to_tables(stats: ExperimentStats, survey: Sequence[Mapping] = ()) -> dict[str, Table]:
    """Detection, second-round and yield-survey tables.

    ``survey`` holds yield-survey comparison records as produced by
    ``cli.run_yield_comparison`` (keys zone_count, agent, mode, total_s).
    """
    tables = {
        "detection": _phase_table(stats, "detection", "Detection Time by Agent Type"),
        "second_round": _phase_table(stats, "treatment", "Second-Round Completion Times"),
    }
    headers = ["Zones", "Human", "Immersive VR", "% Difference", "human_s", "immersive_s"]
    rows = []
    if survey:
        by_mode = {rec["mode"]: rec for rec in survey}
        full, targeted = by_mode["full_coverage"], by_mode["targeted"]
        pct = percent_difference(targeted["total_s"], full["total_s"]) if full["total_s"] > 0 else math.nan
        rows.append([str(full["zone_count"]), format_hm(full["total_s"]), format_hm(targeted["total_s"]),
                     format_pct(pct), repr(full["total_s"]), repr(targeted["total_s"])])
    tables["yield_survey"] = Table("Completion Times for Surveying Low-Yield Zones", headers, rows)
    return tables
