"""Run configuration from a YAML document plus command-line overrides.

Recognised keys (all optional)::

    field:      {preset, num_rows, row_length_m, row_spacing_m}
    agents:     {<name>: {time_easy_s, time_difficult_s, speed_mps,
                          row_transition_s, strategy, has_memory}}
    experiment: {trials, spot_counts, p_difficult, master_seed, agents, workers}
    planner:    {kind}                      # nn | nn2opt | exact
    yield:      {cell_size_m, threshold, grid_origin_m, connectivity,
                 full_agent, targeted_agent}
    output:     {dir}

A field given by rows and length without a spacing gets the spacing that
keeps the ten-acre total.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path
from typing import Any

import yaml

from .agents import AgentProfile, ScanStrategy, builtin_profiles
from .errors import ConfigError, VinesimError
from .experiment import DEFAULT_SPOT_COUNTS, ScenarioConfig
from .field import DEFAULT_PRESET, PRESETS, FieldGeometry, build_field, derived_spacing
from .routing import PLANNERS

_SECTIONS = {
    "field": {"preset", "num_rows", "row_length_m", "row_spacing_m"},
    "agents": None,
    "experiment": {"trials", "spot_counts", "p_difficult", "master_seed", "agents", "workers"},
    "planner": {"kind"},
    "yield": {"cell_size_m", "threshold", "grid_origin_m", "connectivity", "full_agent",
              "targeted_agent", "class_values"},
    "output": {"dir"},
}
_AGENT_KEYS = {
    "time_easy_s": "time_easy",
    "time_difficult_s": "time_difficult",
    "speed_mps": "speed",
    "row_transition_s": "row_transition_time",
    "strategy": "scan_strategy",
    "has_memory": "has_memory",
}


@dataclass(frozen=True)
class YieldSettings:
    cell_size_m: float | None = 26.0
    threshold: float = 0.0
    grid_origin_m: tuple[float, float] = (0.0, 0.0)
    connectivity: int = 4
    full_agent: str = "human"
    targeted_agent: str = "immersive"
    # optional (class label, yield value) pairs applied before thresholding
    class_values: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class RunConfig:
    field: FieldGeometry
    profiles: dict[str, AgentProfile]
    trials: int = 100
    spot_counts: tuple[int, ...] = DEFAULT_SPOT_COUNTS
    p_difficult: float = 0.5
    master_seed: int = 0
    agents: tuple[str, ...] = ("human", "immersive", "non_immersive")
    workers: int = 1
    planner: str = "nn2opt"
    yield_: YieldSettings = dc_field(default_factory=YieldSettings)
    out_dir: Path = Path("out")
    verbosity: int = 0

    def scenario(self) -> ScenarioConfig:
        return ScenarioConfig(field=self.field, spot_counts=self.spot_counts, trials=self.trials,
                              p_difficult=self.p_difficult, master_seed=self.master_seed,
                              agents=self.agents, planner=self.planner, profiles=self.profiles,
                              workers=self.workers)

    def profile(self, name: str) -> AgentProfile:
        try:
            return self.profiles[name]
        except KeyError:
            raise ConfigError(f"unknown agent {name!r}; known: {sorted(self.profiles)}") from None


def _check_keys(section: str, values: Any, allowed: set[str]):
    if not isinstance(values, dict):
        raise ConfigError(f"section {section!r} must be a mapping")
    extra = set(values) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in {section!r}: {sorted(extra)}")


def _field(section: dict, preset: str | None) -> FieldGeometry:
    name = preset or section.get("preset", DEFAULT_PRESET)
    if name not in PRESETS:
        raise ConfigError(f"unknown field preset {name!r}; choose from {sorted(PRESETS)}")
    rows, length, spacing = PRESETS[name]
    if preset is None:
        explicit = "num_rows" in section or "row_length_m" in section
        rows = section.get("num_rows", rows)
        length = section.get("row_length_m", length)
        spacing = section.get("row_spacing_m", spacing)
    try:
        if preset is None and "row_spacing_m" not in section and explicit:
            spacing = derived_spacing(rows, length)
        return build_field(int(rows), float(length), float(spacing))
    except (VinesimError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _profiles(section: dict) -> dict[str, AgentProfile]:
    profiles = builtin_profiles()
    for name, values in section.items():
        _check_keys(f"agents.{name}", values, set(_AGENT_KEYS))
        kwargs = {_AGENT_KEYS[k]: v for k, v in values.items()}
        if "scan_strategy" in kwargs:
            try:
                kwargs["scan_strategy"] = ScanStrategy(kwargs["scan_strategy"])
            except ValueError:
                raise ConfigError(f"agents.{name}.strategy must be one of "
                                  f"{[s.value for s in ScanStrategy]}") from None
        try:
            if name in profiles:
                profiles[name] = replace(profiles[name], **kwargs)
            else:
                missing = set(_AGENT_KEYS.values()) - set(kwargs)
                if missing:
                    raise ConfigError(f"new agent {name!r} needs all of {sorted(_AGENT_KEYS)}")
                profiles[name] = AgentProfile(name=name, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"agents.{name}: {exc}") from None
    return profiles


def load_config(path=None, *, preset: str | None = None, seed: int | None = None,
                out: str | Path | None = None, **overrides) -> RunConfig:
    """Build a RunConfig. Command-line values (``preset``, ``seed``, ``out`` and
    any non-None ``overrides``) take precedence over the file."""
    doc = {}
    if path is not None:
        try:
            doc = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a mapping")
    for section, values in doc.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section {section!r}")
        if _SECTIONS[section] is not None:
            _check_keys(section, values, _SECTIONS[section])
        elif not isinstance(values, dict):
            raise ConfigError(f"section {section!r} must be a mapping")

    exp = doc.get("experiment", {})
    ycfg = dict(doc.get("yield", {}))
    if "grid_origin_m" in ycfg:
        ycfg["grid_origin_m"] = tuple(float(v) for v in ycfg["grid_origin_m"])
    if "class_values" in ycfg:
        table = ycfg["class_values"]
        if not isinstance(table, dict):
            raise ConfigError("yield.class_values must map class labels to numeric values")
        try:
            ycfg["class_values"] = tuple(sorted((float(k), float(v)) for k, v in table.items()))
        except (TypeError, ValueError):
            raise ConfigError("yield.class_values keys and values must be numeric") from None
    kwargs = dict(
        field=_field(doc.get("field", {}), preset),
        profiles=_profiles(doc.get("agents", {})),
        trials=int(exp.get("trials", 100)),
        spot_counts=tuple(int(n) for n in exp.get("spot_counts", DEFAULT_SPOT_COUNTS)),
        p_difficult=float(exp.get("p_difficult", 0.5)),
        master_seed=int(exp.get("master_seed", 0)),
        agents=tuple(exp.get("agents", ("human", "immersive", "non_immersive"))),
        workers=int(exp.get("workers", 1)),
        planner=doc.get("planner", {}).get("kind", "nn2opt"),
        yield_=YieldSettings(**ycfg),
        out_dir=Path(doc.get("output", {}).get("dir", "out")),
    )
    if seed is not None:
        kwargs["master_seed"] = seed
    if out is not None:
        kwargs["out_dir"] = Path(out)
    for key, value in overrides.items():
        if value is None:
            continue
        if key.startswith("yield_"):
            kwargs["yield_"] = replace(kwargs["yield_"], **{key[len("yield_"):]: value})
        else:
            kwargs[key] = value
    cfg = RunConfig(**kwargs)
    if cfg.planner not in PLANNERS:
        raise ConfigError(f"planner.kind must be one of {PLANNERS}, got {cfg.planner!r}")
    for name in cfg.agents:
        cfg.profile(name)
    try:
        cfg.scenario()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg
