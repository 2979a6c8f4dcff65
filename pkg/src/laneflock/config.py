"""Run configuration: defaults, YAML round-trip, validation.

A single YAML file drives an experiment.  Every omitted key falls back to
the shipped default; the fully resolved configuration is written next to
the outputs for provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import yaml

from .geometry import Vec2, FovEllipse
from .flocking import RuleWeights
from .lifecycle import LifecycleConfig
from .dubins import ReachabilityPolicy
from .sensing import NoiseModel
from .metrics import DEFAULT_PARALLEL_GATE
from .scenario import ScenarioConfig, build_default_scenario


class ConfigError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class ScenarioParams:
    duration: float = 60.0
    lane_width: float = 3.5
    v_ego: float = 25.0
    v1: float = 33.0
    v2: float = 25.0
    v3: float = 23.0
    d12: float = 3.2
    d23: float = 3.7
    id1_offset: float = -60.0
    id2_offset: float = 30.0
    id3_offset: float = 20.0
    road_straight_length: float = 500.0
    road_arc_radius: float = 1000.0
    road_arc_length: float = 400.0

    def build(self) -> ScenarioConfig:
        return build_default_scenario(
            duration=self.duration, lane_width=self.lane_width,
            v_ego=self.v_ego, v1=self.v1, v2=self.v2, v3=self.v3,
            d12=self.d12, d23=self.d23,
            id1_offset=self.id1_offset, id2_offset=self.id2_offset,
            id3_offset=self.id3_offset,
            straight_length=self.road_straight_length,
            arc_radius=self.road_arc_radius,
            arc_length=self.road_arc_length)


@dataclass(frozen=True, slots=True)
class RunConfig:
    scenario: ScenarioParams = field(default_factory=ScenarioParams)
    weights: RuleWeights = field(default_factory=RuleWeights)
    fov: FovEllipse = field(default_factory=lambda: FovEllipse(0.1, 0.05))
    lifecycle: LifecycleConfig = field(default_factory=LifecycleConfig)
    reachability: ReachabilityPolicy = field(default_factory=ReachabilityPolicy)
    noise: NoiseModel = field(default_factory=NoiseModel)
    nb: int = 7
    runs: int = 20
    master_seed: int = 42
    parallel_gate: float = DEFAULT_PARALLEL_GATE
    out_dir: str = "out"

    def with_nb(self, nb: int) -> "RunConfig":
        return replace(self, nb=nb)

    def lifecycle_for_nb(self) -> LifecycleConfig:
        return replace(self.lifecycle, target_flock_size=self.nb)


_SECTIONS = {
    "scenario": (ScenarioParams, None),
    "weights": (RuleWeights, None),
    "fov": (FovEllipse, None),
    "lifecycle": (LifecycleConfig, None),
    "reachability": (ReachabilityPolicy, None),
    "noise": (NoiseModel, None),
}

_VEC_FIELDS = {"w_sep", "w_coh", "w_cohl", "w_ali", "w_alil"}

_SCALARS = ("nb", "runs", "master_seed", "parallel_gate", "out_dir")


def _section_to_dict(obj) -> dict:
    out = {}
    for name in obj.__dataclass_fields__:
        val = getattr(obj, name)
        if isinstance(val, Vec2):
            val = [val.x, val.y]
        out[name] = val
    return out


def to_dict(config: RunConfig) -> dict:
    out = {name: _section_to_dict(getattr(config, name)) for name in _SECTIONS}
    for name in _SCALARS:
        out[name] = getattr(config, name)
    return out


def _build_section(cls, data: dict, section: str):
    # default instances come from RunConfig so sections whose constructors
    # have required arguments (e.g. the FOV ellipse) rebuild correctly
    defaults = getattr(RunConfig(), section)
    kwargs = {}
    for key, val in data.items():
        if key not in cls.__dataclass_fields__:
            raise ConfigError(f"unknown key '{section}.{key}'")
        if key in _VEC_FIELDS:
            if not (isinstance(val, (list, tuple)) and len(val) == 2):
                raise ConfigError(f"'{section}.{key}' must be a 2-element list")
            val = Vec2(float(val[0]), float(val[1]))
        kwargs[key] = val
    try:
        return replace(defaults, **kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid section '{section}': {exc}") from exc


def from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    kwargs = {}
    for key, val in data.items():
        if key in _SECTIONS:
            cls, _ = _SECTIONS[key]
            kwargs[key] = _build_section(cls, val or {}, key)
        elif key in _SCALARS:
            kwargs[key] = val
        else:
            raise ConfigError(f"unknown key '{key}'")
    try:
        config = RunConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    validate(config)
    return config


def validate(config: RunConfig) -> None:
    if config.nb < 1:
        raise ConfigError("'nb' must be >= 1")
    if config.runs < 1:
        raise ConfigError("'runs' must be >= 1")
    if not config.parallel_gate > 0.0:
        raise ConfigError("'parallel_gate' must be > 0")
    if not config.scenario.duration > 0.0:
        raise ConfigError("'scenario.duration' must be > 0")
    try:
        config.scenario.build()
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc


def load(path) -> RunConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    return from_dict(data or {})


def dump(config: RunConfig, path) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(to_dict(config), fh, sort_keys=True,
                       default_flow_style=False)
