"""Scenario description and its INI config file.

File layout (every key optional; missing keys take the defaults below)::

    [scenario]
    m_elements = 10
    k_eves = 8
    power_max = 3.0
    master_seed = 0
    trials = 10000

    [topology]
    uav = 0, 0, 80
    irs = 10, 10, 15
    user = 10, 0, 0
    eve_x_min = -50
    eve_x_max = 50

    [fading]
    pathloss_exponent = 3
    noise_variance = 0.01
    reference_gain = 1

    [optimizer]
    max_outer_iters = 20
    max_inner_iters = 500
    step_size = 0.5
    restarts = 8
    tol = 1e-6
    optimize_amplitudes = false
    smoothing_temperature = 0
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import FadingParams, Position3D, Topology
from .optimizer import OptimizerConfig


class ConfigError(ValueError):
    """Malformed or invalid scenario configuration; names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class RoadScene:
    """Fixed node placement; eavesdroppers are scattered on the road each trial.

    Eves sit at height 0 on ``y = eve_y`` with ``x`` uniform on
    ``[eve_x_min, eve_x_max]``.
    """

    uav: Position3D = Position3D(0.0, 0.0, 80.0)
    irs: Position3D = Position3D(10.0, 10.0, 15.0)
    user: Position3D = Position3D(10.0, 0.0, 0.0)
    eve_x_min: float = -50.0
    eve_x_max: float = 50.0
    eve_y: float = 0.0

    def __post_init__(self):
        if not self.eve_x_max >= self.eve_x_min:
            raise ValueError("eve_x_max must be >= eve_x_min")
        if self.uav.z <= 0:
            raise ValueError("UAV must fly above the road plane (z > 0)")

    def sample(self, k_eves: int, rng: np.random.Generator) -> Topology:
        xs = rng.uniform(self.eve_x_min, self.eve_x_max, size=k_eves)
        eves = tuple(Position3D(float(x), self.eve_y, 0.0) for x in xs)
        return Topology(self.uav, self.irs, self.user, eves)


@dataclass(frozen=True)
class ScenarioConfig:
    topology: RoadScene = field(default_factory=RoadScene)
    fading: FadingParams = field(default_factory=FadingParams)
    m_elements: int = 10
    k_eves: int = 8
    power_max: float = 3.0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    master_seed: int = 0
    trials: int = 10000

    def __post_init__(self):
        if self.m_elements < 0:
            raise ConfigError("m_elements", "must be >= 0")
        if self.k_eves < 1:
            raise ConfigError("k_eves", "must be >= 1")
        if not self.power_max > 0:
            raise ConfigError("power_max", "must be > 0")
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed", "must be a 64-bit unsigned integer")
        # the scenario's power cap is the one the optimizer enforces
        if self.optimizer.power_max != self.power_max:
            object.__setattr__(
                self, "optimizer", dataclasses.replace(self.optimizer, power_max=self.power_max)
            )

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def _position(text: str) -> Position3D:
    parts = [p for p in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise ValueError(f"expected three coordinates, got {text!r}")
    return Position3D.of(float(p) for p in parts)


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# key -> (section, parser)
FIELDS = {
    "m_elements": ("scenario", int),
    "k_eves": ("scenario", int),
    "power_max": ("scenario", float),
    "master_seed": ("scenario", int),
    "trials": ("scenario", int),
    "uav": ("topology", _position),
    "irs": ("topology", _position),
    "user": ("topology", _position),
    "eve_x_min": ("topology", float),
    "eve_x_max": ("topology", float),
    "eve_y": ("topology", float),
    "pathloss_exponent": ("fading", float),
    "noise_variance": ("fading", float),
    "reference_gain": ("fading", float),
    "max_outer_iters": ("optimizer", int),
    "max_inner_iters": ("optimizer", int),
    "step_size": ("optimizer", float),
    "restarts": ("optimizer", int),
    "tol": ("optimizer", float),
    "optimize_amplitudes": ("optimizer", _bool),
    "smoothing_temperature": ("optimizer", float),
}


def build_config(values: dict, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Apply flat ``{key: raw_string_or_value}`` settings on top of ``base``."""
    base = ScenarioConfig() if base is None else base
    parsed = {}
    for key, raw in values.items():
        if key not in FIELDS:
            raise ConfigError(key, "unknown configuration key")
        _, parse = FIELDS[key]
        try:
            if isinstance(raw, str):
                parsed[key] = parse(raw)
            elif parse is _position:
                parsed[key] = raw if isinstance(raw, Position3D) else Position3D.of(raw)
            else:
                parsed[key] = bool(raw) if parse is _bool else parse(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, str(exc)) from None

    def section(name):
        return {k: v for k, v in parsed.items() if FIELDS[k][0] == name}

    try:
        topology = dataclasses.replace(base.topology, **section("topology"))
    except ValueError as exc:
        raise ConfigError(_first_key(section("topology"), "topology"), str(exc)) from None
    try:
        fading = dataclasses.replace(base.fading, **section("fading"))
    except ValueError as exc:
        raise ConfigError(_first_key(section("fading"), "fading"), str(exc)) from None
    scenario = section("scenario")
    power_max = scenario.get("power_max", base.power_max)
    try:
        optimizer = dataclasses.replace(base.optimizer, power_max=power_max, **section("optimizer"))
    except ValueError as exc:
        raise ConfigError(_first_key(section("optimizer"), "optimizer"), str(exc)) from None
    return dataclasses.replace(base, topology=topology, fading=fading, optimizer=optimizer, **scenario)


def _first_key(section: dict, fallback: str) -> str:
    return next(iter(section), fallback)


def load_config(path: str | Path, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Read an INI scenario file; unknown sections or keys are errors."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(str(path), f"unparseable config: {exc}") from None
    values = {}
    for section in parser.sections():
        if section not in {s for s, _ in FIELDS.values()}:
            raise ConfigError(section, "unknown config section")
        for key, raw in parser.items(section):
            if key not in FIELDS or FIELDS[key][0] != section:
                raise ConfigError(f"{section}.{key}", "unknown configuration key")
            values[key] = raw
    return build_config(values, base)
