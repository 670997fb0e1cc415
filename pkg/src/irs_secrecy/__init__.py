"""Secrecy-capacity optimization for IRS-assisted UAV-to-vehicle links."""
from .channel import (
    ChannelRealization,
    DegenerateGeometryError,
    FadingParams,
    Position3D,
    Topology,
    draw_realization,
    path_loss,
)
from .config import ConfigError, RoadScene, ScenarioConfig, load_config
from .irs import PhaseProfile, cascade_coefficients, effective_channel
from .montecarlo import SweepResult, SweepSpec, run_sweep, run_trial
from .optimizer import (
    OptimizationTrace,
    OptimizerConfig,
    alternate_optimize,
    optimal_power,
    optimize_phases,
    oracle_grid_search,
    phase_gradient,
)
from .secrecy import SecrecyOutcome, rate, secrecy_capacity

__all__ = [
    "ChannelRealization",
    "ConfigError",
    "DegenerateGeometryError",
    "FadingParams",
    "OptimizationTrace",
    "OptimizerConfig",
    "PhaseProfile",
    "Position3D",
    "RoadScene",
    "ScenarioConfig",
    "SecrecyOutcome",
    "SweepResult",
    "SweepSpec",
    "Topology",
    "alternate_optimize",
    "cascade_coefficients",
    "draw_realization",
    "effective_channel",
    "load_config",
    "optimal_power",
    "optimize_phases",
    "oracle_grid_search",
    "path_loss",
    "phase_gradient",
    "rate",
    "run_sweep",
    "run_trial",
    "secrecy_capacity",
]

__version__ = "0.1.0"
