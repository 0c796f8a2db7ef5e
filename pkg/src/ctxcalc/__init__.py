"""ctxcalc: consistency and response-time calculator for shared versus
separate context configurations of a multi-agent system.

The package layers cleanly: ``model`` holds the domain types and closed
forms, ``rng``/``kernels``/``estimators`` the reproducible Monte Carlo
machinery, ``validate`` the cross-checks, ``sweep`` the parameter sweeps,
and ``scenario`` the file format; ``cli`` ties them together.
"""

from .errors import ConfigError, CtxcalcError, MathDomainError
from .estimators import (
    SimEstimate,
    estimate_next_event_noise,
    estimate_noise_after_correct,
    estimate_rci,
    estimate_zero_arrival,
)
from .model import (
    CorrelationMatrix,
    LatencyParams,
    MemoryConfig,
    RciReport,
    SystemConfig,
    TopicRates,
    noise_after_correct,
    noise_impact,
    rci_ratio,
    rci_separate,
    rci_shared,
    response_time_ratio,
    retention_probability,
    simplified_rci_ratio,
    simplified_rci_separate,
    simplified_rci_shared,
    t_separate,
    t_shared,
    total_rate,
)
from .rng import RandomStream, RngSpec
from .scenario import Scenario, SimulationSettings, dump_scenario, load_scenario, parse_scenario
from .sweep import ShapeCheck, SweepSpec, SweepTable, check_shape, crossover_scan, run_sweep
from .validate import ComponentCheck, ValidationReport, validate

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CtxcalcError",
    "ConfigError",
    "MathDomainError",
    "TopicRates",
    "CorrelationMatrix",
    "MemoryConfig",
    "LatencyParams",
    "SystemConfig",
    "RciReport",
    "total_rate",
    "retention_probability",
    "noise_after_correct",
    "noise_impact",
    "rci_shared",
    "rci_separate",
    "rci_ratio",
    "t_shared",
    "t_separate",
    "response_time_ratio",
    "simplified_rci_shared",
    "simplified_rci_separate",
    "simplified_rci_ratio",
    "RngSpec",
    "RandomStream",
    "SimEstimate",
    "estimate_zero_arrival",
    "estimate_next_event_noise",
    "estimate_noise_after_correct",
    "estimate_rci",
    "ComponentCheck",
    "ValidationReport",
    "validate",
    "SweepSpec",
    "SweepTable",
    "ShapeCheck",
    "run_sweep",
    "check_shape",
    "crossover_scan",
    "Scenario",
    "SimulationSettings",
    "parse_scenario",
    "load_scenario",
    "dump_scenario",
]
