"""Scenario files: parsing, validation and canonical serialisation.

A scenario is a YAML mapping with an explicit ``schema: 1`` version tag
holding one system configuration, an optional ``sweep`` block and an
optional ``simulation`` block.  Parsing is strict: unknown keys, wrong
types and out-of-domain values are ``ConfigError`` naming the offending
key and its line.

``dump_scenario`` writes a canonical form (fixed key order, 12 significant
digit floats) whose parse is value-identical to the original; dumping the
parse of a dumped scenario reproduces the bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import yaml

from .errors import ConfigError
from .model import (
    CorrelationMatrix,
    LatencyParams,
    MemoryConfig,
    SystemConfig,
    TopicRates,
)
from .rng import RngSpec
from .sweep import SweepSpec

__all__ = [
    "SCHEMA_VERSION",
    "SimulationSettings",
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "dump_scenario",
]

SCHEMA_VERSION = 1

_TOP_KEYS = (
    "schema",
    "topics",
    "correlation",
    "shared_window",
    "separate_windows",
    "alpha",
    "beta",
    "n_agents",
    "sweep",
    "simulation",
)


@dataclass(frozen=True)
class SimulationSettings:
    """Monte Carlo budget and seeding carried by a scenario."""

    trials: int = 1_000_000
    seed: int = 42
    sigma_threshold: float = 4.0
    partitions: int = 1

    @property
    def rng(self) -> RngSpec:
        return RngSpec(self.seed, 0)


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario file."""

    schema: int
    config: SystemConfig
    sweep: Optional[SweepSpec]
    grid_range: Optional[tuple[float, float, float]]
    simulation: SimulationSettings


class _LineLoader(yaml.SafeLoader):
    """SafeLoader that records the source line of every mapping key."""

    def construct_mapping(self, node, deep=False):
        mapping = super().construct_mapping(node, deep=deep)
        lines = {}
        for key_node, _ in node.value:
            if hasattr(key_node, "value") and hasattr(key_node, "start_mark"):
                lines[key_node.value] = key_node.start_mark.line + 1
        mapping["__lines__"] = lines
        return mapping


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class _Section:
    """One mapping of the document, with per-key line numbers for errors."""

    def __init__(self, data: dict, path: str):
        self.data = {k: v for k, v in data.items() if k != "__lines__"}
        self._lines = data.get("__lines__", {})
        self.path = path

    def fail(self, key: Optional[str], message: str):
        name = f"{self.path}.{key}" if self.path and key else (key or self.path)
        line = self._lines.get(key)
        where = f"{name} (line {line})" if line else name
        raise ConfigError(f"{where}: {message}")

    def reject_unknown(self, known) -> None:
        for key in self.data:
            if key not in known:
                self.fail(key, "unknown key")

    def require(self, key: str):
        if key not in self.data:
            raise ConfigError(f"{self.path or 'scenario'}: missing required key {key!r}")
        return self.data[key]

    def number(
        self,
        key: str,
        *,
        default=None,
        minimum=None,
        maximum=None,
        positive=False,
        integer=False,
    ):
        if key not in self.data:
            if default is not None:
                return default
            self.require(key)
        value = self.data[key]
        if not _is_number(value):
            self.fail(key, f"expected a number, got {value!r}")
        if integer:
            if isinstance(value, float) and value != int(value):
                self.fail(key, f"expected an integer, got {value!r}")
            value = int(value)
        if positive and not value > 0:
            self.fail(key, f"must be > 0, got {value}")
        if minimum is not None and value < minimum:
            self.fail(key, f"must be >= {minimum}, got {value}")
        if maximum is not None and value > maximum:
            self.fail(key, f"must be <= {maximum}, got {value}")
        return value if integer else float(value)

    def subsection(self, key: str) -> "_Section":
        value = self.data[key]
        if not isinstance(value, dict):
            self.fail(key, f"expected a mapping, got {type(value).__name__}")
        return _Section(value, f"{self.path}.{key}" if self.path else key)

    def list_of(self, key: str, required: bool = True) -> Optional[list]:
        if key not in self.data:
            if required:
                self.require(key)
            return None
        value = self.data[key]
        if not isinstance(value, list):
            self.fail(key, f"expected a list, got {type(value).__name__}")
        return value


def _parse_topics(top: _Section) -> tuple[TopicRates, ...]:
    items = top.list_of("topics")
    if not items:
        top.fail("topics", "at least one topic is required")
    topics = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            top.fail("topics", f"topics[{i}] must be a mapping")
        sec = _Section(item, f"topics[{i}]")
        sec.reject_unknown(("lambda_correct", "lambda_noise"))
        correct = sec.number("lambda_correct", minimum=0.0)
        noise = sec.number("lambda_noise", minimum=0.0)
        try:
            topics.append(TopicRates(correct, noise))
        except ConfigError as err:
            sec.fail("lambda_correct", str(err))
    return tuple(topics)


def _parse_correlation(top: _Section) -> CorrelationMatrix:
    rows = top.list_of("correlation")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(_is_number(v) for v in row):
            top.fail("correlation", f"row {i} must be a list of numbers")
    try:
        return CorrelationMatrix(tuple(tuple(float(v) for v in row) for row in rows))
    except ConfigError as err:
        top.fail("correlation", str(err))


def _parse_memory(top: _Section, n_topics: int) -> MemoryConfig:
    shared = top.number("shared_window", minimum=0.0)
    windows = top.list_of("separate_windows", required=False)
    if windows is None:
        return MemoryConfig(shared)
    for i, w in enumerate(windows):
        if not _is_number(w) or w < 0.0:
            top.fail("separate_windows", f"entry {i} must be a number >= 0, got {w!r}")
    if len(windows) != n_topics:
        top.fail(
            "separate_windows", f"{len(windows)} windows for {n_topics} topics"
        )
    return MemoryConfig(shared, tuple(float(w) for w in windows))


def _grid_from_range(sec: _Section) -> tuple[tuple[float, ...], tuple[float, float, float]]:
    sec.reject_unknown(("start", "stop", "step"))
    start = sec.number("start")
    stop = sec.number("stop")
    step = sec.number("step", positive=True)
    if stop < start:
        sec.fail("stop", f"must be >= start ({start}), got {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = []
    for k in range(count):
        v = start + k * step
        if abs(v - stop) <= step * 1e-9:
            v = stop
        values.append(v)
    return tuple(values), (start, stop, step)


def _parse_sweep(
    top: _Section, config: SystemConfig
) -> tuple[Optional[SweepSpec], Optional[tuple[float, float, float]]]:
    if "sweep" not in top.data:
        return None, None
    sec = top.subsection("sweep")
    sec.reject_unknown(("parameter", "grid", "outputs"))
    parameter = sec.require("parameter")
    if not isinstance(parameter, str):
        sec.fail("parameter", f"expected a string, got {parameter!r}")
    grid_range = None
    raw_grid = sec.require("grid")
    if isinstance(raw_grid, dict):
        grid, grid_range = _grid_from_range(sec.subsection("grid"))
    elif isinstance(raw_grid, list):
        if not raw_grid:
            sec.fail("grid", "empty grid")
        for i, v in enumerate(raw_grid):
            if not _is_number(v):
                sec.fail("grid", f"entry {i} must be a number, got {v!r}")
        grid = tuple(float(v) for v in raw_grid)
    else:
        sec.fail("grid", "expected a list or a start/stop/step mapping")
    outputs = sec.list_of("outputs")
    if not outputs:
        sec.fail("outputs", "at least one output column is required")
    for i, name in enumerate(outputs):
        if not isinstance(name, str):
            sec.fail("outputs", f"entry {i} must be a string, got {name!r}")
    try:
        spec = SweepSpec(config, parameter, grid, tuple(outputs))
    except ConfigError as err:
        sec.fail(None, str(err))
    return spec, grid_range


def _parse_simulation(top: _Section) -> SimulationSettings:
    if "simulation" not in top.data:
        return SimulationSettings()
    sec = top.subsection("simulation")
    sec.reject_unknown(("trials", "seed", "sigma_threshold", "partitions"))
    defaults = SimulationSettings()
    trials = sec.number("trials", default=defaults.trials, integer=True, minimum=1)
    seed = sec.number(
        "seed", default=defaults.seed, integer=True, minimum=0, maximum=(1 << 64) - 1
    )
    sigma = sec.number("sigma_threshold", default=defaults.sigma_threshold, positive=True)
    partitions = sec.number(
        "partitions", default=defaults.partitions, integer=True, minimum=1
    )
    return SimulationSettings(trials, seed, float(sigma), partitions)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parse and validate scenario YAML."""
    try:
        raw = yaml.load(text, Loader=_LineLoader)
    except yaml.YAMLError as err:
        raise ConfigError(f"{source}: invalid YAML: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    top = _Section(raw, "")
    top.reject_unknown(_TOP_KEYS)
    schema = top.number("schema", integer=True)
    if schema != SCHEMA_VERSION:
        top.fail("schema", f"unsupported schema version {schema}, expected {SCHEMA_VERSION}")

    topics = _parse_topics(top)
    correlations = _parse_correlation(top)
    memory = _parse_memory(top, len(topics))
    alpha = top.number("alpha", positive=True)
    beta = top.number("beta", minimum=0.0)
    n_agents = top.number("n_agents", integer=True, minimum=0)
    latency = LatencyParams(alpha, beta, n_agents)
    try:
        config = SystemConfig(topics, correlations, memory, latency)
    except ConfigError as err:
        raise ConfigError(f"{source}: {err}") from err
    sweep, grid_range = _parse_sweep(top, config)
    simulation = _parse_simulation(top)
    return Scenario(schema, config, sweep, grid_range, simulation)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and parse a scenario file; unreadable files are ConfigError."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read scenario {path}: {err}") from err
    return parse_scenario(text, source=str(path))


def _float_scalar(value: float) -> str:
    text = f"{value:.12g}"
    if not any(c in text for c in ".eEn"):
        text += ".0"
    return text


class _Dumper(yaml.SafeDumper):
    pass


def _represent_float(dumper, value):
    return dumper.represent_scalar("tag:yaml.org,2002:float", _float_scalar(value))


_Dumper.add_representer(float, _represent_float)


def dump_scenario(scenario: Scenario) -> str:
    """Serialise to canonical YAML: fixed key order, 12 significant digits."""
    config = scenario.config
    data: dict = {"schema": scenario.schema}
    data["topics"] = [
        {"lambda_correct": t.lambda_correct, "lambda_noise": t.lambda_noise}
        for t in config.topics
    ]
    data["correlation"] = [list(row) for row in config.correlations.entries]
    data["shared_window"] = config.memory.shared_window
    data["separate_windows"] = list(config.memory.separate_windows)
    data["alpha"] = config.latency.alpha
    data["beta"] = config.latency.beta
    data["n_agents"] = config.latency.n_agents
    if scenario.sweep is not None:
        if scenario.grid_range is not None:
            start, stop, step = scenario.grid_range
            grid: Union[dict, list] = {"start": start, "stop": stop, "step": step}
        else:
            grid = list(scenario.sweep.grid)
        data["sweep"] = {
            "parameter": scenario.sweep.parameter,
            "grid": grid,
            "outputs": list(scenario.sweep.outputs),
        }
    sim = scenario.simulation
    data["simulation"] = {
        "trials": sim.trials,
        "seed": sim.seed,
        "sigma_threshold": sim.sigma_threshold,
        "partitions": sim.partitions,
    }
    return yaml.dump(
        data,
        Dumper=_Dumper,
        sort_keys=False,
        default_flow_style=None,
        width=10_000,
    )
