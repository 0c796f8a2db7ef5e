"""Parameter sweeps over the closed-form model.

A sweep holds one base configuration, one parameter to vary over a strictly
increasing grid, and an ordered list of output columns.  Each grid point is
evaluated independently on a configuration derived from the base, so rows
never leak state into each other.

Sweepable parameters:

* ``memory_window``: sets the shared window and every separate window.
* ``noise_ratio``: repartitions each topic's total rate into noise and
  correct parts, holding the total fixed.
* ``n_agents``: latency head count; grid values must be integer-valued.
* ``rho``: sets every off-diagonal correlation entry.

The ``simplified_*`` columns are only defined for the symmetric two-topic
shorthand, so requesting them requires a base configuration with exactly
two topics of equal total rate and equal noise ratio and a symmetric
correlation matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from . import model
from .errors import ConfigError, MathDomainError
from .model import CorrelationMatrix, MemoryConfig, SystemConfig, TopicRates

__all__ = [
    "SWEEP_PARAMETERS",
    "OUTPUT_COLUMNS",
    "SweepSpec",
    "SweepTable",
    "ShapeCheck",
    "run_sweep",
    "check_shape",
    "crossover_scan",
]

SWEEP_PARAMETERS = ("memory_window", "noise_ratio", "n_agents", "rho")

OUTPUT_COLUMNS = (
    "rci_shared",
    "rci_separate",
    "rci_ratio",
    "simplified_shared",
    "simplified_separate",
    "t_shared",
    "t_separate",
    "time_ratio",
)

_SIMPLIFIED = ("simplified_shared", "simplified_separate")

# Grid comparisons treat differences at or below this as ties.
SHAPE_TOLERANCE = 1e-12


def _require_symmetric_pair(config: SystemConfig) -> None:
    ok = (
        config.n_topics == 2
        and config.correlations.is_symmetric()
        and math.isclose(
            config.topics[0].total, config.topics[1].total, rel_tol=1e-12, abs_tol=0.0
        )
        and math.isclose(
            config.topics[0].noise_ratio,
            config.topics[1].noise_ratio,
            rel_tol=1e-12,
            abs_tol=0.0,
        )
    )
    if not ok:
        raise ConfigError(
            "simplified outputs need a symmetric two-topic base: two topics "
            "with equal total rate and equal noise ratio and a symmetric "
            "correlation matrix"
        )


@dataclass(frozen=True)
class SweepSpec:
    """One parameter sweep: base config, parameter, grid, output columns."""

    base_config: SystemConfig
    parameter: str
    grid: tuple[float, ...]
    outputs: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"unknown sweep parameter {self.parameter!r}, expected one of "
                f"{', '.join(SWEEP_PARAMETERS)}"
            )
        grid = tuple(float(v) for v in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise ConfigError("sweep grid is empty")
        for a, b in zip(grid, grid[1:]):
            if not b > a:
                raise ConfigError(
                    f"sweep grid must be strictly increasing, got {a} then {b}"
                )
        self._check_grid_domain(grid)
        outputs = tuple(self.outputs)
        object.__setattr__(self, "outputs", outputs)
        if not outputs:
            raise ConfigError("sweep outputs are empty")
        seen = set()
        for name in outputs:
            if name not in OUTPUT_COLUMNS:
                raise ConfigError(
                    f"unknown sweep output {name!r}, expected one of "
                    f"{', '.join(OUTPUT_COLUMNS)}"
                )
            if name in seen:
                raise ConfigError(f"duplicate sweep output {name!r}")
            seen.add(name)
        if any(name in _SIMPLIFIED for name in outputs):
            _require_symmetric_pair(self.base_config)

    def _check_grid_domain(self, grid: tuple[float, ...]) -> None:
        if self.parameter == "memory_window":
            bad = next((v for v in grid if v < 0.0), None)
            if bad is not None:
                raise ConfigError(f"memory_window grid value {bad} is negative")
        elif self.parameter in ("noise_ratio", "rho"):
            bad = next((v for v in grid if not 0.0 <= v <= 1.0), None)
            if bad is not None:
                raise ConfigError(
                    f"{self.parameter} grid value {bad} is outside [0, 1]"
                )
        elif self.parameter == "n_agents":
            bad = next((v for v in grid if v < 0.0 or v != int(v)), None)
            if bad is not None:
                raise ConfigError(
                    f"n_agents grid value {bad} is not a nonnegative integer"
                )


@dataclass(frozen=True)
class SweepTable:
    """Evaluated sweep: one row per grid point, one value per output column.

    ``flags`` mirrors ``rows``: for the ``rci_shared`` and ``rci_separate``
    columns the flag is the report's ``in_probability_domain``; other
    columns are always flagged valid.
    """

    parameter: str
    grid: tuple[float, ...]
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    flags: tuple[tuple[bool, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.grid)

    def _column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise ConfigError(
                f"column {name!r} not in sweep table ({', '.join(self.columns)})"
            ) from None

    def column(self, name: str) -> tuple[float, ...]:
        k = self._column_index(name)
        return tuple(row[k] for row in self.rows)

    def flag_column(self, name: str) -> tuple[bool, ...]:
        k = self._column_index(name)
        return tuple(row[k] for row in self.flags)


def _apply_parameter(config: SystemConfig, parameter: str, value: float) -> SystemConfig:
    if parameter == "memory_window":
        memory = MemoryConfig(value, (value,) * config.n_topics)
        return replace(config, memory=memory)
    if parameter == "noise_ratio":
        topics = tuple(
            TopicRates(t.total * (1.0 - value), t.total * value) for t in config.topics
        )
        return replace(config, topics=topics)
    if parameter == "n_agents":
        latency = replace(config.latency, n_agents=int(round(value)))
        return replace(config, latency=latency)
    if parameter == "rho":
        corr = CorrelationMatrix.uniform(config.n_topics, value)
        return replace(config, correlations=corr)
    raise ConfigError(f"unknown sweep parameter {parameter!r}")


def _evaluate_row(
    config: SystemConfig, outputs: tuple[str, ...]
) -> tuple[tuple[float, ...], tuple[bool, ...]]:
    values: list[float] = []
    flags: list[bool] = []
    for name in outputs:
        flag = True
        if name == "rci_shared":
            report = model.rci_shared(config)
            value, flag = report.value, report.in_probability_domain
        elif name == "rci_separate":
            report = model.rci_separate(config)
            value, flag = report.value, report.in_probability_domain
        elif name == "rci_ratio":
            value = model.rci_ratio(config)
        elif name == "simplified_shared":
            value = model.simplified_rci_shared(*_simplified_args(config))
        elif name == "simplified_separate":
            value = model.simplified_rci_separate(*_simplified_args(config))
        elif name == "t_shared":
            value = model.t_shared(config.latency, config.memory.shared_window)
        elif name == "t_separate":
            value = model.t_separate(config.latency, config.memory.separate_windows[0])
        else:
            value = model.response_time_ratio(
                config.latency,
                config.memory.shared_window,
                config.memory.separate_windows[0],
            )
        values.append(value)
        flags.append(flag)
    return tuple(values), tuple(flags)


def _simplified_args(config: SystemConfig) -> tuple[float, float, float, float]:
    topic = config.topics[0]
    rho = config.correlations.entry(0, 1)
    return topic.total, topic.noise_ratio, config.memory.shared_window, rho


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate every output column at every grid point.

    Domain errors from the model propagate as ``MathDomainError`` annotated
    with the offending column and grid value.
    """
    rows = []
    flags = []
    for value in spec.grid:
        config = _apply_parameter(spec.base_config, spec.parameter, value)
        try:
            row, row_flags = _evaluate_row(config, spec.outputs)
        except MathDomainError as err:
            raise MathDomainError(
                f"at {spec.parameter}={value:g}: {err}"
            ) from err
        rows.append(row)
        flags.append(row_flags)
    return SweepTable(spec.parameter, spec.grid, spec.outputs, tuple(rows), tuple(flags))


@dataclass(frozen=True)
class ShapeCheck:
    """Result of a monotonicity or bounds check over one column."""

    passed: bool
    violation_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.passed


def check_shape(table: SweepTable, column: str, shape: str) -> ShapeCheck:
    """Check ``nondecreasing``, ``nonincreasing`` or ``bounded_01`` over a
    column.  Differences within SHAPE_TOLERANCE count as ties; on failure
    the index of the first violating row is reported."""
    values = table.column(column)
    if shape == "nondecreasing":
        for i, (a, b) in enumerate(zip(values, values[1:])):
            if b < a - SHAPE_TOLERANCE:
                return ShapeCheck(False, i + 1)
        return ShapeCheck(True)
    if shape == "nonincreasing":
        for i, (a, b) in enumerate(zip(values, values[1:])):
            if b > a + SHAPE_TOLERANCE:
                return ShapeCheck(False, i + 1)
        return ShapeCheck(True)
    if shape == "bounded_01":
        for i, v in enumerate(values):
            if not -SHAPE_TOLERANCE <= v <= 1.0 + SHAPE_TOLERANCE:
                return ShapeCheck(False, i)
        return ShapeCheck(True)
    raise ConfigError(
        f"unknown shape {shape!r}, expected nondecreasing, nonincreasing or bounded_01"
    )


def crossover_scan(
    table: SweepTable, column_a: str, column_b: str
) -> Optional[tuple[float, float]]:
    """Grid bracket around the first sign change of (column_a - column_b).

    Exact zeros are skipped, so a difference that touches zero and returns
    with the same sign is not a crossover.  Returns the (grid value before,
    grid value after) pair, or None when the sign never flips.
    """
    a = table.column(column_a)
    b = table.column(column_b)
    prev_sign = 0
    prev_at: Optional[float] = None
    for x, (va, vb) in zip(table.grid, zip(a, b)):
        diff = va - vb
        sign = (diff > 0.0) - (diff < 0.0)
        if sign == 0:
            continue
        if prev_sign != 0 and sign != prev_sign:
            return (prev_at, x)
        prev_sign = sign
        prev_at = x
    return None
