"""Domain types and closed-form consistency and latency formulas.

Every function in this module is a pure function of immutable inputs, safe
for concurrent use.  All arithmetic is double precision.

Conventions baked into the formulas:

* Statement generation per topic is a Poisson stream split into a correct
  rate and a noise rate; ``exp(-rate * window)`` is the probability that a
  memory window of the given duration holds no arrivals.
* The search-time model uses the natural logarithm.  The time coefficient
  ``alpha`` is a free scale factor, so any other base would only rescale it.
* Consistency values are reported raw and never clamped.  When a noise
  bracket leaves [0, 1] the report's ``in_probability_domain`` flag turns
  false instead.
* ``simplified_rci_shared`` implements the published two-topic shorthand
  verbatim, with coefficient (1 + rho/2) on the cross-coupling term.  This
  deliberately disagrees with ``rci_shared`` specialised to the same
  symmetric inputs, which carries (1 + rho); the gap is
  ``exp(-2*l*M) * (rho/2) * r * (1 - exp(-2*l*M))`` and is asserted in the
  test suite.  Both forms are kept because neither is "fixed" here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from .errors import ConfigError, MathDomainError

Mode = Literal["shared", "separate"]

__all__ = [
    "Mode",
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
]


@dataclass(frozen=True)
class TopicRates:
    """Correct and noise statement generation rates for one topic."""

    lambda_correct: float
    lambda_noise: float

    def __post_init__(self) -> None:
        if not (self.lambda_correct >= 0.0) or not (self.lambda_noise >= 0.0):
            raise ConfigError(
                f"topic rates must be nonnegative, got "
                f"({self.lambda_correct}, {self.lambda_noise})"
            )
        if self.lambda_correct + self.lambda_noise <= 0.0:
            raise ConfigError("topic total rate must be positive")

    @property
    def total(self) -> float:
        return self.lambda_correct + self.lambda_noise

    @property
    def noise_ratio(self) -> float:
        return self.lambda_noise / self.total


@dataclass(frozen=True)
class CorrelationMatrix:
    """Square matrix of cross-topic coupling coefficients in [0, 1].

    The diagonal must be exactly zero (a topic does not couple with itself).
    Symmetry is not required; ``is_symmetric`` tells you whether it holds.
    """

    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0:
            raise ConfigError("correlation matrix must have at least one row")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ConfigError(
                    f"correlation matrix row {i} has {len(row)} entries, expected {n}"
                )
            for j, value in enumerate(row):
                if not (0.0 <= value <= 1.0):
                    raise ConfigError(
                        f"correlation[{i}][{j}] = {value} is outside [0, 1]"
                    )
            if row[i] != 0.0:
                raise ConfigError(f"correlation[{i}][{i}] must be exactly 0")

    @classmethod
    def uniform(cls, n_topics: int, rho: float) -> "CorrelationMatrix":
        """All off-diagonal entries equal to ``rho``."""
        rows = tuple(
            tuple(rho if i != j else 0.0 for j in range(n_topics))
            for i in range(n_topics)
        )
        return cls(rows)

    @property
    def n_topics(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> float:
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        n = self.n_topics
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(n)
            for j in range(i + 1, n)
        )


@dataclass(frozen=True)
class MemoryConfig:
    """Shared memory window plus optional per-topic windows.

    ``separate_windows=None`` means "same as the shared window for every
    topic"; ``SystemConfig`` materialises the per-topic tuple.
    """

    shared_window: float
    separate_windows: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if not (self.shared_window >= 0.0):
            raise ConfigError(f"shared_window must be >= 0, got {self.shared_window}")
        if self.separate_windows is not None:
            windows = tuple(float(w) for w in self.separate_windows)
            object.__setattr__(self, "separate_windows", windows)
            for i, w in enumerate(windows):
                if not (w >= 0.0):
                    raise ConfigError(f"separate_windows[{i}] must be >= 0, got {w}")


@dataclass(frozen=True)
class LatencyParams:
    """Coefficients of the response-time model."""

    alpha: float
    beta: float
    n_agents: int

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0):
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if not (self.beta >= 0.0):
            raise ConfigError(f"beta must be >= 0, got {self.beta}")
        if self.n_agents != int(self.n_agents) or self.n_agents < 0:
            raise ConfigError(f"n_agents must be a nonnegative integer, got {self.n_agents}")
        object.__setattr__(self, "n_agents", int(self.n_agents))


@dataclass(frozen=True)
class SystemConfig:
    """Complete scenario: topics, coupling, memory windows, latency."""

    topics: tuple[TopicRates, ...]
    correlations: CorrelationMatrix
    memory: MemoryConfig
    latency: LatencyParams

    def __post_init__(self) -> None:
        topics = tuple(self.topics)
        object.__setattr__(self, "topics", topics)
        n = len(topics)
        if n == 0:
            raise ConfigError("at least one topic is required")
        if self.correlations.n_topics != n:
            raise ConfigError(
                f"correlation matrix is {self.correlations.n_topics}x"
                f"{self.correlations.n_topics} but there are {n} topics"
            )
        if self.memory.separate_windows is None:
            resolved = MemoryConfig(
                self.memory.shared_window, (self.memory.shared_window,) * n
            )
            object.__setattr__(self, "memory", resolved)
        elif len(self.memory.separate_windows) != n:
            raise ConfigError(
                f"{len(self.memory.separate_windows)} separate windows for {n} topics"
            )

    @property
    def n_topics(self) -> int:
        return len(self.topics)

    @property
    def pooled_rate(self) -> float:
        return sum(t.total for t in self.topics)


@dataclass(frozen=True)
class RciReport:
    """A consistency index with its component breakdown.

    ``value`` is never clamped; ``in_probability_domain`` is true exactly
    when the value and every per-topic noise-impact term lie in [0, 1].
    """

    value: float
    retention_factor: float
    noise_impact_total: float
    in_probability_domain: bool


def total_rate(rates: TopicRates) -> float:
    """Combined statement rate of one topic."""
    return rates.lambda_correct + rates.lambda_noise


def retention_probability(lambda_total: float, window: float) -> float:
    """Probability that a window of the given duration holds no arrivals,
    exp(-lambda_total * window)."""
    if lambda_total <= 0.0:
        raise MathDomainError(f"lambda_total must be > 0, got {lambda_total}")
    if window < 0.0:
        raise MathDomainError(f"window must be >= 0, got {window}")
    return math.exp(-lambda_total * window)


def noise_after_correct(rates: TopicRates, window: float) -> float:
    """Probability that the window is clear and the next statement is noisy:
    exp(-total * window) * lambda_noise / total."""
    return retention_probability(rates.total, window) * rates.lambda_noise / rates.total


def _check_mode(mode: str) -> None:
    if mode not in ("shared", "separate"):
        raise ConfigError(f"mode must be 'shared' or 'separate', got {mode!r}")


def _shared_noise_terms(config: SystemConfig) -> list[float]:
    # Pooled substitution: every topic decays at the pooled rate over the
    # shared window and is thinned against the pooled rate.
    pooled = config.pooled_rate
    decay = retention_probability(pooled, config.memory.shared_window)
    return [decay * t.lambda_noise / pooled for t in config.topics]


def _separate_noise_terms(config: SystemConfig) -> list[float]:
    windows = config.memory.separate_windows
    return [noise_after_correct(t, windows[i]) for i, t in enumerate(config.topics)]


def _coupled_impacts(terms: Sequence[float], corr: CorrelationMatrix) -> list[float]:
    impacts = []
    for i in range(len(terms)):
        impact = terms[i]
        for j in range(len(terms)):
            if j != i:
                impact += corr.entry(i, j) * terms[j]
        impacts.append(impact)
    return impacts


def noise_impact(config: SystemConfig, topic_index: int, mode: Mode) -> float:
    """Noise-after-correct probability of one topic plus its correlation-
    weighted contamination from the other topics.

    In shared mode every term uses the pooled rate and the shared window; in
    separate mode each term uses its own topic's rate and window.
    """
    _check_mode(mode)
    if not 0 <= topic_index < config.n_topics:
        raise ConfigError(
            f"topic_index {topic_index} out of range for {config.n_topics} topics"
        )
    terms = _shared_noise_terms(config) if mode == "shared" else _separate_noise_terms(config)
    return _coupled_impacts(terms, config.correlations)[topic_index]


def _in_domain(value: float, impacts: Sequence[float]) -> bool:
    return 0.0 <= value <= 1.0 and all(0.0 <= p <= 1.0 for p in impacts)


def rci_shared(config: SystemConfig) -> RciReport:
    """Consistency index of the single shared-context configuration."""
    terms = _shared_noise_terms(config)
    impacts = _coupled_impacts(terms, config.correlations)
    retention = 1.0 - retention_probability(config.pooled_rate, config.memory.shared_window)
    noise_total = sum(impacts)
    value = retention * (1.0 - noise_total)
    return RciReport(value, retention, noise_total, _in_domain(value, impacts))


def rci_separate(config: SystemConfig) -> RciReport:
    """Consistency index of the per-topic separate-context configuration:
    the product over topics of (retention factor) * (1 - noise impact)."""
    windows = config.memory.separate_windows
    decays = [
        retention_probability(t.total, windows[i]) for i, t in enumerate(config.topics)
    ]
    terms = [d * t.lambda_noise / t.total for d, t in zip(decays, config.topics)]
    impacts = _coupled_impacts(terms, config.correlations)
    value = 1.0
    retention = 1.0
    for decay, impact in zip(decays, impacts):
        retention *= 1.0 - decay
        value *= (1.0 - decay) * (1.0 - impact)
    return RciReport(value, retention, sum(impacts), _in_domain(value, impacts))


def rci_ratio(config: SystemConfig) -> float:
    """rci_separate / rci_shared.  Values above 1 favour separate contexts."""
    shared = rci_shared(config).value
    if shared == 0.0:
        raise MathDomainError(
            "rci_ratio is undefined: rci_shared is 0 (zero shared memory window)"
        )
    return rci_separate(config).value / shared


def t_shared(latency: LatencyParams, window: float) -> float:
    """Search time within one memory window, alpha * ln(1 + window)."""
    if window < 0.0:
        raise MathDomainError(f"window must be >= 0, got {window}")
    return latency.alpha * math.log1p(window)


def t_separate(latency: LatencyParams, separate_window: float) -> float:
    """Search time in a local window plus the cost of querying the other
    agents, alpha * ln(1 + window) + beta * n_agents."""
    return t_shared(latency, separate_window) + latency.beta * latency.n_agents


def response_time_ratio(
    latency: LatencyParams, shared_window: float, separate_window: float
) -> float:
    """t_separate / t_shared.

    With equal windows this reduces to 1 + beta*N / (alpha * ln(1 + M)).
    Both windows are explicit because the separate model may search a
    different window than the shared one.
    """
    denominator = t_shared(latency, shared_window)
    if denominator == 0.0:
        raise MathDomainError(
            "response_time_ratio is undefined: shared search time is 0 "
            "(zero shared memory window)"
        )
    return t_separate(latency, separate_window) / denominator


def _check_simplified_domain(
    lambda_total: float, noise_ratio: float, window: float, rho: float
) -> None:
    if lambda_total <= 0.0:
        raise MathDomainError(f"lambda_total must be > 0, got {lambda_total}")
    if not (0.0 <= noise_ratio <= 1.0):
        raise MathDomainError(f"noise_ratio must lie in [0, 1], got {noise_ratio}")
    if window < 0.0:
        raise MathDomainError(f"window must be >= 0, got {window}")
    if not (0.0 <= rho <= 1.0):
        raise MathDomainError(f"rho must lie in [0, 1], got {rho}")


def simplified_rci_shared(
    lambda_total: float, noise_ratio: float, window: float, rho: float
) -> float:
    """Two-topic symmetric shorthand for the shared-context index:
    (1 - exp(-2lM)) * (1 - exp(-2lM) * (1 + rho/2) * noise_ratio).

    Note the (1 + rho/2) coefficient; see the module docstring for why this
    does not equal ``rci_shared`` on the matching symmetric config.
    """
    _check_simplified_domain(lambda_total, noise_ratio, window, rho)
    decay = math.exp(-2.0 * lambda_total * window)
    return (1.0 - decay) * (1.0 - decay * (1.0 + rho / 2.0) * noise_ratio)


def simplified_rci_separate(
    lambda_total: float, noise_ratio: float, window: float, rho: float
) -> float:
    """Two-topic symmetric shorthand for the separate-context index:
    (1 - exp(-lM))^2 * (1 - (exp(-lM) + rho * exp(-lM)) * noise_ratio)^2."""
    _check_simplified_domain(lambda_total, noise_ratio, window, rho)
    decay = math.exp(-lambda_total * window)
    factor = (1.0 - decay) * (1.0 - (decay + rho * decay) * noise_ratio)
    return factor * factor


def simplified_rci_ratio(
    lambda_total: float, noise_ratio: float, window: float, rho: float
) -> float:
    """Quotient of the two simplified forms."""
    shared = simplified_rci_shared(lambda_total, noise_ratio, window, rho)
    if shared == 0.0:
        raise MathDomainError(
            "simplified_rci_ratio is undefined: the shared form is 0"
        )
    return simplified_rci_separate(lambda_total, noise_ratio, window, rho) / shared
