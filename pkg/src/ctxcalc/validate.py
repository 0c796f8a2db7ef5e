"""Monte Carlo cross-validation of the closed-form model.

``validate`` runs every estimator against its analytic counterpart on one
configuration and flags any component whose z-score exceeds the threshold.
The component list, their order, and the stream each consumes are fixed, so
a (config, trials, seed) triple always produces the same report bytes.

Stream allocation is a running counter starting at ``rng.stream_id``:

=====================================  =======================
component                              streams consumed
=====================================  =======================
zero_arrival[pooled]                   1
zero_arrival[topic{i}] for each i      1 each
next_event_noise[topic{i}]             1 each
noise_after_correct[shared,topic{i}]   1 each
noise_after_correct[separate,topic{i}] 1 each
rci[shared]                            1 + n
rci[separate]                          2n
=====================================  =======================

A z-score is (estimate - analytic) / std_error.  A zero standard error
(estimate pinned at 0 or 1) gives z = 0 when the estimate equals the
analytic value exactly and a signed infinity otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

from . import model
from .errors import ConfigError
from .estimators import (
    SimEstimate,
    _joint_estimate,
    estimate_next_event_noise,
    estimate_noise_after_correct,
    estimate_rci,
    estimate_zero_arrival,
)
from .model import SystemConfig
from .rng import RngSpec

__all__ = ["ComponentCheck", "ValidationReport", "validate", "MIN_TRIALS"]

# Below this the normal approximation behind the z-score is not trustworthy.
MIN_TRIALS = 10_000


@dataclass(frozen=True)
class ComponentCheck:
    """One estimator/analytic comparison."""

    name: str
    analytic: float
    estimate: SimEstimate
    z_score: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "analytic": self.analytic,
            "estimate": self.estimate.mean,
            "std_error": self.estimate.std_error,
            "z_score": self.z_score,
            "stream_id": self.estimate.seed.stream_id,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ValidationReport:
    """All component checks for one configuration."""

    components: tuple[ComponentCheck, ...]
    trials: int
    seed: RngSpec
    sigma_threshold: float
    partitions: int

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.components)

    @property
    def failures(self) -> tuple[ComponentCheck, ...]:
        return tuple(c for c in self.components if not c.passed)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed.seed,
            "stream_id": self.seed.stream_id,
            "sigma_threshold": self.sigma_threshold,
            "partitions": self.partitions,
            "all_passed": self.all_passed,
            "components": [c.to_dict() for c in self.components],
        }


def _z_score(estimate: SimEstimate, analytic: float) -> float:
    if estimate.std_error > 0.0:
        return (estimate.mean - analytic) / estimate.std_error
    if estimate.mean == analytic:
        return 0.0
    return math.copysign(math.inf, estimate.mean - analytic)


def validate(
    config: SystemConfig,
    trials: int,
    rng: RngSpec,
    sigma_threshold: float = 4.0,
    partitions: int = 1,
    analytic_overrides: Optional[Mapping[str, float]] = None,
) -> ValidationReport:
    """Cross-validate every estimator against the closed forms.

    ``analytic_overrides`` maps component names to replacement analytic
    values and exists so the suite can prove the comparison actually bites;
    production callers leave it unset.
    """
    if not isinstance(trials, int) or trials < MIN_TRIALS:
        raise ConfigError(
            f"trials must be an integer >= {MIN_TRIALS} for z-scores to be "
            f"meaningful, got {trials!r}"
        )
    if not (sigma_threshold > 0.0):
        raise ConfigError(f"sigma_threshold must be > 0, got {sigma_threshold}")
    overrides = dict(analytic_overrides or {})

    n = config.n_topics
    pooled = config.pooled_rate
    shared_window = config.memory.shared_window
    windows = config.memory.separate_windows
    next_stream = rng.stream_id
    checks: list[ComponentCheck] = []

    def spec_for(consumed: int) -> RngSpec:
        nonlocal next_stream
        spec = rng.with_stream(next_stream)
        next_stream += consumed
        return spec

    def record(name: str, analytic: float, estimate: SimEstimate) -> None:
        analytic = overrides.pop(name, analytic)
        z = _z_score(estimate, analytic)
        checks.append(
            ComponentCheck(name, analytic, estimate, z, abs(z) <= sigma_threshold)
        )

    record(
        "zero_arrival[pooled]",
        model.retention_probability(pooled, shared_window),
        estimate_zero_arrival(pooled, shared_window, trials, spec_for(1), partitions),
    )
    for i, topic in enumerate(config.topics):
        record(
            f"zero_arrival[topic{i}]",
            model.retention_probability(topic.total, windows[i]),
            estimate_zero_arrival(topic.total, windows[i], trials, spec_for(1), partitions),
        )
    for i, topic in enumerate(config.topics):
        record(
            f"next_event_noise[topic{i}]",
            topic.noise_ratio,
            estimate_next_event_noise(topic, trials, spec_for(1), partitions),
        )
    for i, topic in enumerate(config.topics):
        # shared-mode noise term: pooled decay thinned by this topic's share
        analytic = (
            model.retention_probability(pooled, shared_window)
            * topic.lambda_noise
            / pooled
        )
        record(
            f"noise_after_correct[shared,topic{i}]",
            analytic,
            _joint_estimate(
                pooled,
                topic.lambda_noise / pooled,
                shared_window,
                trials,
                spec_for(1),
                partitions,
            ),
        )
    for i, topic in enumerate(config.topics):
        record(
            f"noise_after_correct[separate,topic{i}]",
            model.noise_after_correct(topic, windows[i]),
            estimate_noise_after_correct(topic, windows[i], trials, spec_for(1), partitions),
        )
    record(
        "rci[shared]",
        model.rci_shared(config).value,
        estimate_rci(config, "shared", trials, spec_for(1 + n), partitions),
    )
    record(
        "rci[separate]",
        model.rci_separate(config).value,
        estimate_rci(config, "separate", trials, spec_for(2 * n), partitions),
    )

    if overrides:
        unknown = ", ".join(sorted(overrides))
        raise ConfigError(f"analytic_overrides for unknown components: {unknown}")
    return ValidationReport(tuple(checks), trials, rng, sigma_threshold, partitions)
