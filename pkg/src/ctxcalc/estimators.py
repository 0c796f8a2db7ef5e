"""Monte Carlo estimators for the closed-form consistency quantities.

Each estimator maps a trial budget onto a counting kernel (see
``ctxcalc.kernels``), addressing trials by a global index so that results
are independent of how the range is partitioned across workers.  Success
predicates are evaluated in the uniform domain wherever possible: "the
first arrival misses the window" is exactly "u < exp(-rate * window)", so
thresholds are computed once here and the kernels never call ``exp``.

Stream layout is part of the reproducibility contract.  Single-quantity
estimators consume exactly the stream of the ``RngSpec`` they are given.
``estimate_rci`` runs one component estimator per independent factor on
consecutive stream ids starting at ``rng.stream_id``:

* shared mode: stream +0 for pooled retention, streams +1 .. +n for the
  per-topic noise terms (n + 1 streams in total);
* separate mode: streams +0 .. +n-1 for per-topic retention, streams
  +n .. +2n-1 for per-topic noise terms (2n streams in total).

The composed standard error is first order (delta method) in the component
estimates, which are independent by construction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import kernels
from .errors import ConfigError, MathDomainError
from .model import Mode, SystemConfig, TopicRates, retention_probability
from .rng import RngSpec, stream_key

__all__ = [
    "SimEstimate",
    "estimate_zero_arrival",
    "estimate_next_event_noise",
    "estimate_noise_after_correct",
    "estimate_rci",
]


@dataclass(frozen=True)
class SimEstimate:
    """A Monte Carlo point estimate with its standard error."""

    mean: float
    std_error: float
    trials: int
    seed: RngSpec

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not (self.std_error >= 0.0):
            raise ConfigError(f"std_error must be >= 0, got {self.std_error}")


def _check_budget(trials: int, partitions: int) -> None:
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(partitions, int) or partitions < 1:
        raise ConfigError(f"partitions must be a positive integer, got {partitions!r}")


def _partition_ranges(trials: int, partitions: int) -> list[tuple[int, int]]:
    bounds = [i * trials // partitions for i in range(partitions + 1)]
    return [(lo, hi - lo) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def _run_counts(fn, key: int, trials: int, partitions: int, *args) -> int:
    """Sum a counting kernel over a partition of the global trial range.

    The kernel addresses trials by global index, so the total is the same
    for every partition count; partitions only bound per-call work and give
    the compiled backend (which drops the GIL) thread parallelism.
    """
    ranges = _partition_ranges(trials, partitions)
    if len(ranges) == 1:
        start, n = ranges[0]
        return fn(key, start, n, *args)
    with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
        futures = [pool.submit(fn, key, start, n, *args) for start, n in ranges]
        return sum(f.result() for f in futures)


def _bernoulli(count: int, trials: int, rng: RngSpec) -> SimEstimate:
    mean = count / trials
    std_error = math.sqrt(mean * (1.0 - mean) / trials)
    return SimEstimate(mean, std_error, trials, rng)


def estimate_zero_arrival(
    rate: float, window: float, trials: int, rng: RngSpec, partitions: int = 1
) -> SimEstimate:
    """Fraction of trials whose first sampled arrival falls outside the window.

    One exponential arrival is drawn per trial; comparing its uniform
    against exp(-rate * window) is the same event in exact arithmetic and
    keeps the backends bit-identical.  Estimates exp(-rate * window).
    """
    _check_budget(trials, partitions)
    threshold = retention_probability(rate, window)
    count = _run_counts(
        kernels.count_zero_arrival, stream_key(rng), trials, partitions, threshold
    )
    return _bernoulli(count, trials, rng)


def estimate_next_event_noise(
    rates: TopicRates, trials: int, rng: RngSpec, partitions: int = 1
) -> SimEstimate:
    """Fraction of trials where a noise arrival beats the correct arrival.

    Two exponentials race per trial.  Estimates lambda_noise / total; a
    zero noise rate estimates exactly 0 and a zero correct rate exactly 1.
    """
    _check_budget(trials, partitions)
    count = _run_counts(
        kernels.count_race,
        stream_key(rng),
        trials,
        partitions,
        rates.lambda_noise,
        rates.lambda_correct,
    )
    return _bernoulli(count, trials, rng)


def _joint_estimate(
    total: float,
    noise_probability: float,
    window: float,
    trials: int,
    rng: RngSpec,
    partitions: int,
) -> SimEstimate:
    # Window survival and the noise/correct race are independent, so the
    # joint event factors into two uniform threshold tests per trial.
    threshold_window = retention_probability(total, window)
    count = _run_counts(
        kernels.count_joint,
        stream_key(rng),
        trials,
        partitions,
        threshold_window,
        noise_probability,
    )
    return _bernoulli(count, trials, rng)


def estimate_noise_after_correct(
    rates: TopicRates, window: float, trials: int, rng: RngSpec, partitions: int = 1
) -> SimEstimate:
    """Fraction of trials where the window is clear and the next statement is
    noisy.  Estimates exp(-total * window) * lambda_noise / total."""
    _check_budget(trials, partitions)
    return _joint_estimate(
        rates.total, rates.lambda_noise / rates.total, window, trials, rng, partitions
    )


def _shared_weights(config: SystemConfig) -> list[float]:
    # Coefficient of topic j's noise term in the summed impacts:
    # its own impact plus every row i that couples to it.
    n = config.n_topics
    corr = config.correlations
    return [
        1.0 + sum(corr.entry(i, j) for i in range(n) if i != j) for j in range(n)
    ]


def estimate_rci(
    config: SystemConfig, mode: Mode, trials: int, rng: RngSpec, partitions: int = 1
) -> SimEstimate:
    """Monte Carlo estimate of the consistency index for one mode.

    Component probabilities (retention and per-topic noise terms) are each
    estimated with the full trial budget on their own stream (layout in the
    module docstring) and composed through the same algebra as the
    closed-form index.  The standard error is the delta-method combination
    of the component errors; the composed mean can fall slightly outside
    [0, 1] when components straddle a boundary.
    """
    if mode not in ("shared", "separate"):
        raise ConfigError(f"mode must be 'shared' or 'separate', got {mode!r}")
    _check_budget(trials, partitions)
    n = config.n_topics
    corr = config.correlations

    def spec(offset: int) -> RngSpec:
        return rng.with_stream(rng.stream_id + offset)

    if mode == "shared":
        pooled = config.pooled_rate
        window = config.memory.shared_window
        ret = estimate_zero_arrival(pooled, window, trials, spec(0), partitions)
        terms = [
            _joint_estimate(
                pooled, t.lambda_noise / pooled, window, trials, spec(1 + i), partitions
            )
            for i, t in enumerate(config.topics)
        ]
        weights = _shared_weights(config)
        total_impact = sum(w * q.mean for w, q in zip(weights, terms))
        value = (1.0 - ret.mean) * (1.0 - total_impact)
        variance = (1.0 - total_impact) ** 2 * ret.std_error**2
        variance += (1.0 - ret.mean) ** 2 * sum(
            (w * q.std_error) ** 2 for w, q in zip(weights, terms)
        )
        return SimEstimate(value, math.sqrt(max(variance, 0.0)), trials, rng)

    windows = config.memory.separate_windows
    rets = [
        estimate_zero_arrival(t.total, windows[i], trials, spec(i), partitions)
        for i, t in enumerate(config.topics)
    ]
    terms = [
        _joint_estimate(
            t.total, t.lambda_noise / t.total, windows[i], trials, spec(n + i), partitions
        )
        for i, t in enumerate(config.topics)
    ]
    impacts = [
        terms[i].mean
        + sum(corr.entry(i, j) * terms[j].mean for j in range(n) if j != i)
        for i in range(n)
    ]
    ret_factors = [1.0 - r.mean for r in rets]
    imp_factors = [1.0 - s for s in impacts]
    value = 1.0
    for rf, sf in zip(ret_factors, imp_factors):
        value *= rf * sf

    def product_excluding(factors: list[float], k: int) -> float:
        out = 1.0
        for i, f in enumerate(factors):
            if i != k:
                out *= f
        return out

    prod_ret = math.prod(ret_factors)
    prod_imp = math.prod(imp_factors)
    variance = 0.0
    for k in range(n):
        d_ret = product_excluding(ret_factors, k) * prod_imp
        variance += (d_ret * rets[k].std_error) ** 2
        # term k feeds impact m with weight 1 (m == k) or corr(m, k)
        d_term = 0.0
        for m in range(n):
            weight = 1.0 if m == k else corr.entry(m, k)
            d_term += weight * product_excluding(imp_factors, m)
        d_term *= prod_ret
        variance += (d_term * terms[k].std_error) ** 2
    return SimEstimate(value, math.sqrt(max(variance, 0.0)), trials, rng)
