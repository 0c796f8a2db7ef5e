"""Splittable, counter-based uniform random source.

Draw ``i`` of stream ``(seed, stream_id)`` is a pure function of those three
integers: the stream key and the draw index are pushed through a SplitMix64
finaliser and the 64 output bits are scaled by 2^-53 into (0, 1].  Because
the pipeline is integer arithmetic plus one exact power-of-two scaling, the
uniform sequence is bit-identical across backends, platforms and any
partitioning of the index range, which is what makes parallel trial
execution reproducible irrespective of scheduling.

Exponential inter-arrival times are obtained from the inverse CDF,
-ln(u) / rate.  The log goes through libm, so transformed durations (unlike
the raw uniforms) can differ in the last ulp between C libraries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, MathDomainError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_STREAM_SALT = 0x5851F42D4C957F2D

# 2^-53; (bits >> 11) + 1 lies in [1, 2^53], so u lies in (0, 1].
_INV_2_53 = 2.0 ** -53

_GOLDEN_U64 = np.uint64(_GOLDEN)
_MIX_A_U64 = np.uint64(_MIX_A)
_MIX_B_U64 = np.uint64(_MIX_B)


@dataclass(frozen=True)
class RngSpec:
    """Seed and stream identifier naming one reproducible uniform stream."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for field in ("seed", "stream_id"):
            value = getattr(self, field)
            if not isinstance(value, int) or not 0 <= value < 1 << 64:
                raise ConfigError(f"{field} must be an integer in [0, 2^64), got {value!r}")

    def with_stream(self, stream_id: int) -> "RngSpec":
        return RngSpec(self.seed, stream_id)


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def stream_key(spec: RngSpec) -> int:
    """Collapse (seed, stream_id) into the 64-bit key the mixers consume."""
    base = _mix64(spec.seed ^ _STREAM_SALT)
    return _mix64((base + spec.stream_id * _GOLDEN) & _MASK64)


def uniform_at(key: int, index: int) -> float:
    """Draw ``index`` of the stream with the given key, in (0, 1]."""
    x = _mix64((key + (index + 1) * _GOLDEN) & _MASK64)
    return ((x >> 11) + 1) * _INV_2_53


def uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Vectorised ``uniform_at`` for draw indices [start, start + count)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(key) + idx * _GOLDEN_U64
    z = (z ^ (z >> np.uint64(30))) * _MIX_A_U64
    z = (z ^ (z >> np.uint64(27))) * _MIX_B_U64
    x = z ^ (z >> np.uint64(31))
    return ((x >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _INV_2_53


def interarrival_from_uniform(rate: float, u: float) -> float:
    """Inverse-CDF transform of one uniform draw, -ln(u) / rate."""
    if rate <= 0.0:
        raise MathDomainError(f"rate must be > 0, got {rate}")
    return -math.log(u) / rate


class RandomStream:
    """Stateful cursor over one (seed, stream_id) uniform stream."""

    def __init__(self, spec: RngSpec, position: int = 0):
        self.spec = spec
        self._key = stream_key(spec)
        self._position = position

    @property
    def position(self) -> int:
        """Number of draws consumed so far."""
        return self._position

    def next_uniform(self) -> float:
        u = uniform_at(self._key, self._position)
        self._position += 1
        return u

    def take_uniforms(self, count: int) -> np.ndarray:
        block = uniforms(self._key, self._position, count)
        self._position += count
        return block


def sample_interarrival(rate: float, stream: RandomStream) -> float:
    """One exponential inter-arrival time with mean 1/rate."""
    if rate <= 0.0:
        raise MathDomainError(f"rate must be > 0, got {rate}")
    return interarrival_from_uniform(rate, stream.next_uniform())


def sample_interarrivals(rate: float, stream: RandomStream, count: int) -> np.ndarray:
    """Vectorised batch of exponential inter-arrival times."""
    if rate <= 0.0:
        raise MathDomainError(f"rate must be > 0, got {rate}")
    return -np.log(stream.take_uniforms(count)) / rate
