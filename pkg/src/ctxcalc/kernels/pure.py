"""Pure-Python Monte Carlo counting kernels.

Reference implementation of the three trial counters, kept bit-compatible
with the compiled backend: the uniform pipeline is integer arithmetic (see
``ctxcalc.rng``), thresholds are computed by the caller, and the only libm
call in a hot path is ``math.log`` in the race kernel, which matches the C
``log`` the compiled backend uses.  numpy's vectorised ``log`` does not
(SIMD paths differ in the last ulp), so the race kernel deliberately runs a
scalar loop over vectorised uniform blocks.

Trial ``t`` always owns a fixed draw-index range, so counts are invariant
under any partitioning of [start, start + n).
"""

from __future__ import annotations

import math

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 2.0 ** -53

_CHUNK = 1 << 19


def _draws(key: int, indices: np.ndarray) -> np.ndarray:
    """Uniforms in (0, 1] at the given draw indices of stream ``key``."""
    z = np.uint64(key) + (indices + np.uint64(1)) * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    x = z ^ (z >> np.uint64(31))
    return ((x >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _INV_2_53


def count_zero_arrival(key: int, start: int, n: int, threshold: float) -> int:
    """Trials whose single draw u_t satisfies u_t < threshold.

    Trial t consumes draw index t; u_t < exp(-rate * window) is exactly the
    event that the sampled first arrival -ln(u_t)/rate exceeds the window.
    """
    total = 0
    for lo in range(0, n, _CHUNK):
        m = min(_CHUNK, n - lo)
        idx = np.arange(start + lo, start + lo + m, dtype=np.uint64)
        total += int(np.count_nonzero(_draws(key, idx) < threshold))
    return total


def count_joint(key: int, start: int, n: int,
                threshold_window: float, threshold_noise: float) -> int:
    """Trials where draw 2t clears the window test and draw 2t+1 the noise test.

    Both draws are consumed unconditionally, so the draw layout does not
    depend on outcomes.
    """
    total = 0
    for lo in range(0, n, _CHUNK):
        m = min(_CHUNK, n - lo)
        t = np.arange(start + lo, start + lo + m, dtype=np.uint64)
        u1 = _draws(key, t * np.uint64(2))
        u2 = _draws(key, t * np.uint64(2) + np.uint64(1))
        total += int(np.count_nonzero((u1 < threshold_window) & (u2 < threshold_noise)))
    return total


def count_race(key: int, start: int, n: int,
               rate_noise: float, rate_correct: float) -> int:
    """Trials where the noise arrival strictly precedes the correct arrival.

    Trial t consumes draws 2t (noise) and 2t+1 (correct).  A zero rate means
    that arrival never happens: rate_noise == 0 loses every race and
    rate_correct == 0 loses to any finite noise time, so both cases are
    resolved without sampling, identically in every backend.
    """
    if rate_noise == 0.0:
        return 0
    if rate_correct == 0.0:
        return n
    total = 0
    log = math.log
    for lo in range(0, n, _CHUNK):
        m = min(_CHUNK, n - lo)
        t = np.arange(start + lo, start + lo + m, dtype=np.uint64)
        u1 = _draws(key, t * np.uint64(2))
        u2 = _draws(key, t * np.uint64(2) + np.uint64(1))
        # scalar math.log keeps parity with the C log in the compiled path
        for a, b in zip(u1.tolist(), u2.tolist()):
            if -log(a) / rate_noise < -log(b) / rate_correct:
                total += 1
    return total
