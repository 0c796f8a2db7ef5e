# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo counting kernels.

Mirror of ``ctxcalc.kernels.pure`` with identical draw addressing and
predicates; counts from the two backends must agree exactly.  The uniform
pipeline is pure 64-bit integer arithmetic plus one power-of-two scaling,
and the race kernel uses libc ``log``, which ``math.log`` also wraps.
"""

from libc.math cimport log
from libc.stdint cimport uint64_t

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15u
cdef uint64_t _MIX_A = 0xBF58476D1CE4E5B9u
cdef uint64_t _MIX_B = 0x94D049BB133111EBu
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline double _draw(uint64_t key, uint64_t index) nogil:
    cdef uint64_t z = key + (index + 1) * _GOLDEN
    z = (z ^ (z >> 30)) * _MIX_A
    z = (z ^ (z >> 27)) * _MIX_B
    z = z ^ (z >> 31)
    return <double>((z >> 11) + 1) * _INV_2_53


def count_zero_arrival(uint64_t key, uint64_t start, uint64_t n, double threshold):
    """Trials whose single draw u_t satisfies u_t < threshold."""
    cdef uint64_t i, total = 0
    with nogil:
        for i in range(n):
            if _draw(key, start + i) < threshold:
                total += 1
    return total


def count_joint(uint64_t key, uint64_t start, uint64_t n,
                double threshold_window, double threshold_noise):
    """Trials where draw 2t clears the window test and draw 2t+1 the noise test."""
    cdef uint64_t i, t, total = 0
    with nogil:
        for i in range(n):
            t = start + i
            if _draw(key, 2 * t) < threshold_window and _draw(key, 2 * t + 1) < threshold_noise:
                total += 1
    return total


def count_race(uint64_t key, uint64_t start, uint64_t n,
               double rate_noise, double rate_correct):
    """Trials where the noise arrival strictly precedes the correct arrival."""
    if rate_noise == 0.0:
        return 0
    if rate_correct == 0.0:
        return n
    cdef uint64_t i, t, total = 0
    with nogil:
        for i in range(n):
            t = start + i
            if -log(_draw(key, 2 * t)) / rate_noise < -log(_draw(key, 2 * t + 1)) / rate_correct:
                total += 1
    return total
