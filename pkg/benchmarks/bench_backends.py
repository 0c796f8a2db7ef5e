"""Throughput comparison of the compiled and pure simulation kernels.

Run from an environment where ctxcalc is installed:

    python3 benchmarks/bench_backends.py [--trials N] [--repeats K]

Both backends walk the same counter-based stream, so every kernel must
report identical counts; the script asserts that before timing anything.
Reported figures are the best of K repeats, in million trials per second.
"""

import argparse
import math
import time

from ctxcalc import kernels
from ctxcalc.rng import RngSpec, stream_key

_KERNELS = (
    ("zero_arrival", lambda mod, key, n: mod.count_zero_arrival(key, 0, n, math.exp(-1.0))),
    ("joint", lambda mod, key, n: mod.count_joint(key, 0, n, math.exp(-2.0), 0.5)),
    ("race", lambda mod, key, n: mod.count_race(key, 0, n, 0.5, 0.5)),
)


def _best_seconds(call, repeats):
    best = math.inf
    for _ in range(repeats):
        started = time.perf_counter()
        call()
        best = min(best, time.perf_counter() - started)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=2_000_000,
                        help="trials per kernel per timing (default 2000000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats, best is kept (default 3)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    key = stream_key(RngSpec(args.seed, 0))
    print(f"backends: {', '.join(backends)}")
    print(f"trials per timing: {args.trials}")
    print()
    header = f"{'kernel':<14}" + "".join(f"{name + ' Mt/s':>16}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)

    for kernel_name, call in _KERNELS:
        counts = set()
        rates = []
        for backend in backends:
            kernels.set_backend(backend)
            counts.add(call(kernels, key, args.trials))
            seconds = _best_seconds(lambda: call(kernels, key, args.trials), args.repeats)
            rates.append(args.trials / seconds / 1e6)
        if len(counts) != 1:
            raise SystemExit(f"{kernel_name}: backends disagree on counts: {counts}")
        row = f"{kernel_name:<14}" + "".join(f"{rate:>16.1f}" for rate in rates)
        if len(rates) > 1:
            row += f"{rates[0] / rates[-1]:>9.1f}x"
        print(row)

    kernels.set_backend("auto")


if __name__ == "__main__":
    main()
