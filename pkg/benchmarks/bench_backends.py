"""Compare the compiled and pure-Python kernel backends.

Times the four hot kernels (constrained sequence generation, the
per-trial learning loop via a full training run, sliding-window counts,
and the window-distance mean) on both backends and prints a table with
speedups. The two backends are bit-compatible, so the workloads are
identical by construction.

Usage:
    python benchmarks/bench_backends.py [--repeats N] [--scale X]
"""

import argparse
import time

import numpy as np

from rodentsim.agent import AgentConfig
from rodentsim.backend import available_backends, kernels, set_backend
from rodentsim.protocol import ProtocolConfig, run_training


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_sequence(repeats, scale):
    length = int(100_000 * scale)
    active = np.array([0, 3], dtype=np.uint8)

    def run():
        rng = np.random.default_rng(0)
        kernels().sequence_codes(rng, active, length, 3)

    return f"sequence_codes (n={length})", best_of(repeats, run)


def bench_training(repeats, scale):
    sessions = max(1, int(12 * scale))

    def run():
        run_training(ProtocolConfig(), AgentConfig(), 7,
                     n_sessions=sessions, stop_on_success=False)

    return f"run_training ({sessions} sessions)", best_of(repeats, run)


def bench_window_counts(repeats, scale):
    m = int(1_000_000 * scale)
    outc = np.random.default_rng(1).integers(0, 2, size=m).astype(np.uint8)

    def run():
        kernels().window_counts(outc, 20)

    return f"window_counts (m={m})", best_of(repeats, run)


def bench_mean_match(repeats, scale):
    n = int(1_000_000 * scale)
    rng = np.random.default_rng(2)
    a = rng.random(n)
    b = rng.random(n)

    def run():
        kernels().mean_match(a, b)

    return f"mean_match (n={n})", best_of(repeats, run)


BENCHES = (bench_sequence, bench_training, bench_window_counts,
           bench_mean_match)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="repetitions per measurement; best is kept")
    parser.add_argument("--scale", type=float, default=1.0,
                        help="workload size multiplier")
    args = parser.parse_args()

    backends = available_backends()
    if "native" not in backends:
        print("note: compiled backend not built; timing pure Python only")

    results = {}
    for name in backends:
        previous = set_backend(name)
        try:
            for bench in BENCHES:
                label, seconds = bench(args.repeats, args.scale)
                results.setdefault(label, {})[name] = seconds
        finally:
            set_backend(previous)

    width = max(len(label) for label in results)
    header = f"{'kernel':<{width}}"
    for name in backends:
        header += f"  {name + ' (ms)':>14}"
    if len(backends) > 1:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, times in results.items():
        row = f"{label:<{width}}"
        for name in backends:
            row += f"  {times[name] * 1e3:>14.3f}"
        if "native" in times and "python" in times:
            row += f"  {times['python'] / times['native']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
