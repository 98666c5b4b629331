#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths (zero-order-hold RK4 truth propagation and the
reference-trajectory generator) plus a full closed-loop run through each
backend, and prints a small table.  Run from the repository root:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import sys
import time

from mfclab import _kernels_py

try:
    from mfclab import _kernels as _compiled
except ImportError:
    _compiled = None

PARAMS = (1.5, 0.5, 1.4, 0.84, 9.8, 0.028, 0.0032)
STATE = (0.45, -0.14, -0.3, 0.05)


def time_call(fn, repeats: int) -> float:
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return min(samples)


def bench_truth_propagation(kernels, steps: int = 3500, substeps: int = 10):
    def run():
        state = STATE
        for _ in range(steps):
            state = kernels.rk4_advance(*state, 0.1, 0.02, substeps, *PARAMS)
        return state

    return run


def bench_trajectory(kernels, steps: int = 3500, substeps: int = 10):
    def run():
        state = STATE
        for _ in range(steps):
            state = kernels.trajgen_advance(*state, 0.02, substeps, *PARAMS)
        return state

    return run


def bench_closed_loop():
    # a full experiment through whichever backend is active in-process
    from mfclab import demo_config, run_closed_loop

    config = demo_config(seed=0)

    def run():
        return run_closed_loop(config)

    return run


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.insert(0, ("compiled", _compiled))
    else:
        print("compiled extension not built; timing the fallback only\n")

    rows = []
    for label, maker in (
        ("truth propagation, 70 s at 50 Hz", bench_truth_propagation),
        ("reference generation, 70 s at 50 Hz", bench_trajectory),
    ):
        times = {name: time_call(maker(mod), args.repeats)
                 for name, mod in backends}
        rows.append((label, times))

    from mfclab import BACKEND

    loop_time = time_call(bench_closed_loop(), max(2, args.repeats // 2))
    rows.append((f"full closed-loop run ({BACKEND} backend)",
                 {BACKEND: loop_time}))

    width = max(len(r[0]) for r in rows) + 2
    print(f"{'benchmark':<{width}} {'compiled':>10} {'python':>10} {'speedup':>9}")
    for label, times in rows:
        compiled_t = times.get("compiled")
        python_t = times.get("python")
        speedup = (
            f"{python_t / compiled_t:8.1f}x"
            if compiled_t is not None and python_t is not None
            else "      --"
        )
        fmt = lambda t: f"{t * 1e3:8.1f}ms" if t is not None else "        --"
        print(f"{label:<{width}} {fmt(compiled_t)} {fmt(python_t)} {speedup}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
