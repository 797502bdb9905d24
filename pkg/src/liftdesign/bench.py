"""Benchmark the compiled sampling kernel against the pure numpy fallback.

Run as ``python -m liftdesign.bench``. Times chunk-level sample
generation at a large and a small control rate (the two Poisson sampling
regimes), verifies the backends produce bitwise-identical output, and
reports throughput and speedup.
"""

import argparse
import time

import numpy as np

from . import _kernels


def _time_backend(kernel, seed_seq, n, test_rate, control_rate, repeat):
    best = float("inf")
    values = None
    for _ in range(repeat):
        bg = np.random.PCG64(seed_seq)
        start = time.perf_counter()
        values, _ = kernel(bg, n, test_rate, control_rate, 1.0, 1.0, True)
        best = min(best, time.perf_counter() - start)
    return values, best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="liftdesign.bench")
    parser.add_argument("--samples", type=int, default=5_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    print(f"active backend: {_kernels.backend_name()}")
    if _kernels.compiled is None:
        print("compiled kernel not built; nothing to compare")
        return 0

    workloads = [
        ("lift, control rate 20000", 20_000.0, 20_000.0),
        ("lift, control rate 300", 300.0, 300.0),
    ]
    for label, test_rate, control_rate in workloads:
        seq = np.random.SeedSequence(args.seed)
        pure_vals, pure_t = _time_backend(_kernels.pure.lift_chunk, seq, args.samples,
                                          test_rate, control_rate, args.repeat)
        comp_vals, comp_t = _time_backend(_kernels.compiled.lift_chunk, seq, args.samples,
                                          test_rate, control_rate, args.repeat)
        identical = np.array_equal(pure_vals, comp_vals)
        print(f"{label}: n={args.samples:,}")
        print(f"  pure      {pure_t:8.3f} s  ({args.samples / pure_t / 1e6:6.1f} M samples/s)")
        print(f"  compiled  {comp_t:8.3f} s  ({args.samples / comp_t / 1e6:6.1f} M samples/s)")
        print(f"  speedup   {pure_t / comp_t:8.2f}x   bitwise identical: {identical}")
        if not identical:
            print("  WARNING: backends diverged; report this as a bug")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
