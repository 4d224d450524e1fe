"""Compiled-vs-pure kernel benchmark.

Runs the hot kernels (orbit iteration, byte normalization, full
keystream generation) on both backends, checks that their outputs are
bit-identical, and prints a timing table with speedups. Usage:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from cubicrypt import _purepy


def _load_compiled():
    try:
        from cubicrypt import _core
    except ImportError:
        return None
    return _core


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_orbit(mod):
    def run():
        samples, escaped = mod.run_orbit(0.1, 3.6, 1, 1.0, 70_000)
        assert escaped == -1
        return samples

    return run


def bench_normalize(mod):
    samples, _ = _purepy.run_orbit(0.1, 3.6, 1, 1.0, 65_536)
    block = np.ascontiguousarray(samples[1:])
    out = np.empty(len(block), dtype=np.uint8)

    def run():
        bad = mod.normalize_block(block, out)
        assert bad == -1
        return out

    return run


def bench_keystream(mod):
    def run():
        samples, escaped = mod.run_orbit(0.1, 3.6, 1, 1.0, 65_536)
        assert escaped == -1
        block = np.ascontiguousarray(samples[1:])
        out = np.empty(len(block), dtype=np.uint8)
        bad = mod.normalize_block(block, out)
        assert bad == -1
        return out

    return run


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best-of)")
    args = parser.parse_args()

    core = _load_compiled()
    if core is None:
        print("compiled extension not built; nothing to compare (pure backend only)")
        return 1

    cases = [
        ("orbit 70000 iters", bench_orbit),
        ("normalize 65536", bench_normalize),
        ("keystream 65536", bench_keystream),
    ]

    print(f"{'kernel':<20} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    for name, make in cases:
        pure_fn = make(_purepy)
        core_fn = make(core)
        pure_out = np.asarray(pure_fn())
        core_out = np.asarray(core_fn())
        if pure_out.dtype == np.float64:
            identical = np.array_equal(
                pure_out.view(np.uint64), np.asarray(core_out).view(np.uint64)
            )
        else:
            identical = np.array_equal(pure_out, core_out)
        if not identical:
            print(f"{name}: BACKEND MISMATCH, outputs differ")
            return 1
        t_pure = _time(pure_fn, args.repeat)
        t_core = _time(core_fn, args.repeat)
        print(f"{name:<20} {t_pure * 1e3:>12.3f} {t_core * 1e3:>14.3f} {t_pure / t_core:>8.1f}x")
    print("outputs bit-identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
