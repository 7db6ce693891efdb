"""Compare the compiled and pure-numpy backends on the two hot loops.

    python3 benchmarks/bench_backends.py [--repeat 5] [--size 20000]

Prints best-of-N wall times and the speedup for phi_table and pair_sum.
"""
import argparse
import time

import numpy as np

from dunkldisk import _core
from dunkldisk._core import fallback
from dunkldisk.kernels import kernel_weights, truncation_terms


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=20000)
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        from dunkldisk._core import _recur
    except ImportError:
        print("compiled extension is not built; run `pip install --no-build-isolation -e .`")
        return 1

    rng = np.random.default_rng(args.seed)
    n = args.size
    z = 0.95 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    w = 0.95 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    nt = truncation_terms("bergman", args.lam, np.abs(z * w), 1e-12)
    wt = kernel_weights("bergman", args.lam, int(nt.max()))

    cases = [
        ("phi_table (N=64)", lambda m: m.phi_table(z, args.lam, 64)),
        (f"pair_sum (bergman, max N={int(nt.max())})", lambda m: m.pair_sum(z, w, args.lam, wt, nt)),
    ]
    print(f"backend in use: {_core.BACKEND}; {n} points, lambda = {args.lam}, best of {args.repeat}")
    print(f"{'kernel':40s} {'numpy [s]':>10s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases:
        # agreement first, so a fast wrong answer cannot pass unnoticed
        a, b = fn(fallback), fn(_recur)
        err = np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))
        tp = best_of(lambda: fn(fallback), args.repeat)
        tc = best_of(lambda: fn(_recur), args.repeat)
        print(f"{name:40s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x   (max rel diff {err:.1e})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
