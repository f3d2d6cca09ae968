"""Time the compiled circumsquare kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeat 3]
"""

import argparse
import time

import numpy as np

from pardelaunay import _fallback

try:
    from pardelaunay import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':<20}{'n':>6}{'numpy s':>12}{'compiled s':>12}{'speedup':>10}  same")
    for n in args.sizes:
        rng = np.random.default_rng([args.seed, n])
        u, v = rng.uniform(0, 1, n), rng.uniform(0, 1, n)
        for name in ("empty_squares", "boundary_quadruples"):
            t_np, r_np = best_of(lambda: getattr(_fallback, name)(u, v), args.repeat)
            if _kernels is None:
                print(f"{name:<20}{n:>6}{t_np:>12.4f}")
                continue
            t_c, r_c = best_of(lambda: getattr(_kernels, name)(u, v), args.repeat)
            if name == "empty_squares":
                same = np.array_equal(r_np[0], r_c[0]) and np.allclose(r_np[1], r_c[1], rtol=0, atol=1e-12)
            else:
                same = np.array_equal(r_np, r_c)
            print(f"{name:<20}{n:>6}{t_np:>12.4f}{t_c:>12.4f}{t_np / t_c:>10.1f}  {same}")


if __name__ == "__main__":
    main()
