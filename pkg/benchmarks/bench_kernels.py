"""Time the compiled kernels against the numpy fallback and check they agree.

    python3 benchmarks/bench_kernels.py [--sizes 50 100 200] [--repeat 3]
"""
import argparse
import time

import numpy as np

from extremal_spectral.numerics import _fallback, kmeans, sym_eigen

try:
    from extremal_spectral.numerics import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--points", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"python": _fallback}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled kernels unavailable; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'size':>7}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'max diff':>11}")
    for n in args.sizes:
        B = rng.standard_normal((n, n))
        M = (B + B.T) / 2
        times, vals = {}, {}
        for name, mod in backends.items():
            times[name], dec = best_time(lambda: sym_eigen(M, backend=mod), args.repeat)
            vals[name] = dec.eigenvalues
        _report("jacobi", n, times, vals)

    X = rng.standard_normal((args.points, 10))
    for K in (2, 10):
        times, vals = {}, {}
        for name, mod in backends.items():
            times[name], res = best_time(lambda: kmeans(X, K, restarts=3, backend=mod), args.repeat)
            vals[name] = np.array([res.inertia])
        _report(f"kmeans K={K}", args.points, times, vals)


def _report(label, size, times, vals):
    cols = "".join(f"{times[b]:>11.4f}s" for b in times)
    if len(times) == 2:
        speed = times["python"] / times["cython"]
        diff = float(np.max(np.abs(vals["python"] - vals["cython"])))
        print(f"{label:<18}{size:>7}{cols}{speed:>9.1f}x{diff:>11.2e}")
    else:
        print(f"{label:<18}{size:>7}{cols}")


if __name__ == "__main__":
    main()
