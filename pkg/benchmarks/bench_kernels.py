"""Compare the compiled and pure-NumPy analysis kernels.

Usage: python benchmarks/bench_kernels.py [--sizes 100,1000,10000] [--repeat 200]
"""

import argparse
import time

import numpy as np

from mixsurv._kernels import _pykernels

try:
    from mixsurv._kernels import _ckernels
except ImportError:
    _ckernels = None


def make_arm(rng, n):
    t = rng.exponential(5.0, n)
    tied = rng.random(n) < 0.2
    t[tied] = np.round(t[tied], 1)
    e = (rng.random(n) < 0.7).astype(np.float64)
    order = np.argsort(t, kind="stable")
    return t[order], e[order]


def bench(fn, args, repeat):
    fn(*args)  # warm-up
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,1000,10000")
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    backends = [("numpy", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not available; benchmarking numpy only")

    print(f"{'kernel':<14} {'n':>7} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")
    for n in sizes:
        t, e = make_arm(rng, n)
        g = (rng.random(n) < 0.5).astype(np.float64)
        for label, call_args in (
            ("arm_rmst_var", (t, e, 6.0)),
            ("logrank_stat", (t, e, g)),
        ):
            times = [bench(getattr(mod, label), call_args, args.repeat) for _, mod in backends]
            ratio = times[0] / times[-1] if len(times) > 1 else float("nan")
            cells = " ".join(f"{x * 1e6:>10.1f}us" for x in times)
            print(f"{label:<14} {n:>7} {cells}  {ratio:>6.2f}x")


if __name__ == "__main__":
    main()
