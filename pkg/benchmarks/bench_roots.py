"""Compare the compiled and pure-Python Aberth kernels.

The batched fiber solve is the pipeline's hot loop (every grid node of
the coincidence-graph tracer is one degree-n root solve), so this is the
kernel worth compiling.  Run:

    python3 benchmarks/bench_roots.py [--batches N] [--degree D]
"""

import argparse
import time

import numpy as np

from curvebraid import _aberth_py


def load_kernels():
    kernels = {"python": _aberth_py.aberth_batch}
    try:
        from curvebraid import _aberth

        kernels["cython"] = _aberth.aberth_batch
    except ImportError:
        pass
    return kernels


def bench(fn, coeffs, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        roots, ok = fn(coeffs, 200, 1e-13)
        best = min(best, time.perf_counter() - t0)
    assert ok.all()
    return best, roots


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batches", type=int, default=20000)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    shape = (args.batches, args.degree + 1)
    coeffs = rng.normal(size=shape) + 1j * rng.normal(size=shape)

    kernels = load_kernels()
    results = {}
    for name, fn in sorted(kernels.items()):
        dt, roots = bench(fn, coeffs)
        results[name] = (dt, roots)
        rate = args.batches / dt
        print(f"{name:8s} {dt*1e3:8.1f} ms   {rate:10.0f} solves/s")

    if len(results) == 2:
        (dt_c, rc), (dt_p, rp) = results["cython"], results["python"]
        # same roots as sets, per batch row
        d = np.abs(np.sort_complex(rc) - np.sort_complex(rp))
        print(f"max root deviation between backends: {d.max():.2e}")
        print(f"speedup cython/python: {dt_p / dt_c:.1f}x")
    else:
        print("compiled backend unavailable; benchmarked pure python only")


if __name__ == "__main__":
    main()
