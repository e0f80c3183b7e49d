"""Benchmark the compiled pairwise kernels against the pure-numpy fallback.

Run: python scripts/bench_backends.py [--sizes 200,400,800,1600]
"""

import argparse
import time

import numpy as np

from biarray._core import _numpy_backend


def _compiled():
    try:
        from biarray._core import _greens
    except ImportError:
        return None
    return _greens


def bench(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="200,400,800,1600")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    compiled = _compiled()
    if compiled is None:
        print("compiled extension not available; numpy fallback only")

    rng = np.random.default_rng(3)
    print(f"{'n':>6} {'kernel':>10} {'pair [s]':>10} {'field [s]':>10}")
    for n in sizes:
        pos = rng.uniform(-5, 5, (n, 3))
        amps = rng.normal(size=n) + 1j * rng.normal(size=n)
        pts = rng.uniform(6, 10, (n, 3))
        rows = [("numpy", _numpy_backend)]
        if compiled is not None:
            rows.append(("compiled", compiled))
        results = {}
        for name, mod in rows:
            tp = bench(mod.pair_coupling_matrix, pos)
            tf = bench(mod.scattered_field, pos, amps, pts)
            results[name] = (tp, tf)
            print(f"{n:>6} {name:>10} {tp:>10.4f} {tf:>10.4f}")
        if compiled is not None:
            sp = results["numpy"][0] / results["compiled"][0]
            sf = results["numpy"][1] / results["compiled"][1]
            print(f"{'':>6} {'speedup':>10} {sp:>9.1f}x {sf:>9.1f}x")
        if compiled is not None:
            a = _numpy_backend.pair_coupling_matrix(pos)
            b = compiled.pair_coupling_matrix(pos)
            assert np.max(np.abs(a - b)) < 1e-12


if __name__ == "__main__":
    main()
