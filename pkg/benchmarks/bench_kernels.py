"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the four hot kernels on a batch of n=3 braid-image elements and a
full n=2 projective closure under each backend.
"""
import argparse
import time

import numpy as np

from isingbraid import braid, kernels
from isingbraid.analysis import braid_closure
from isingbraid.cyclotomic import _weights


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def _batch(size, seed=0):
    rng = np.random.default_rng(seed)
    gens = braid.generators(3)
    num = np.stack([gens[i].num for i in rng.integers(0, len(gens), size)])
    k = np.array([gens[i].k for i in rng.integers(0, len(gens), size)], dtype=np.int64)
    return num, k


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=4096)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the numpy reference is available")
    num, k = _batch(args.size)
    g = braid.generators(3)[3]
    prod = backends["python"].matmul_batch(num, num)
    w = _weights(num[0].size)
    flat = num.reshape(len(num), -1)

    cases = {
        "left_mul_batch": lambda be: be.left_mul_batch(g.num, g.k, num, k),
        "left_mul_batch projective": lambda be: be.left_mul_batch(g.num, g.k, num, k, True),
        "reduce_batch": lambda be: be.reduce_batch(prod, 2 * k),
        "projective_canonical_batch": lambda be: be.projective_canonical_batch(num),
        "hash_batch": lambda be: be.hash_batch(flat, k, w),
    }
    print(f"batch of {args.size} 8x8 matrices, best of {args.repeat}")
    print(f"{'kernel':<30}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases.items():
        t = {name: _best(lambda: fn(be), args.repeat) for name, be in backends.items()}
        speed = f"{t['python'] / t['cython']:.1f}x" if "cython" in t else "-"
        print(f"{label:<30}" + "".join(f"{v * 1e3:>10.2f}ms" for v in t.values()) + f"{speed:>10}")

    saved = kernels.impl
    t = {}
    try:
        for name, be in backends.items():
            kernels.impl = be
            t[name] = _best(lambda: braid_closure(2), max(1, args.repeat // 2))
    finally:
        kernels.impl = saved
    speed = f"{t['python'] / t['cython']:.1f}x" if "cython" in t else "-"
    print(f"{'closure n=2 (11520)':<30}" + "".join(f"{v * 1e3:>10.2f}ms" for v in t.values()) + f"{speed:>10}")


if __name__ == "__main__":
    main()
