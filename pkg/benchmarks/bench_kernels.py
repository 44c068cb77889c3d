"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from qhistory import _kernels_py, kernels

try:
    from qhistory import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def slot_case(rng, n_slots, alt):
    m = 1 + (n_slots - 2) * alt + 1
    v = rng.normal(size=(m, 8)) + 1j * rng.normal(size=(m, 8))
    gram = np.conj(v) @ v.T
    groups = [[0]] + [list(range(1 + k * alt, 1 + (k + 1) * alt)) for k in range(n_slots - 2)] + [[m - 1]]
    idx = np.array([i for g in groups for i in g], dtype=np.int64)
    off = np.zeros(len(groups) + 1, dtype=np.int64)
    np.cumsum([len(g) for g in groups], out=off[1:])
    return gram, idx, off


def sandwich_case(rng, n, dim):
    return rng.normal(size=(n, dim, dim)) + 1j * rng.normal(size=(n, dim, dim))


def bench(label, fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat)), label


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    cases = []
    for n_slots, alt in ((6, 3), (9, 3), (10, 4)):
        g, i, o = slot_case(rng, n_slots, alt)
        paths = alt ** (n_slots - 2)
        cases.append((f"slot paths  {n_slots} slots x{alt} ({paths} paths)", "slot_path_amplitudes", (g, i, o)))
    for n, dim in ((6, 8), (6, 32)):
        cases.append((f"sandwich    {n} slots, dim {dim}", "sandwich", (sandwich_case(rng, n, dim),)))
    values = rng.normal(size=200_000) + 0j
    cases.append(("ordered sum 200000 terms", "ordered_sum", (values,)))

    print(f"backend selected at import: {kernels.BACKEND}")
    print(f"{'case':<42} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}")
    for label, name, fargs in cases:
        t_py, _ = bench(label, lambda: getattr(_kernels_py, name)(*fargs), args.repeat)
        if _kernels_c is None:
            print(f"{label:<42} {t_py:>12.5f} {'n/a':>12} {'n/a':>9}")
            continue
        t_c, _ = bench(label, lambda: getattr(_kernels_c, name)(*fargs), args.repeat)
        print(f"{label:<42} {t_py:>12.5f} {t_c:>12.5f} {t_py / t_c:>8.1f}x")
    for n, dim in ((6, 8), (6, 32)):
        stack = sandwich_case(rng, n, dim)
        t, _ = bench("", lambda: kernels.sandwich(stack), args.repeat)
        print(f"{'dispatched sandwich, dim ' + str(dim):<42} {t:>12.5f}")


if __name__ == "__main__":
    main()
