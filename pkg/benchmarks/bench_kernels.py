"""Numba vs numpy/Python timings for the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths are imported side by side from ``hypermatch.kernels`` regardless
of ``HYPERMATCH_NO_NUMBA``; compiled timings exclude the first (JIT) call.
"""

import argparse
import time

import numpy as np

from hypermatch import kernels
from hypermatch.forge import gen_complete, gen_parity_barrier, gen_space_barrier
from hypermatch.oracle import _incidence_arrays
from hypermatch.verifier import good_mask_39, masks_with_at_least


def best_of(fn, repeat):
    out = None
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def pm_case(g, impl):
    ptr, masks = _incidence_arrays(g)
    cap = g.n // 3 + 1

    def run():
        sv = np.zeros(cap, np.int64)
        sp = np.zeros(cap, np.int64)
        se = np.zeros(cap, np.int64)
        st = np.zeros(4, np.int64)
        return impl(g.n, ptr, masks, sv, sp, se, st, 1 << 40)

    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    table = np.asarray(kernels._release_table_np())
    idx = masks_with_at_least(4)
    good = good_mask_39((0, 0, 0), (2, 2, 2))
    w = np.zeros((10, 10), np.int64)
    jw = np.arange(10, dtype=np.int64) % 4
    tw = 3 - jw
    cases = {
        "release_table": (kernels._release_table_nb, kernels._release_table_np, ()),
        "count_failures": (kernels._count_failures_nb, kernels._count_failures_np, (table, idx, good)),
        "lattice m<=8": (kernels._lattice_nb, kernels._lattice_np, (w, jw, tw, 8)),
    }
    print(f"{'kernel':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, (nb, np_, a) in cases.items():
        nb(*a)  # compile
        t_nb, _ = best_of(lambda: nb(*a), args.repeat)
        t_np, _ = best_of(lambda: np_(*a), args.repeat)
        print(f"{name:<24}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>10.1f}")

    for label, g in [("pm space n=15", gen_space_barrier(15)),
                     ("pm parity n=15", gen_parity_barrier(15)),
                     ("pm complete n=30", gen_complete(30))]:
        pm_case(g, kernels._pm_search_nb)()
        t_nb, r1 = best_of(pm_case(g, kernels._pm_search_nb), args.repeat)
        t_py, r2 = best_of(pm_case(g, kernels._pm_search_py), args.repeat)
        assert r1 == r2
        print(f"{label:<24}{t_nb:>12.4f}{t_py:>12.4f}{t_py / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
