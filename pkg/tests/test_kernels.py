import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from hypermatch import _accel, kernels
from hypermatch.oracle import _incidence_arrays
from hypermatch.tiers import TRIPLE_TYPES_39, t_tier
from hypermatch.verifier import good_mask_39, masks_with_at_least


def test_release_table_paths_agree():
    assert np.array_equal(np.asarray(kernels._release_table_nb()), np.asarray(kernels._release_table_np()))


@given(st.integers(0, 511), st.sampled_from(TRIPLE_TYPES_39), st.sampled_from(TRIPLE_TYPES_39))
def test_count_failures_paths_agree(k, le, lf):
    table = kernels.cached_release_table()
    idx = masks_with_at_least(bin(k).count("1"))
    good = good_mask_39(le, lf)
    a = kernels._count_failures_nb(table, idx, good)
    b = kernels._count_failures_np(table, idx, good)
    assert tuple(map(int, a)) == tuple(map(int, b))


def test_lattice_paths_agree():
    k = len(TRIPLE_TYPES_39)
    w = np.asarray([[t_tier(a, b) - 4 for b in TRIPLE_TYPES_39] for a in TRIPLE_TYPES_39], dtype=np.int64)
    jw = np.arange(k, dtype=np.int64) % 4
    tw = 3 - jw
    for m in (0, 1, 4, 6):
        a = kernels._lattice_nb(w, jw, tw, m)
        b = kernels._lattice_np(w, jw, tw, m)
        assert int(a[0]) == int(b[0]) and int(a[1]) == int(b[1])


def _pm(impl, g):
    ptr, masks = _incidence_arrays(g)
    cap = g.n // 3 + 1
    st_ = np.zeros(4, np.int64)
    se = np.zeros(cap, np.int64)
    status = impl(g.n, ptr, masks, np.zeros(cap, np.int64), np.zeros(cap, np.int64), se, st_, 1 << 40)
    return int(status), sorted(int(x) for x in se[: int(st_[0])]) if status == kernels.FOUND else None


@settings(max_examples=100, deadline=None)
@given(graphs(min_n=3, max_n=9))
def test_pm_search_paths_agree(g):
    if g.n % 3:
        return
    assert _pm(kernels._pm_search_nb, g) == _pm(kernels._pm_search_py, g)


def test_dispatch_matches_flag():
    want = kernels._release_table_nb if _accel.USE_NUMBA else kernels._release_table_np
    assert kernels.release_table is want


@pytest.mark.slow
def test_numpy_path_in_subprocess():
    code = (
        "from hypermatch import _accel, kernels\n"
        "from hypermatch.verifier import verify_fact_xy, verify_partition_counts\n"
        "from hypermatch.forge import gen_space_barrier\n"
        "from hypermatch.oracle import max_matching\n"
        "assert not _accel.USE_NUMBA and kernels.pm_search is kernels._pm_search_py\n"
        "assert verify_fact_xy().ok and verify_partition_counts().ok\n"
        "print(max_matching(gen_space_barrier(12)).max_size)\n"
    )
    env = {**os.environ, "HYPERMATCH_NO_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "3"
