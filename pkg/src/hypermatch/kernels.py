"""Hot inner loops, each with a numba path and a numpy/Python path.

Cross pairs of two triples ``e`` and ``f`` are encoded as bits ``3*a + b``
where ``a`` indexes ``e`` and ``b`` indexes ``f``; a pair link is therefore a
9-bit mask. A released pair ``(e[r], f[c])`` uses the same encoding.

The public names at the bottom dispatch on :data:`hypermatch._accel.USE_NUMBA`.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ._accel import USE_NUMBA, njit

N_MASKS = 512

FOUND = 1
EXHAUSTED = 0
BUDGET = -1


# -- release table ---------------------------------------------------------

@njit
def _release_table_nb():
    table = np.zeros((512, 512), dtype=np.int32)
    for lx in range(512):
        for ly in range(512):
            acc = 0
            for i in range(9):
                if (lx >> i) & 1:
                    ri = i // 3
                    ci = i % 3
                    for j in range(9):
                        if (ly >> j) & 1:
                            rj = j // 3
                            cj = j % 3
                            if ri != rj and ci != cj:
                                acc |= 1 << ((3 - ri - rj) * 3 + (3 - ci - cj))
            table[lx, ly] = acc
    return table


def _release_table_np():
    has = (np.arange(N_MASKS)[:, None] >> np.arange(9)[None, :]) & 1
    table = np.zeros((N_MASKS, N_MASKS), dtype=np.int32)
    for i in range(9):
        ri, ci = divmod(i, 3)
        for j in range(9):
            rj, cj = divmod(j, 3)
            if ri == rj or ci == cj:
                continue
            bit = 1 << ((3 - ri - rj) * 3 + (3 - ci - cj))
            table |= np.outer(has[:, i], has[:, j]).astype(np.int32) * bit
    return table


# -- label failure counting -----------------------------------------------

@njit
def _count_failures_nb(table, idx, good):
    count = 0
    first_a = -1
    first_b = -1
    for a in idx:
        for b in idx:
            if table[a, b] & good == 0:
                if count == 0:
                    first_a = a
                    first_b = b
                count += 1
    return count, first_a, first_b


def _count_failures_np(table, idx, good):
    sub = table[np.ix_(idx, idx)]
    fails = (sub & good) == 0
    count = int(fails.sum())
    if count == 0:
        return 0, -1, -1
    a, b = np.unravel_index(int(np.argmax(fails)), fails.shape)
    return count, int(idx[a]), int(idx[b])


# -- counting-lemma lattice ------------------------------------------------

@njit
def _lattice_nb(weights, little_w, small_w, max_m):
    k = weights.shape[0]
    c = np.zeros(k, dtype=np.int64)
    first = np.full(k, -1, dtype=np.int64)
    total = 0
    bad = 0
    for m in range(max_m + 1):
        for q in range(k):
            c[q] = 0
        c[0] = m
        while True:
            total += 1
            s = 0
            j = 0
            t = 0
            for a in range(k):
                ca = c[a]
                if ca == 0:
                    continue
                j += little_w[a] * ca
                t += small_w[a] * ca
                s += weights[a, a] * (ca * (ca - 1) // 2)
                for b in range(a + 1, k):
                    s += weights[a, b] * ca * c[b]
            if s > j * t:
                if bad == 0:
                    for q in range(k):
                        first[q] = c[q]
                bad += 1
            i = k - 2
            while i >= 0 and c[i] == 0:
                i -= 1
            if i < 0:
                break
            c[i] -= 1
            tail = c[k - 1]
            c[k - 1] = 0
            c[i + 1] = tail + 1
    return total, bad, first


def compositions(m: int, k: int) -> np.ndarray:
    """All weak compositions of ``m`` into ``k`` parts, one per row."""
    rows = []
    for bars in combinations(range(m + k - 1), k - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(m + k - 2 - prev)
        rows.append(row)
    return np.asarray(rows, dtype=np.int64).reshape(-1, k)


def _lattice_np(weights, little_w, small_w, max_m):
    k = weights.shape[0]
    diag = np.diag(weights)
    total = 0
    bad = 0
    first = np.full(k, -1, dtype=np.int64)
    for m in range(max_m + 1):
        c = compositions(m, k)
        quad = np.einsum("ra,ab,rb->r", c, weights, c)
        s = (quad - c @ diag) // 2
        jt = (c @ little_w) * (c @ small_w)
        viol = s > jt
        total += c.shape[0]
        nb = int(viol.sum())
        if nb and bad == 0:
            first = c[int(np.argmax(viol))].copy()
        bad += nb
    return total, bad, first


# -- exact oracle: perfect matching decision ------------------------------

def _pm_search_py(n, inc_ptr, inc_mask, stack_v, stack_pos, stack_edge, state, budget):
    # state = [depth, covered, nodes, started]
    full = (1 << n) - 1
    depth = state[0]
    covered = state[1]
    nodes = state[2]
    if state[3] == 0:
        state[3] = 1
        if n == 0:
            state[0] = 0
            return 1
        v = 0
        while (covered >> v) & 1:
            v += 1
        stack_v[0] = v
        stack_pos[0] = inc_ptr[v]
        depth = 0
    steps = 0
    while True:
        if steps >= budget:
            state[0] = depth
            state[1] = covered
            state[2] = nodes
            return -1
        v = stack_v[depth]
        p = stack_pos[depth]
        end = inc_ptr[v + 1]
        advanced = False
        while p < end:
            em = inc_mask[p]
            p += 1
            if em & covered:
                continue
            nodes += 1
            steps += 1
            covered |= em
            if covered == full:
                stack_edge[depth] = em
                state[0] = depth + 1
                state[1] = covered
                state[2] = nodes
                return 1
            # prune: every uncovered vertex needs an available edge
            dead = False
            for u in range(n):
                if (covered >> u) & 1:
                    continue
                ok = False
                for q in range(inc_ptr[u], inc_ptr[u + 1]):
                    if inc_mask[q] & covered == 0:
                        ok = True
                        break
                if not ok:
                    dead = True
                    break
            if dead:
                covered ^= em
                continue
            stack_pos[depth] = p
            stack_edge[depth] = em
            depth += 1
            nv = 0
            while (covered >> nv) & 1:
                nv += 1
            stack_v[depth] = nv
            stack_pos[depth] = inc_ptr[nv]
            advanced = True
            break
        if not advanced:
            depth -= 1
            if depth < 0:
                state[0] = 0
                state[1] = 0
                state[2] = nodes
                return 0
            covered ^= stack_edge[depth]


_pm_search_nb = njit(_pm_search_py)


# -- exact oracle: maximum matching (branch and bound) ---------------------

def _mm_search_py(n, order, inc_ptr, inc_mask, fv, fpos, fapp, fedge, best_edges, state, budget):
    # state = [depth, blocked, size, best, nodes, started]
    full = (1 << n) - 1
    depth = state[0]
    blocked = state[1]
    size = state[2]
    best = state[3]
    nodes = state[4]
    steps = 0
    if state[5] == 0:
        state[5] = 1
        depth = 0
        v = -1
        for r in range(n):
            if not (blocked >> order[r]) & 1:
                v = order[r]
                break
        if v < 0:
            state[3] = 0
            return 0
        fv[0] = v
        fpos[0] = inc_ptr[v]
    while True:
        if steps >= budget:
            state[0] = depth
            state[1] = blocked
            state[2] = size
            state[3] = best
            state[4] = nodes
            return -1
        steps += 1
        v = fv[depth]
        p = fpos[depth]
        end = inc_ptr[v + 1]
        applied = 0
        is_edge = 0
        while p < end:
            em = inc_mask[p]
            p += 1
            if em & blocked == 0:
                applied = em
                is_edge = 1
                break
        if applied == 0 and p == end:
            applied = 1 << v
            p = end + 1
        if applied == 0:
            # every option of this frame has been tried
            depth -= 1
            if depth < 0:
                state[0] = 0
                state[3] = best
                state[4] = nodes
                return 0
            blocked ^= fapp[depth]
            size -= fedge[depth]
            continue
        fpos[depth] = p
        fapp[depth] = applied
        fedge[depth] = is_edge
        blocked |= applied
        size += is_edge
        nodes += 1
        nv = -1
        for r in range(n):
            if not (blocked >> order[r]) & 1:
                nv = order[r]
                break
        prune = False
        if nv < 0:
            if size > best:
                best = size
                k = 0
                for d in range(depth + 1):
                    if fedge[d] == 1:
                        best_edges[k] = fapp[d]
                        k += 1
            prune = True
        else:
            free = full & ~blocked
            cnt = 0
            while free:
                free &= free - 1
                cnt += 1
            if size + cnt // 3 <= best:
                prune = True
        if prune:
            blocked ^= applied
            size -= is_edge
            continue
        depth += 1
        fv[depth] = nv
        fpos[depth] = inc_ptr[nv]


_mm_search_nb = njit(_mm_search_py)


# -- dispatch ---------------------------------------------------------------

if USE_NUMBA:
    release_table = _release_table_nb
    count_failures = _count_failures_nb
    lattice_check = _lattice_nb
    pm_search = _pm_search_nb
    mm_search = _mm_search_nb
else:
    release_table = _release_table_np
    count_failures = _count_failures_np
    lattice_check = _lattice_np
    pm_search = _pm_search_py
    mm_search = _mm_search_py

_RELEASE_CACHE: list[np.ndarray] = []


def cached_release_table() -> np.ndarray:
    if not _RELEASE_CACHE:
        _RELEASE_CACHE.append(np.asarray(release_table()))
    return _RELEASE_CACHE[0]
