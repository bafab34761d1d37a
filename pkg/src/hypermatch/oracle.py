"""Exact perfect-matching decision and maximum matching for small n.

Both searches run in :mod:`hypermatch.kernels` over 64-bit vertex masks and
are resumable, so node and wall-clock budgets are enforced between slices.
A budget overrun is reported as :attr:`Decision.TIMEOUT`, never as an answer.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import ThreeGraph, Triple, TupleSystem, is_matching

DEFAULT_LIMIT = 30
HARD_LIMIT = 62
_SLICE = 1 << 18


class OracleLimitExceeded(ValueError):
    pass


class Decision(enum.Enum):
    EXISTS = "perfect_matching_exists"
    NONE = "no_perfect_matching"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class OracleResult:
    decision: Decision
    witness: TupleSystem | None = None
    max_size: int | None = None
    nodes_explored: int = 0
    elapsed: float = 0.0

    @property
    def exists(self) -> bool:
        return self.decision is Decision.EXISTS


def _incidence_arrays(g: ThreeGraph) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    masks: list[int] = []
    for v in range(g.n):
        for a, b, c in g.incidence[v]:
            masks.append((1 << a) | (1 << b) | (1 << c))
        ptr[v + 1] = len(masks)
    return ptr, np.asarray(masks, dtype=np.int64)


def _mask_to_triple(mask: int) -> Triple:
    verts = [v for v in range(HARD_LIMIT + 1) if (mask >> v) & 1]
    a, b, c = verts
    return (a, b, c)


def _check_limit(g: ThreeGraph, limit: int) -> None:
    if g.n > min(limit, HARD_LIMIT):
        raise OracleLimitExceeded(f"n={g.n} exceeds oracle limit {min(limit, HARD_LIMIT)}")


def _run(step, node_budget: int | None, time_budget: float | None) -> tuple[int, float]:
    """Drive a resumable kernel until it finishes or a budget is hit."""
    start = time.monotonic()
    spent = 0
    while True:
        slice_ = _SLICE
        if node_budget is not None:
            slice_ = max(1, min(slice_, node_budget - spent))
        status = step(slice_)
        spent += slice_
        if status != kernels.BUDGET:
            return status, time.monotonic() - start
        if node_budget is not None and spent >= node_budget:
            return kernels.BUDGET, time.monotonic() - start
        if time_budget is not None and time.monotonic() - start > time_budget:
            return kernels.BUDGET, time.monotonic() - start


def has_perfect_matching(
    g: ThreeGraph,
    *,
    limit: int = DEFAULT_LIMIT,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> OracleResult:
    """Decide whether ``g`` has a perfect matching.

    Backtracks on the lowest-id uncovered vertex, trying its edges among
    uncovered vertices in lexicographic order, and abandons a branch as soon
    as some uncovered vertex has no available edge.
    """
    _check_limit(g, limit)
    if g.n % 3:
        return OracleResult(Decision.NONE)
    ptr, masks = _incidence_arrays(g)
    depth_cap = g.n // 3 + 1
    stack_v = np.zeros(depth_cap, dtype=np.int64)
    stack_pos = np.zeros(depth_cap, dtype=np.int64)
    stack_edge = np.zeros(depth_cap, dtype=np.int64)
    state = np.zeros(4, dtype=np.int64)

    def step(budget: int) -> int:
        return kernels.pm_search(g.n, ptr, masks, stack_v, stack_pos, stack_edge, state, budget)

    status, elapsed = _run(step, node_budget, time_budget)
    nodes = int(state[2])
    if status == kernels.BUDGET:
        return OracleResult(Decision.TIMEOUT, nodes_explored=nodes, elapsed=elapsed)
    if status == kernels.EXHAUSTED:
        return OracleResult(Decision.NONE, nodes_explored=nodes, elapsed=elapsed)
    witness = TupleSystem(tuple(sorted(_mask_to_triple(int(m)) for m in stack_edge[: int(state[0])])))
    if not is_matching(g, witness) or len(witness.vertices) != g.n:
        raise RuntimeError("oracle produced an invalid witness")
    return OracleResult(Decision.EXISTS, witness, g.n // 3, nodes, elapsed)


def max_matching(
    g: ThreeGraph,
    *,
    limit: int = DEFAULT_LIMIT,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> OracleResult:
    """Exact maximum matching by branch and bound.

    Branches on the uncovered, undecided vertex of lowest ``(degree, id)``:
    each of its available edges, then leaving it unmatched. A branch is cut
    when ``size + free // 3`` cannot beat the incumbent.
    """
    _check_limit(g, limit)
    ptr, masks = _incidence_arrays(g)
    order = np.asarray(sorted(range(g.n), key=lambda v: (g.degrees[v], v)), dtype=np.int64)
    cap = g.n + 1
    fv = np.zeros(cap, dtype=np.int64)
    fpos = np.zeros(cap, dtype=np.int64)
    fapp = np.zeros(cap, dtype=np.int64)
    fedge = np.zeros(cap, dtype=np.int64)
    best_edges = np.zeros(cap, dtype=np.int64)

    greedy = _greedy(g)
    state = np.zeros(6, dtype=np.int64)
    state[3] = len(greedy)

    def step(budget: int) -> int:
        return kernels.mm_search(g.n, order, ptr, masks, fv, fpos, fapp, fedge, best_edges, state, budget)

    if g.n == 0:
        return OracleResult(Decision.NONE, TupleSystem(), 0)
    status, elapsed = _run(step, node_budget, time_budget)
    best = int(state[3])
    nodes = int(state[4])
    if status == kernels.BUDGET:
        return OracleResult(Decision.TIMEOUT, nodes_explored=nodes, elapsed=elapsed)
    if best > len(greedy):
        witness = TupleSystem(tuple(sorted(_mask_to_triple(int(m)) for m in best_edges[:best])))
    else:
        witness = TupleSystem(tuple(greedy))
    if not is_matching(g, witness) or len(witness) != best:
        raise RuntimeError("oracle produced an invalid maximum matching")
    decision = Decision.EXISTS if 3 * best == g.n else Decision.NONE
    return OracleResult(decision, witness, best, nodes, elapsed)


def max_matching_size(g: ThreeGraph, **kw) -> tuple[int, TupleSystem]:
    res = max_matching(g, **kw)
    if res.decision is Decision.TIMEOUT:
        raise TimeoutError("maximum matching search exceeded its budget")
    assert res.max_size is not None and res.witness is not None
    return res.max_size, res.witness


def _greedy(g: ThreeGraph) -> list[Triple]:
    used: set[int] = set()
    out = []
    for e in g.edges:
        if not used.intersection(e):
            out.append(e)
            used.update(e)
    return out


# -- obstructions ------------------------------------------------------------

@dataclass(frozen=True)
class Obstruction:
    kind: str
    witness_set: tuple[int, ...]
    reason: str = field(default="")

    def __str__(self) -> str:
        return f"{self.kind} obstruction, A={list(self.witness_set)}: {self.reason}"


def _shadow(g: ThreeGraph) -> list[int]:
    adj = [0] * g.n
    for a, b, c in g.edges:
        adj[a] |= (1 << b) | (1 << c)
        adj[b] |= (1 << a) | (1 << c)
        adj[c] |= (1 << a) | (1 << b)
    return adj


def _max_independent(adj: list[int], n: int, node_budget: int = 2_000_000) -> int:
    """Maximum independent set of a graph given as neighbour bitmasks."""
    best = 0
    nodes = 0

    def go(cand: int, chosen: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            return
        if cand == 0:
            if size > best.bit_count():
                best = chosen
            return
        if size + cand.bit_count() <= best.bit_count():
            return
        # vertex of largest degree inside cand
        v, vdeg = -1, -1
        rest = cand
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            d = (adj[u] & cand).bit_count()
            if d > vdeg:
                v, vdeg = u, d
            rest ^= low
        if vdeg == 0:
            go(0, chosen | cand, size + cand.bit_count())
            return
        go(cand & ~(1 << v) & ~adj[v], chosen | (1 << v), size + 1)
        go(cand & ~(1 << v), chosen, size)

    go((1 << n) - 1, 0, 0)
    return best


def _space(g: ThreeGraph) -> Obstruction | None:
    best = _max_independent(_shadow(g), g.n)
    size = best.bit_count()
    if 3 * size > g.n:
        a = tuple(v for v in range(g.n) if (best >> v) & 1)
        return Obstruction(
            "space",
            a,
            f"every edge meets A in at most one vertex, so covering the {size} vertices "
            f"of A needs {2 * size} > {g.n - size} outside vertices",
        )
    return None


def _gf2_solve(rows: list[int], nvars: int) -> tuple[int | None, list[int]]:
    """Solve ``row . x = rhs`` over GF(2); each row carries rhs at bit ``nvars``."""
    pivots: list[tuple[int, int]] = []
    for r in rows:
        for col, pr in pivots:
            if (r >> col) & 1:
                r ^= pr
        low = r & ((1 << nvars) - 1)
        if low == 0:
            if (r >> nvars) & 1:
                return None, []
            continue
        col = low.bit_length() - 1
        pivots = [(c, p ^ r if (p >> col) & 1 else p) for c, p in pivots]
        pivots.append((col, r))
    pivot_cols = {c for c, _ in pivots}
    particular = 0
    for col, pr in pivots:
        if (pr >> nvars) & 1:
            particular |= 1 << col
    basis = []
    for free in range(nvars):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for col, pr in pivots:
            if (pr >> free) & 1:
                vec |= 1 << col
        basis.append(vec)
    return particular, basis


def _parity(g: ThreeGraph) -> Obstruction | None:
    n = g.n
    rows = [(1 << a) | (1 << b) | (1 << c) for a, b, c in g.edges]
    rows.append(((1 << n) - 1) | (1 << n))
    sol, basis = _gf2_solve(rows, n)
    if sol is None:
        return None
    best = sol
    if len(basis) <= 16:
        for bits in range(1 << len(basis)):
            cand = sol
            for i, vec in enumerate(basis):
                if (bits >> i) & 1:
                    cand ^= vec
            if (cand.bit_count(), cand) < (best.bit_count(), best):
                best = cand
    a = tuple(v for v in range(n) if (best >> v) & 1)
    return Obstruction(
        "parity",
        a,
        f"|A|={len(a)} is odd and every edge meets A in an even number of vertices",
    )


def _cover(g: ThreeGraph, node_budget: int = 200_000) -> Obstruction | None:
    """A transversal smaller than n/3: every matching edge needs its own vertex of it."""
    n = g.n
    edges = [(1 << a) | (1 << b) | (1 << c) for a, b, c in g.edges]
    target = -(-n // 3) - 1  # largest size strictly below n/3
    nodes = 0

    def go(cover: int, size: int) -> int | None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            return None
        for em in edges:
            if em & cover == 0:
                break
        else:
            return cover
        if size == target:
            return None
        rest = em
        while rest:
            low = rest & -rest
            got = go(cover | low, size + 1)
            if got is not None:
                return got
            rest ^= low
        return None

    if target < 0:
        return None
    found = go(0, 0)
    if found is None:
        return None
    a = tuple(v for v in range(n) if (found >> v) & 1)
    return Obstruction(
        "cover",
        a,
        f"every edge meets A and |A|={len(a)} < n/3={n // 3}, so at most {len(a)} disjoint edges exist",
    )


def certify_no_pm(g: ThreeGraph) -> Obstruction | None:
    """Search for a human-readable reason why ``g`` has no perfect matching.

    Tries, in order: divisibility, the space obstruction (a set whose vertices
    pairwise never share an edge, too large to cover), the parity obstruction
    (an odd set met evenly by every edge) and a small transversal. Returns
    ``None`` when none applies; the certifier is incomplete by design.
    """
    if g.n % 3:
        return Obstruction("divisibility", (), f"n={g.n} is not divisible by 3")
    for attempt in (_space, _parity, _cover):
        found = attempt(g)
        if found is not None:
            return found
    return None
