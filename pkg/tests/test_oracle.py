import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, naive_has_pm, naive_max_matching, random_graph
from hypermatch.core import ThreeGraph, is_matching
from hypermatch.forge import (
    gen_complete,
    gen_intro_barrier,
    gen_parity_barrier,
    gen_space_barrier,
)
from hypermatch.oracle import (
    Decision,
    OracleLimitExceeded,
    certify_no_pm,
    has_perfect_matching,
    max_matching,
    max_matching_size,
)


def test_complete_six():
    res = has_perfect_matching(gen_complete(6))
    assert res.decision is Decision.EXISTS
    assert set(res.witness.tuples) == {(0, 1, 2), (3, 4, 5)}


def test_trivial_cases():
    assert has_perfect_matching(ThreeGraph.empty(0)).exists
    assert has_perfect_matching(gen_complete(7)).decision is Decision.NONE
    assert has_perfect_matching(ThreeGraph.empty(6)).decision is Decision.NONE
    assert max_matching(ThreeGraph.empty(0)).max_size == 0
    assert max_matching(ThreeGraph.empty(5)).max_size == 0


@pytest.mark.parametrize(
    "g, best",
    [
        (gen_intro_barrier(6), 1),
        (gen_intro_barrier(12), 3),
        (gen_space_barrier(12), 3),
        (gen_space_barrier(15), 4),
        (gen_parity_barrier(9), 2),
        (gen_parity_barrier(15), 4),
    ],
)
def test_barriers(g, best):
    assert has_perfect_matching(g).decision is Decision.NONE
    size, witness = max_matching_size(g)
    assert size == best and is_matching(g, witness) and len(witness) == best


@settings(max_examples=300, deadline=None)
@given(graphs(max_n=9))
def test_agrees_with_naive(g):
    res = has_perfect_matching(g)
    assert res.exists == naive_has_pm(g.n, g.edges)
    if res.exists:
        assert is_matching(g, res.witness) and len(res.witness.vertices) == g.n
    mm = max_matching(g)
    assert mm.max_size == naive_max_matching(g.n, g.edges)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_max_monotone_under_edge_addition(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 10, 0.1)
    before = max_matching(g).max_size
    missing = [e for e in combinations(range(10), 3) if not g.has_edge(*e)]
    extra = rng.sample(missing, min(5, len(missing)))
    h = ThreeGraph.from_edges(10, list(g.edges) + extra)
    assert max_matching(h).max_size >= before


def test_timeout_reports_no_witness():
    g = gen_space_barrier(24)
    res = has_perfect_matching(g, node_budget=1)
    assert res.decision is Decision.TIMEOUT and res.witness is None
    assert max_matching(g, node_budget=1).decision is Decision.TIMEOUT
    with pytest.raises(TimeoutError):
        max_matching_size(g, node_budget=1)


def test_limit():
    with pytest.raises(OracleLimitExceeded):
        has_perfect_matching(ThreeGraph.empty(33))
    assert has_perfect_matching(ThreeGraph.empty(33), limit=40).decision is Decision.NONE
    with pytest.raises(OracleLimitExceeded):
        has_perfect_matching(ThreeGraph.empty(63), limit=80)


def test_obstructions():
    sp = certify_no_pm(gen_space_barrier(12))
    assert sp.kind == "space" and len(sp.witness_set) == 5
    par = certify_no_pm(gen_parity_barrier(9))
    assert par.kind == "parity" and len(par.witness_set) % 2 == 1
    for e in gen_parity_barrier(9).edges:
        assert len(set(e) & set(par.witness_set)) % 2 == 0
    assert certify_no_pm(ThreeGraph.empty(7)).kind == "divisibility"
    assert certify_no_pm(gen_complete(9)) is None
    assert str(sp)


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=3, max_n=9))
def test_obstruction_implies_no_pm(g):
    if certify_no_pm(g) is not None:
        assert not naive_has_pm(g.n, g.edges)
