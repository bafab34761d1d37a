import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_has_pm, random_graph
from hypermatch.core import ThreeGraph, is_matching, leave
from hypermatch.forge import gen_complete, gen_parity_barrier, gen_planted_profile, gen_space_barrier
from hypermatch.pipeline import PipelineOptions, Stage, find_perfect_matching, run_almost
from hypermatch.validate import validate

G = Fraction(1, 100)


def test_complete_done():
    out = find_perfect_matching(gen_complete(12), G, 0)
    assert out.stage is Stage.DONE and out.success
    assert validate(12, gen_complete(12).edges, out.matching.tuples).perfect
    assert out.overrides == {"absorbing_budget": "0 -> 1"}
    d = out.as_dict()
    assert d["stage"] == "Done" and d["schema_version"] == 1


def test_space_barrier_stops_at_profile():
    g = gen_space_barrier(12)
    out = find_perfect_matching(g, G, 0)
    assert out.stage is Stage.PROFILE_CHECK and not out.success and out.matching is None
    forced = find_perfect_matching(g, G, 0, PipelineOptions(force=True))
    assert forced.stage is Stage.ORACLE_FALLBACK and forced.no_pm and not forced.success
    assert forced.obstruction.startswith("space")


def test_parity_barrier_never_done():
    out = find_perfect_matching(gen_parity_barrier(9), G, 0, PipelineOptions(force=True))
    assert out.stage is not Stage.DONE and out.no_pm


def test_divisibility():
    out = find_perfect_matching(gen_complete(10), G, 0)
    assert out.no_pm and not out.success


def test_no_fallback_when_disabled():
    out = find_perfect_matching(gen_space_barrier(12), G, 0, PipelineOptions(force=True, oracle_fallback=False))
    assert out.stage is not Stage.ORACLE_FALLBACK and not out.success


@pytest.mark.parametrize("n, seed", [(12, 0), (15, 1), (18, 2)])
def test_planted_valid_and_deterministic(n, seed):
    g = gen_planted_profile(n, Fraction(1, 20), 1, seed)
    a = find_perfect_matching(g, Fraction(1, 20), 1, PipelineOptions(seed=seed))
    b = find_perfect_matching(g, Fraction(1, 20), 1, PipelineOptions(seed=seed))
    assert a.as_dict() == b.as_dict()
    assert a.success and validate(n, g.edges, a.matching.tuples).perfect


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_graphs_never_lie(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.choice([6, 9]), rng.choice([0.2, 0.5, 0.9]))
    out = find_perfect_matching(g, G, 0, PipelineOptions(force=True))
    truth = naive_has_pm(g.n, g.edges)
    if out.success:
        assert truth and validate(g.n, g.edges, out.matching.tuples).perfect
    else:
        assert out.stage is not Stage.DONE
    if out.no_pm:
        assert not truth


def test_run_almost_complete():
    res = run_almost(gen_complete(15), G)
    assert res.size_target == 4 and res.size_target_met and res.leave_target_met
    assert is_matching(gen_complete(15), res.matching)


def test_run_almost_reports_shortfall():
    g = ThreeGraph.from_edges(12, [(0, 1, 2)])
    res = run_almost(g, G)
    assert len(res.matching) == 1 and not res.size_target_met
    assert res.leave_size == len(leave(g, res.matching)) == 9
