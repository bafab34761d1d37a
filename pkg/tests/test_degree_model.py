from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from hypermatch.core import ThreeGraph
from hypermatch.degree_model import (
    DegreeProfile,
    InvalidProfile,
    ProfileKind,
    VertexClass,
    classify,
    index_map,
    max_step,
    parse_rational,
    relaxed_classes,
    satisfies_profile,
    step_valid,
    threshold_value,
)
from hypermatch.forge import gen_parity_barrier, gen_space_barrier

G = Fraction(1, 100)


def test_index_map_examples():
    # degrees (3, 1, 1, 2, 2): ties go to the smaller id
    g = ThreeGraph.from_edges(5, [(0, 1, 3), (0, 2, 4), (0, 3, 4)])
    assert g.degrees == (3, 1, 1, 2, 2)
    assert index_map(g).order == (1, 2, 3, 4, 0)
    assert index_map(ThreeGraph.complete(7)).order == tuple(range(7))
    im = index_map(gen_parity_barrier(9))
    assert sorted(im.rank(v) for v in range(3)) == [1, 2, 3]


@given(graphs())
def test_index_map_bijective(g):
    im = index_map(g)
    assert sorted(im.order) == list(range(g.n))
    for v in range(g.n):
        assert im.order[im.rank(v) - 1] == v
    keys = [(g.degrees[v], v) for v in im.order]
    assert keys == sorted(keys)


def test_classify_examples():
    assert set(classify(ThreeGraph.complete(9), G).values()) == {VertexClass.BIG}
    cls = classify(gen_parity_barrier(9), G)
    # deg 12 and 13 both fall below (4/9 + 1/100) * 36 = 16.36
    assert all(cls[v] is VertexClass.SMALL for v in range(9))


def test_classify_boundary_is_exact():
    # n = 9: (5/9 + 1/36) * 36 = 21 exactly, so degree 21 is Big
    g = ThreeGraph.complete(9)
    gamma = Fraction(1, 36)
    assert (Fraction(5, 9) + gamma) * 36 == 21
    drop = [e for e in g.edges if 0 in e][:7]
    h = ThreeGraph.from_edges(9, [e for e in g.edges if e not in drop])
    assert h.degrees[0] == 21
    assert classify(h, gamma)[0] is VertexClass.BIG


def test_relaxed_big_cut():
    g = gen_space_barrier(12)
    assert relaxed_classes(g, Fraction(1, 10))[11] is VertexClass.BIG


def test_threshold_examples():
    assert threshold_value(ProfileKind.MAIN, 12, G, 2, 2) == Fraction(1, 3) * 66 + G * 66 + 4
    assert float(threshold_value(ProfileKind.MAIN, 12, G, 2, 2)) == pytest.approx(26.66)
    assert threshold_value(ProfileKind.MAIN, 12, G, 2, 5) == (Fraction(5, 9) + G) * 66
    assert threshold_value(ProfileKind.ABSORBING, 12, G, 2, 5) == Fraction(5, 9) * 66
    assert threshold_value(ProfileKind.ALMOST, 12, G, 1, 3) == (Fraction(4, 9) + 4 * G) * 66


def test_rank_one_uses_first_step():
    assert threshold_value(ProfileKind.MAIN, 12, G, 2, 1) == (Fraction(1, 3) + G) * 66 + 2


def test_satisfies_examples():
    assert satisfies_profile(ThreeGraph.complete(12), DegreeProfile(G, 1))
    res = satisfies_profile(gen_space_barrier(12), DegreeProfile(G, 1))
    assert not res and res.violating_rank <= 4
    res = satisfies_profile(ThreeGraph.empty(12), DegreeProfile(G, 0))
    assert not res and res.violating_rank == 1


def test_invalid_t():
    with pytest.raises(InvalidProfile):
        satisfies_profile(ThreeGraph.complete(12), DegreeProfile(G, 3))


@pytest.mark.parametrize("n, expect", [(12, 2), (15, 2), (18, 3), (21, 3)])
def test_max_step_main(n, expect):
    assert max_step(ProfileKind.MAIN, n) == expect


@given(st.integers(1, 300))
def test_step_bounds_match_floats_away_from_boundary(n):
    t = max_step(ProfileKind.MAIN, n)
    assert 3 * (n - t) ** 2 >= 2 * n * n and 3 * (n - t - 1) ** 2 < 2 * n * n
    a = max_step(ProfileKind.ALMOST, n)
    assert 18 * a * a <= n * n < 18 * (a + 1) ** 2


@given(st.integers(3, 200), st.integers(1, 50))
def test_almost_bound_inequality(n, gamma_den):
    # beyond the bound, the t-th stepped threshold exceeds the flat 4/9 band
    t = max_step(ProfileKind.ALMOST, n) + 1
    gamma = Fraction(1, gamma_den)
    c = comb(n, 2)
    assert (Fraction(1, 3) + 4 * gamma) * c + t * t > (Fraction(4, 9) + 4 * gamma) * c


@given(graphs(min_n=6, max_n=9), st.integers(1, 20), st.integers(1, 20))
def test_profile_monotone_in_gamma(g, a, b):
    lo, hi = sorted((Fraction(1, a + 1), Fraction(1, b + 1)))
    if satisfies_profile(g, DegreeProfile(hi, 0)):
        assert satisfies_profile(g, DegreeProfile(lo, 0))


@given(graphs(min_n=1), st.integers(1, 50))
def test_classes_partition(g, den):
    cls = classify(g, Fraction(1, den))
    assert set(cls) == set(range(g.n))


def test_profile_parse():
    p = DegreeProfile.parse("main:gamma=1/100,t=3")
    assert p == DegreeProfile(G, 3, ProfileKind.MAIN)
    assert str(p) == "main:gamma=1/100,t=3"
    for bad in ("main:gamma=0.01", "weird:gamma=1/2", "main:t=1", "main:gamma=1/2,q=1"):
        with pytest.raises((InvalidProfile, ValueError)):
            DegreeProfile.parse(bad)
    assert parse_rational(" 3/9 ") == Fraction(1, 3)


def test_step_valid_negative():
    assert not step_valid(ProfileKind.MAIN, 10, -1)
