import random
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import naive_has_pm, random_graph
from hypermatch.absorber import (
    TEMPLATE_OVERCOUNT,
    AbsorberError,
    AbsorbingFamily,
    AbsorptionFailure,
    ProfileViolation,
    absorb,
    build_absorbing_family,
    enumerate_absorbing_sets,
    family_budget,
    is_absorbing_set,
    partition_leftover,
)
from hypermatch.core import ThreeGraph, is_matching
from hypermatch.degree_model import DegreeProfile, ProfileKind, VertexClass, classify
from hypermatch.forge import gen_space_barrier

TEMPLATE = [(3, 5, 6), (4, 7, 8), (0, 3, 4), (1, 5, 6), (2, 7, 8)]
BIG = VertexClass.BIG


def brute_absorbing(n, edges, a, t):
    def pm_on(verts):
        idx = {v: i for i, v in enumerate(verts)}
        sub = [tuple(idx[v] for v in e) for e in edges if set(e) <= set(verts)]
        return naive_has_pm(len(verts), sub)

    return pm_on(sorted(a)) and pm_on(sorted(set(a) | set(t)))


def test_template_set():
    g = ThreeGraph.from_edges(9, TEMPLATE)
    assert is_absorbing_set(g, range(3, 9), (0, 1, 2))
    assert enumerate_absorbing_sets(g, (0, 1, 2)) == [(3, 4, 5, 6, 7, 8)]


def test_template_absorb():
    g = ThreeGraph.from_edges(9, TEMPLATE)
    fam = build_absorbing_family(
        g, DegreeProfile(Fraction(1), 0, ProfileKind.ABSORBING),
        budget=1, force=True, triples=[(0, 1, 2)],
    )
    assert fam.sets == ((3, 4, 5, 6, 7, 8),)
    assert set(fam.base[0]) == {(3, 5, 6), (4, 7, 8)}
    m = absorb(g, fam, (0, 1, 2), {v: BIG for v in range(9)})
    assert m.tuples == ((0, 3, 4), (1, 5, 6), (2, 7, 8))
    # without the triple the base matching comes back
    assert absorb(g, fam, (), {}) == fam.base_matching


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    n = rng.choice([9, 10, 11, 12])
    g = random_graph(rng, n, rng.choice([0.2, 0.4, 0.7]))
    verts = rng.sample(range(n), 9)
    a, t = verts[:6], verts[6:]
    assert is_absorbing_set(g, a, t) == brute_absorbing(n, g.edges, a, t)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_enumeration_complete_and_sound(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 10, 0.5)
    t = (0, 1, 2)
    got = enumerate_absorbing_sets(g, t)
    want = [a for a in combinations(range(3, 10), 6) if brute_absorbing(10, g.edges, a, t)]
    assert sorted(got) == want


def test_complete_graph_counts():
    g = ThreeGraph.complete(12)
    sets = enumerate_absorbing_sets(g, (0, 1, 2))
    assert len(sets) == comb(9, 6) == 84
    assert len(enumerate_absorbing_sets(g, (0, 1, 2), 5)) == 5
    assert enumerate_absorbing_sets(g, (0, 1, 2), 0) == []
    assert all(not set(s) & {3, 4} for s in enumerate_absorbing_sets(g, (0, 1, 2), avoid=(3, 4)))


def test_class_filter():
    g = ThreeGraph.complete(9)
    classes = {v: VertexClass.SMALL for v in range(9)}
    with pytest.raises(AbsorberError):
        enumerate_absorbing_sets(g, (0, 1, 2), classes=classes, exhaustive_limit=0)
    classes.update({0: BIG, 1: BIG})
    # u2, u3 must not be Small, so the template finds nothing here
    assert enumerate_absorbing_sets(g, (0, 1, 2), classes=classes, exhaustive_limit=0) == []
    classes.update({3: BIG, 4: BIG})
    assert enumerate_absorbing_sets(g, (0, 1, 2), classes=classes, exhaustive_limit=0)


def test_budget_and_overcount():
    assert family_budget(Fraction(1, 2), 18) == 0
    assert family_budget(Fraction(1), 18) == 6
    assert family_budget(Fraction(1, 100), 10**9) == 3
    assert TEMPLATE_OVERCOUNT == factorial(6) // 8 == 90


def test_is_absorbing_errors():
    g = ThreeGraph.complete(9)
    with pytest.raises(AbsorberError):
        is_absorbing_set(g, range(5), (6, 7, 8))
    with pytest.raises(AbsorberError):
        is_absorbing_set(g, range(6), (5, 6, 7))


def test_family_on_complete():
    # one set already absorbs every triple disjoint from it, so greedy stops there
    g = ThreeGraph.complete(18)
    fam = build_absorbing_family(g, DegreeProfile(Fraction(1, 50), 0, ProfileKind.ABSORBING), budget=2)
    assert len(fam) == 1 and fam.check(g)
    assert all(set(t) & fam.vertices for t in fam.shortfall)
    assert is_matching(g, fam.base_matching) and len(fam.vertices) == 6
    w = sorted(set(range(18)) - fam.vertices)[:3]
    m = absorb(g, fam, w, classify(g, Fraction(1, 50)))
    assert is_matching(g, m) and m.vertices == fam.vertices | set(w)


def test_family_profile_violation():
    with pytest.raises(ProfileViolation):
        build_absorbing_family(gen_space_barrier(12), DegreeProfile(Fraction(1, 100), 0, ProfileKind.ABSORBING))
    with pytest.raises(ValueError):
        build_absorbing_family(ThreeGraph.complete(9), DegreeProfile(Fraction(1, 100), 0, ProfileKind.ABSORBING),
                               method="magic")


def test_absorb_failures():
    g = ThreeGraph.from_edges(9, TEMPLATE)
    fam = AbsorbingFamily(((3, 4, 5, 6, 7, 8),), (((3, 5, 6), (4, 7, 8)),))
    classes = {v: BIG for v in range(9)}
    with pytest.raises(AbsorberError):
        absorb(g, fam, (0, 1, 3), classes)
    h = ThreeGraph.from_edges(9, TEMPLATE[:2])
    with pytest.raises(AbsorptionFailure) as info:
        absorb(h, fam, (0, 1, 2), classes)
    assert info.value.triple == (0, 1, 2)


def test_partition_leftover():
    classes = {0: BIG, 1: BIG, 2: VertexClass.SMALL, 3: BIG, 4: BIG, 5: BIG}
    assert partition_leftover(range(6), classes) == [(0, 1, 2), (3, 4, 5)]
    with pytest.raises(AbsorberError):
        partition_leftover(range(5), classes)
    with pytest.raises(AbsorberError):
        partition_leftover([0, 2, 3], {0: BIG, 2: VertexClass.SMALL, 3: VertexClass.MEDIUM})


def test_family_serialization():
    fam = AbsorbingFamily(((3, 4, 5, 6, 7, 8),), (((3, 5, 6), (4, 7, 8)),))
    text = fam.dumps()
    assert text == "3 4 5 6 7 8 | 3 5 6 ; 4 7 8\n"
    assert AbsorbingFamily.loads(text).sets == fam.sets
    assert AbsorbingFamily.loads(text).base == fam.base
    with pytest.raises(AbsorberError):
        AbsorbingFamily.loads("1 2 3\n")
    with pytest.raises(AbsorberError):
        AbsorbingFamily(((0, 1, 2, 3, 4, 5), (5, 6, 7, 8, 9, 10)),
                        (((0, 1, 2), (3, 4, 5)), ((5, 6, 7), (8, 9, 10))))
