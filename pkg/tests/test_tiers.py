from itertools import product

from hypothesis import given, strategies as st

from hypermatch.tiers import (
    S_GENERATORS,
    T_GENERATORS,
    TRIPLE_TYPES_39,
    TRIPLE_TYPES_59,
    big_to_39,
    name39,
    pair_geq,
    pair_type,
    parse39,
    parse59,
    s_tier,
    s_tier_table,
    t_tier,
    t_tier_table,
    triple_geq,
)


def test_t_tier_examples():
    assert t_tier(parse39("lll"), parse39("NNN")) == 4
    assert t_tier(parse39("NNN"), parse39("NNN")) == 4
    assert t_tier(parse39("lll"), parse39("lll")) == 10


def test_s_tier_examples():
    assert s_tier(parse59("bbb"), parse59("BBB")) == 4
    assert s_tier(parse59("bBB"), parse59("bBB")) == 5
    assert s_tier(parse59("bbb"), parse59("bbb")) == 10


def test_generators_land_on_their_tier():
    for tier, gens in T_GENERATORS.items():
        for a, b in gens:
            assert t_tier(a, b) == tier
    for tier, gens in S_GENERATORS.items():
        for a, b in gens:
            assert s_tier(a, b) == tier


def test_tier_sizes():
    # frozen from the tables themselves
    sizes = {}
    for tier in t_tier_table().values():
        sizes[tier] = sizes.get(tier, 0) + 1
    assert sizes == {4: 16, 5: 12, 6: 4, 7: 17, 8: 2, 10: 4}
    assert len(s_tier_table()) == 10


def test_type_map():
    assert big_to_39(parse59("bbB")) == parse39("llN")
    images = {big_to_39(t) for t in TRIPLE_TYPES_59}
    assert len(images) == 4
    assert name39(big_to_39(parse59("BBB"))) == "E_NNN"


types39 = st.sampled_from(TRIPLE_TYPES_39)


@given(types39, types39, types39, types39)
def test_tier_monotone_under_domination(a, b, c, d):
    # a pair that dominates another never lands in a higher tier
    if pair_geq(pair_type(a, b), pair_type(c, d)):
        assert t_tier(a, b) <= t_tier(c, d)


@given(types39, types39)
def test_tier_symmetric(a, b):
    assert t_tier(a, b) == t_tier(b, a)


def test_triple_order_is_componentwise():
    for a, b in product(TRIPLE_TYPES_39, repeat=2):
        if triple_geq(a, b) and triple_geq(b, a):
            assert a == b
