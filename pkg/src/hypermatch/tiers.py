"""Triple types and the two tier partitions of pairs of triples.

Vertex labels relative to a reference leave vertex ``x`` are ordered
``l < L < N`` (x-little, x-large, not-small). A triple type is the sorted
label multiset of its three vertices; a pair type is an unordered pair of
triple types. Pair types are compared under the partial order induced
componentwise by the label order.

The big-count partition works the same way with labels ``b < B``.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Sequence


class Label39(enum.IntEnum):
    LITTLE = 0
    LARGE = 1
    NOT_SMALL = 2

    @property
    def char(self) -> str:
        return "lLN"[self]


class Label59(enum.IntEnum):
    NOT_BIG = 0
    BIG = 1

    @property
    def char(self) -> str:
        return "bB"[self]


TripleType = tuple[int, int, int]
PairType = tuple[TripleType, TripleType]

TRIPLE_TYPES_39: tuple[TripleType, ...] = tuple(combinations_with_replacement(range(3), 3))
TRIPLE_TYPES_59: tuple[TripleType, ...] = tuple(combinations_with_replacement(range(2), 3))


def triple_type(labels: Iterable[int]) -> TripleType:
    a, b, c = sorted(int(x) for x in labels)
    return (a, b, c)


def pair_type(a: TripleType, b: TripleType) -> PairType:
    return (a, b) if a <= b else (b, a)


def name39(t: TripleType) -> str:
    return "E_" + "".join("lLN"[x] for x in t)


def name59(t: TripleType) -> str:
    return "E_" + "".join("bB"[x] for x in t)


def parse39(name: str) -> TripleType:
    body = name.removeprefix("E_")
    return triple_type("lLN".index(ch) for ch in body)


def parse59(name: str) -> TripleType:
    body = name.removeprefix("E_")
    return triple_type("bB".index(ch) for ch in body)


def triple_geq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x >= y for x, y in zip(sorted(a), sorted(b)))


def pair_geq(p: PairType, q: PairType) -> bool:
    (a1, a2), (b1, b2) = p, q
    return (triple_geq(a1, b1) and triple_geq(a2, b2)) or (triple_geq(a1, b2) and triple_geq(a2, b1))


def _gens(spec: Sequence[tuple[str, str]], parse) -> tuple[PairType, ...]:
    return tuple(pair_type(parse(a), parse(b)) for a, b in spec)


T_GENERATORS: dict[int, tuple[PairType, ...]] = {
    4: _gens([("lll", "NNN"), ("LLL", "LLL")], parse39),
    5: _gens([("llN", "lNN"), ("llL", "LNN"), ("lLN", "lLN"), ("lLL", "LLN")], parse39),
    6: _gens([("llN", "llN"), ("llL", "LLN")], parse39),
    7: _gens([("lll", "llN"), ("LLL", "llL"), ("lLL", "lLL")], parse39),
    8: _gens([("llL", "llL")], parse39),
}

S_GENERATORS: dict[int, tuple[PairType, ...]] = {
    4: _gens([("bbb", "BBB")], parse59),
    5: _gens([("bbB", "bBB")], parse59),
    6: _gens([("bbB", "bbB")], parse59),
    7: _gens([("bbb", "bbB")], parse59),
}

T_TIERS = (4, 5, 6, 7, 8, 10)
S_TIERS = (4, 5, 6, 7, 10)
NO_TIER = 10


def _tier(p: PairType, gens: dict[int, tuple[PairType, ...]]) -> int:
    for tier in sorted(gens):
        if any(pair_geq(p, g) for g in gens[tier]):
            return tier
    return NO_TIER


@lru_cache(maxsize=None)
def t_tier(a: TripleType, b: TripleType) -> int:
    return _tier(pair_type(a, b), T_GENERATORS)


@lru_cache(maxsize=None)
def s_tier(a: TripleType, b: TripleType) -> int:
    return _tier(pair_type(a, b), S_GENERATORS)


def all_pair_types(types: Sequence[TripleType]) -> list[PairType]:
    return [pair_type(a, b) for a, b in combinations_with_replacement(types, 2)]


def big_to_39(t: TripleType) -> TripleType:
    """The injective map bbb->lll, bbB->llN, bBB->lNN, BBB->NNN."""
    return triple_type(Label39.NOT_SMALL if x else Label39.LITTLE for x in t)


def t_tier_table() -> dict[PairType, int]:
    return {p: t_tier(*p) for p in all_pair_types(TRIPLE_TYPES_39)}


def s_tier_table() -> dict[PairType, int]:
    return {p: s_tier(*p) for p in all_pair_types(TRIPLE_TYPES_59)}
