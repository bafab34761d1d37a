"""Exhaustive checks of the finite combinatorial claims behind the swap engine.

Each check enumerates a finite universe (masks, labelings, count vectors),
reports its exact size and returns every counterexample with enough data to
replay it through :mod:`hypermatch.swap`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations
from math import comb

import numpy as np

from . import kernels
from .swap import find_xy_matching, released_index, xy_matchings
from .tiers import (
    S_GENERATORS,
    T_GENERATORS,
    TRIPLE_TYPES_39,
    TRIPLE_TYPES_59,
    Label39,
    TripleType,
    all_pair_types,
    big_to_39,
    name39,
    name59,
    pair_type,
    s_tier,
    s_tier_table,
    t_tier,
    t_tier_table,
)

FACT_MIN_EDGES = 4
ALL_MASKS = range(kernels.N_MASKS)


@dataclass
class VerificationReport:
    claim: str
    universe: int
    counterexamples: list[dict] = field(default_factory=list)
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "universe": self.universe,
            "counterexamples": self.counterexamples,
            "ok": self.ok,
            "elapsed": round(self.elapsed, 3),
            "details": self.details,
        }

    def render(self) -> str:
        lines = [
            f"claim: {self.claim}",
            f"universe: {self.universe}",
            f"counterexamples: {len(self.counterexamples)}",
            f"elapsed: {self.elapsed:.2f}s",
        ]
        for k, v in self.details.items():
            lines.append(f"{k}: {v}")
        for ce in self.counterexamples[:10]:
            lines.append(f"  counterexample {ce}")
        return "\n".join(lines)


def masks_with_at_least(k: int) -> np.ndarray:
    return np.asarray([m for m in ALL_MASKS if m.bit_count() >= k], dtype=np.int64)


# -- {x,y}-matching fact ------------------------------------------------------

def verify_fact_xy(min_edges: int = FACT_MIN_EDGES) -> VerificationReport:
    start = time.perf_counter()
    masks = [int(m) for m in masks_with_at_least(min_edges)]
    bad = []
    for lx in masks:
        for ly in masks:
            if find_xy_matching(lx, ly) is None:
                bad.append({"lx": lx, "ly": ly})
    return VerificationReport(
        "fact-xy",
        len(masks) ** 2,
        bad,
        time.perf_counter() - start,
        {"masks": len(masks), "min_edges": min_edges},
    )


# -- swapping lemmas ----------------------------------------------------------

def labelings(a: TripleType, b: TripleType) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct label assignments to ``(e, f)`` realising the unordered pair ``{a, b}``."""
    out = set()
    for first, second in ((a, b), (b, a)):
        for pe in set(permutations(first)):
            for pf in set(permutations(second)):
                out.add((pe, pf))
    return sorted(out)


def good_mask_39(le, lf) -> int:
    """Release positions whose label pair has an N or two L's."""
    out = 0
    for r in range(3):
        for c in range(3):
            a, b = le[r], lf[c]
            if Label39.NOT_SMALL in (a, b) or (a == Label39.LARGE and b == Label39.LARGE):
                out |= 1 << (3 * r + c)
    return out


def good_mask_59(le, lf) -> int:
    """Release positions whose label pair contains a Big vertex."""
    out = 0
    for r in range(3):
        for c in range(3):
            if le[r] or lf[c]:
                out |= 1 << (3 * r + c)
    return out


def _lemma(claim: str, types, tier_of, tiers, good_of, namer) -> VerificationReport:
    start = time.perf_counter()
    table = kernels.cached_release_table()
    by_count = {k: masks_with_at_least(k) for k in range(10)}
    universe = 0
    bad: list[dict] = []
    per_tier: dict[int, int] = {}
    minimal: dict[str, int] = {}
    for pt in all_pair_types(types):
        tier = tier_of(*pt)
        labs = labelings(*pt)
        goods = [good_of(le, lf) for le, lf in labs]
        # smallest edge count that suffices for every labeling (diagnostic)
        need = 10
        for k in range(9, -1, -1):
            if all(kernels.count_failures(table, by_count[k], gm)[0] == 0 for gm in goods):
                need = k
            else:
                break
        minimal[f"{namer(pt[0])} {namer(pt[1])}"] = need
        if tier not in tiers:
            continue
        idx = by_count[tier]
        for (le, lf), gm in zip(labs, goods):
            count, a, b = kernels.count_failures(table, idx, gm)
            universe += len(idx) ** 2
            per_tier[tier] = per_tier.get(tier, 0) + len(idx) ** 2
            if count:
                bad.append({
                    "tier": tier,
                    "pair": [namer(pt[0]), namer(pt[1])],
                    "labels_e": list(le),
                    "labels_f": list(lf),
                    "lx": int(a),
                    "ly": int(b),
                    "failures": int(count),
                })
    return VerificationReport(
        claim,
        universe,
        bad,
        time.perf_counter() - start,
        {"universe_per_tier": dict(sorted(per_tier.items())), "minimal_sufficient_edges": minimal},
    )


def verify_t_lemma() -> VerificationReport:
    return _lemma("t-lemma", TRIPLE_TYPES_39, t_tier, set(T_GENERATORS), good_mask_39, name39)


def verify_s_lemma() -> VerificationReport:
    rep = _lemma("s-lemma", TRIPLE_TYPES_59, s_tier, set(S_GENERATORS), good_mask_59, name59)
    mismatches = []
    for a, b in all_pair_types(TRIPLE_TYPES_59):
        if s_tier(a, b) != t_tier(big_to_39(a), big_to_39(b)):
            mismatches.append([name59(a), name59(b)])
    generators_ok = all(
        s_tier(a, b) == t_tier(big_to_39(a), big_to_39(b)) == tier
        for tier, gens in S_GENERATORS.items()
        for a, b in gens
    )
    rep.details["map_images"] = {name59(t): name39(big_to_39(t)) for t in TRIPLE_TYPES_59}
    rep.details["map_generators_consistent"] = generators_ok
    rep.details["map_pullback_mismatches"] = mismatches
    if not generators_ok:
        rep.counterexamples.append({"map": "generator tiers disagree under the type map"})
    return rep


def replay(ce: dict, claim: str) -> bool:
    """True when the counterexample really has no good ``{x,y}``-matching."""
    le, lf = ce["labels_e"], ce["labels_f"]
    gm = good_mask_39(le, lf) if claim == "t-lemma" else good_mask_59(le, lf)
    for i, j in xy_matchings(ce["lx"], ce["ly"]):
        r, c = released_index(i, j)
        if (gm >> (3 * r + c)) & 1:
            return False
    return True


# -- partition counts -----------------------------------------------------------

def verify_partition_counts() -> VerificationReport:
    start = time.perf_counter()
    bad = []
    t39 = len(TRIPLE_TYPES_39)
    t59 = len(TRIPLE_TYPES_59)
    tt = t_tier_table()
    st = s_tier_table()
    expect = {"triple_types_39": 10, "pair_types_39": 55, "triple_types_59": 4, "pair_types_59": 10}
    got = {"triple_types_39": t39, "pair_types_39": len(tt), "triple_types_59": t59, "pair_types_59": len(st)}
    for k, v in expect.items():
        if got[k] != v:
            bad.append({"count": k, "expected": v, "got": got[k]})
    if len(tt) != comb(t39 + 1, 2) or len(st) != comb(t59 + 1, 2):
        bad.append({"count": "pairs with repetition"})
    t_sizes: dict[int, int] = {}
    for p, tier in tt.items():
        if tier not in (4, 5, 6, 7, 8, 10):
            bad.append({"pair": p, "tier": tier})
        t_sizes[tier] = t_sizes.get(tier, 0) + 1
    s_sizes: dict[int, int] = {}
    for p, tier in st.items():
        if tier not in (4, 5, 6, 7, 10):
            bad.append({"pair": p, "tier": tier})
        s_sizes[tier] = s_sizes.get(tier, 0) + 1
    if sum(t_sizes.values()) != len(tt) or sum(s_sizes.values()) != len(st):
        bad.append({"partition": "tier classes do not cover the pair universe"})
    return VerificationReport(
        "partition-counts",
        len(tt) + len(st),
        bad,
        time.perf_counter() - start,
        {**got, "t_tier_sizes": dict(sorted(t_sizes.items())), "s_tier_sizes": dict(sorted(s_sizes.items()))},
    )


# -- counting arithmetic ------------------------------------------------------

def little_weight(t: TripleType) -> int:
    return sum(1 for x in t if x == Label39.LITTLE)


def small_weight(t: TripleType) -> int:
    return sum(1 for x in t if x != Label39.NOT_SMALL)


def verify_counting_arithmetic(max_m: int = 12) -> VerificationReport:
    """Check ``sum (tier - 4) |T^tier| <= j t`` on every count vector.

    ``j`` and ``t`` range over values meeting the two counting constraints;
    since the right side grows with both, the smallest admissible values
    (``j`` = number of x-little vertices covered, ``t`` = number of Small
    vertices covered) are the binding case.
    """
    start = time.perf_counter()
    types = TRIPLE_TYPES_39
    k = len(types)
    w = np.zeros((k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            w[a, b] = t_tier(types[a], types[b]) - 4
    jw = np.asarray([little_weight(t) for t in types], dtype=np.int64)
    tw = np.asarray([small_weight(t) for t in types], dtype=np.int64)
    total, bad, first = kernels.lattice_check(w, jw, tw, max_m)
    ces = []
    if bad:
        ces.append({
            "counts": {name39(t): int(c) for t, c in zip(types, first)},
            "violations": int(bad),
        })
    return VerificationReport(
        "counting-arithmetic",
        int(total),
        ces,
        time.perf_counter() - start,
        {"max_m": max_m, "vector_length": k},
    )


def pair_sum(counts: dict[TripleType, int]) -> int:
    """Direct ``sum (tier - 4)`` over unordered pairs of tuples; reference for the kernel."""
    flat = [t for t, c in counts.items() for _ in range(c)]
    s = 0
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            s += t_tier(flat[i], flat[j]) - 4
    return s


VERIFIERS = {
    "fact-xy": verify_fact_xy,
    "t-lemma": verify_t_lemma,
    "s-lemma": verify_s_lemma,
    "partition-counts": verify_partition_counts,
    "counting-arithmetic": verify_counting_arithmetic,
}


def run_all() -> list[VerificationReport]:
    return [fn() for fn in VERIFIERS.values()]


__all__ = [
    "VerificationReport",
    "VERIFIERS",
    "labelings",
    "pair_type",
    "replay",
    "run_all",
    "verify_counting_arithmetic",
    "verify_fact_xy",
    "verify_partition_counts",
    "verify_s_lemma",
    "verify_t_lemma",
]
