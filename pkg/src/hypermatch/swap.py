"""Swapping pairs and the leave-improvement loop.

For leave vertices ``x, y`` and tuples ``e, f`` of a phantom system, an
``{x,y}``-matching is a pair of disjoint edges ``{x, e_a, f_b}`` and
``{y, e_c, f_d}``; it releases the remaining vertex of each tuple. The engine
does not follow a case analysis: it tries all at most 81 cross-pair
combinations and keeps the one whose released pair carries the strongest
tag. Which link sizes are guaranteed to succeed is checked separately by
:mod:`hypermatch.verifier`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Mapping, Sequence

from .core import ThreeGraph, Triple, TupleSystem, canon, is_matching, leave, perfect_on
from .degree_model import DegreeProfile, IndexMap, VertexClass, classify, index_map
from .links import pair_link_mask
from .tiers import (
    Label39,
    PairType,
    TripleType,
    pair_type,
    s_tier,
    t_tier,
    triple_type,
)

# DISJOINT[i]: cross pairs sharing neither row nor column with pair i.
DISJOINT: tuple[int, ...] = tuple(
    sum(1 << j for j in range(9) if j // 3 != i // 3 and j % 3 != i % 3) for i in range(9)
)


class SwapError(ValueError):
    pass


class SwapTag(enum.IntEnum):
    BOTH_LARGER = 1
    CONTAINS_NOT_SMALL = 2
    CONTAINS_BIG = 3

    @property
    def label(self) -> str:
        return {1: "BothLarger", 2: "ContainsNotSmall", 3: "ContainsBig"}[int(self)]


# -- typing -------------------------------------------------------------------

def vertex_type_39(im: IndexMap, classes: Mapping[int, VertexClass], x: int, v: int) -> Label39:
    if v == x:
        raise SwapError("the reference vertex has no type")
    if classes[v] is not VertexClass.SMALL:
        return Label39.NOT_SMALL
    return Label39.LITTLE if im.rank(v) < im.rank(x) else Label39.LARGE


def triple_type_39(im: IndexMap, classes: Mapping[int, VertexClass], x: int, e: Sequence[int]) -> TripleType:
    return triple_type(vertex_type_39(im, classes, x, v) for v in e)


def triple_type_59(classes: Mapping[int, VertexClass], e: Sequence[int]) -> TripleType:
    return triple_type(int(classes[v] is VertexClass.BIG) for v in e)


# -- {x,y}-matchings on masks ----------------------------------------------

def xy_matchings(lx: int, ly: int) -> Iterator[tuple[int, int]]:
    """All ``(i, j)`` with ``i`` in ``lx``, ``j`` in ``ly`` and the two cross pairs disjoint."""
    for i in range(9):
        if not (lx >> i) & 1:
            continue
        rest = ly & DISJOINT[i]
        while rest:
            low = rest & -rest
            yield i, low.bit_length() - 1
            rest ^= low


def find_xy_matching(lx: int, ly: int) -> tuple[int, int] | None:
    return next(xy_matchings(lx, ly), None)


def released_index(i: int, j: int) -> tuple[int, int]:
    """Positions in ``e`` and ``f`` left uncovered by cross pairs ``i`` and ``j``."""
    return 3 - i // 3 - j // 3, 3 - i % 3 - j % 3


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class SwapCertificate:
    x: int
    y: int
    e: Triple
    f: Triple
    edge_x: Triple
    edge_y: Triple
    released: tuple[int, int]
    tag: SwapTag
    types_agree: bool = True

    def check(self, g: ThreeGraph, classes: Mapping[int, VertexClass], im: IndexMap) -> bool:
        """Re-derive validity from scratch."""
        ex, ey = set(self.edge_x), set(self.edge_y)
        if self.edge_x not in g.edge_set or self.edge_y not in g.edge_set or ex & ey:
            return False
        if self.x not in ex or self.y not in ey:
            return False
        for edge in (ex, ey):
            if len(edge & set(self.e)) != 1 or len(edge & set(self.f)) != 1:
                return False
        if set(self.released) != (set(self.e) | set(self.f)) - ex - ey:
            return False
        return _tag_holds(self.tag, self.released, classes, im, self.x, self.y)


def _tag_holds(tag, rel, classes, im, x, y) -> bool:
    cls = [classes[v] for v in rel]
    if tag is SwapTag.CONTAINS_BIG:
        return VertexClass.BIG in cls
    if tag is SwapTag.CONTAINS_NOT_SMALL:
        return any(c is not VertexClass.SMALL for c in cls)
    top = max(im.rank(x), im.rank(y))
    return all(c is VertexClass.SMALL for c in cls) and all(im.rank(v) > top for v in rel)


def _best_tag(rel, classes, im, x, y) -> SwapTag | None:
    for tag in (SwapTag.CONTAINS_BIG, SwapTag.CONTAINS_NOT_SMALL, SwapTag.BOTH_LARGER):
        if _tag_holds(tag, rel, classes, im, x, y):
            return tag
    return None


def _check_leave_pair(m: TupleSystem, x: int, y: int, e: Triple, f: Triple) -> None:
    covered = m.vertices
    if x == y:
        raise SwapError("x and y must differ")
    for v in (x, y):
        if v in covered:
            raise SwapError(f"{v} is not in the leave")
    if e == f:
        raise SwapError("e and f must be different tuples")
    tuples = set(m.tuples)
    if e not in tuples or f not in tuples:
        raise SwapError("e and f must be tuples of the system")


def certify_swap(
    g: ThreeGraph,
    m: TupleSystem,
    im: IndexMap,
    classes: Mapping[int, VertexClass],
    x: int,
    y: int,
    e: Sequence[int],
    f: Sequence[int],
    *,
    strict_typing: bool = True,
) -> SwapCertificate | None:
    """Search every ``{x,y}``-matching of ``{e, f}`` for the strongest tag.

    With ``strict_typing`` and both ``x`` and ``y`` Small, the pair is only
    considered when ``e`` and ``f`` get the same sorted types relative to
    ``x`` as relative to ``y``.
    """
    e, f = canon(e), canon(f)
    _check_leave_pair(m, x, y, e, f)
    agree = True
    if classes[x] is VertexClass.SMALL and classes[y] is VertexClass.SMALL:
        tx = pair_type(triple_type_39(im, classes, x, e), triple_type_39(im, classes, x, f))
        ty = pair_type(triple_type_39(im, classes, y, e), triple_type_39(im, classes, y, f))
        agree = tx == ty
        if strict_typing and not agree:
            return None
    lx = pair_link_mask(g, e, f, x)
    ly = pair_link_mask(g, e, f, y)
    best: SwapCertificate | None = None
    for i, j in xy_matchings(lx, ly):
        r, c = released_index(i, j)
        rel = (e[r], f[c])
        tag = _best_tag(rel, classes, im, x, y)
        if tag is None or (best is not None and tag <= best.tag):
            continue
        best = SwapCertificate(
            x, y, e, f,
            canon((x, e[i // 3], f[i % 3])),
            canon((y, e[j // 3], f[j % 3])),
            rel, tag, agree,
        )
        if tag is SwapTag.CONTAINS_BIG:
            break
    return best


def apply_swap(m: TupleSystem, cert: SwapCertificate) -> TupleSystem:
    return m.replace((cert.e, cert.f), (cert.edge_x, cert.edge_y))


# -- phantom systems ----------------------------------------------------------

def phantom_size(n: int, gamma: Fraction) -> int:
    return int((n - Fraction(gamma) * n) // 3)


def make_phantom(
    g: ThreeGraph,
    matching: TupleSystem,
    gamma: Fraction,
    classes: Mapping[int, VertexClass] | None = None,
) -> TupleSystem:
    """Trim or pad ``matching`` to exactly ``floor((n - gamma n) / 3)`` tuples.

    Padding tuples are cut from leave vertices taken Small first, then
    Medium, then Big, by ascending id.
    """
    k = phantom_size(g.n, gamma)
    tuples = list(matching.tuples)
    if len(tuples) >= k:
        return TupleSystem(tuple(tuples[:k]))
    if classes is None:
        classes = classify(g, gamma)
    pool = sorted(leave(g, matching), key=lambda v: (int(classes[v]), v))
    while len(tuples) < k:
        a, b, c = pool[:3]
        pool = pool[3:]
        tuples.append(canon((a, b, c)))
    return TupleSystem(tuple(tuples))


def real_part(g: ThreeGraph, m: TupleSystem) -> TupleSystem:
    """The tuples that are edges of ``g``; padding is dropped."""
    return m.real_edges(g)


# -- monovariant and improvement loop ----------------------------------------

Phi = tuple[int, int, int]


def phi(im: IndexMap, classes: Mapping[int, VertexClass], lv: frozenset[int] | set[int]) -> Phi:
    big = sum(1 for v in lv if classes[v] is VertexClass.BIG)
    med = sum(1 for v in lv if classes[v] is VertexClass.MEDIUM)
    small = sum(im.rank(v) for v in lv if classes[v] is VertexClass.SMALL)
    return big, med, small


@dataclass(frozen=True)
class SwapEvent:
    x: int
    y: int
    e: Triple
    f: Triple
    edge_x: Triple
    edge_y: Triple
    tag: SwapTag
    phi_before: Phi
    phi_after: Phi
    real_before: int
    real_after: int

    def as_dict(self) -> dict:
        return {
            "x": self.x, "y": self.y, "e": list(self.e), "f": list(self.f),
            "edge_x": list(self.edge_x), "edge_y": list(self.edge_y),
            "tag": self.tag.label,
            "phi_before": list(self.phi_before), "phi_after": list(self.phi_after),
            "real_edges_before": self.real_before, "real_edges_after": self.real_after,
        }


@dataclass
class SwapTrace:
    mode: str
    target: str
    events: list[SwapEvent] = field(default_factory=list)
    stop_reason: str = ""
    target_met: bool = False

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "target": self.target,
            "stop_reason": self.stop_reason,
            "target_met": self.target_met,
            "events": [ev.as_dict() for ev in self.events],
        }


def _target(mode: str, gamma: Fraction, n: int):
    if mode == "lemma":
        bound = 2 * gamma * n / 75
        return (lambda big, size: big > bound), f"|L∩Big| > {bound}"
    if mode == "theorem":
        return (lambda big, size: 3 * big >= 2 * size), "|L∩Big| >= 2|L|/3"
    raise ValueError(f"unknown mode {mode!r}")


def _candidate_pairs(lv, im, classes) -> list[tuple[int, int]]:
    def pairs(cls):
        vs = [v for v in lv if classes[v] is cls]
        out = [tuple(sorted((a, b), key=im.rank)) for a, b in combinations(vs, 2)]
        return sorted(out, key=lambda p: (im.rank(p[0]) + im.rank(p[1]), im.rank(p[0])))

    return pairs(VertexClass.SMALL) + pairs(VertexClass.MEDIUM)


def find_swap(
    g: ThreeGraph,
    m: TupleSystem,
    im: IndexMap,
    classes: Mapping[int, VertexClass],
    *,
    strict_typing: bool = True,
) -> SwapCertificate | None:
    """First acceptable certificate in scan order, or ``None``."""
    lv = leave(g, m)
    tuples = m.tuples
    for x, y in _candidate_pairs(lv, im, classes):
        medium = classes[x] is VertexClass.MEDIUM
        scored = []
        for a, b in combinations(range(len(tuples)), 2):
            e, f = tuples[a], tuples[b]
            lx = pair_link_mask(g, e, f, x)
            ly = pair_link_mask(g, e, f, y)
            if lx and ly:
                scored.append((-(lx.bit_count() + ly.bit_count()), a, b))
        for _, a, b in sorted(scored):
            cert = certify_swap(g, m, im, classes, x, y, tuples[a], tuples[b], strict_typing=strict_typing)
            if cert is None:
                continue
            if medium and cert.tag is not SwapTag.CONTAINS_BIG:
                continue
            return cert
    return None


def improve_leave(
    g: ThreeGraph,
    m: TupleSystem,
    p: DegreeProfile,
    *,
    mode: str = "lemma",
    classes: Mapping[int, VertexClass] | None = None,
    strict_typing: bool = True,
    max_steps: int | None = None,
) -> tuple[TupleSystem, SwapTrace]:
    """Apply certified swaps until the leave target holds or none is left.

    ``mode="lemma"`` stops once the leave holds more than ``2 gamma n / 75``
    Big vertices; ``mode="theorem"`` once at least two thirds of it is Big.
    Every swap strictly increases :func:`phi` and never lowers the number of
    real edges in ``m``.
    """
    if classes is None:
        classes = classify(g, p.gamma)
    im = index_map(g)
    done, text = _target(mode, p.gamma, g.n)
    trace = SwapTrace(mode, text)
    steps = 0
    while True:
        lv = leave(g, m)
        big = sum(1 for v in lv if classes[v] is VertexClass.BIG)
        if done(big, len(lv)):
            trace.stop_reason, trace.target_met = "target", True
            return m, trace
        if max_steps is not None and steps >= max_steps:
            trace.stop_reason = "step_limit"
            return m, trace
        cert = find_swap(g, m, im, classes, strict_typing=strict_typing)
        if cert is None:
            trace.stop_reason = "exhausted"
            return m, trace
        new = apply_swap(m, cert)
        before, after = phi(im, classes, lv), phi(im, classes, leave(g, new))
        real_before, real_after = len(real_part(g, m)), len(real_part(g, new))
        if not after > before or real_after < real_before:
            raise AssertionError("swap did not improve the monovariant")
        trace.events.append(
            SwapEvent(cert.x, cert.y, cert.e, cert.f, cert.edge_x, cert.edge_y, cert.tag,
                      before, after, real_before, real_after)
        )
        m = new
        steps += 1


# -- diagnostics ----------------------------------------------------------------

@dataclass(frozen=True)
class GoodPairTable:
    """Counts of tuple pairs per ``(tier, pair type)``.

    ``partition`` counts every pair once by its tier; ``good`` counts only
    pairs whose link at ``x`` has at least ``tier`` edges.
    """

    t_partition: dict[tuple[int, PairType], int]
    t_good: dict[tuple[int, PairType], int]
    s_partition: dict[tuple[int, PairType], int]
    s_good: dict[tuple[int, PairType], int]

    def t_total(self) -> int:
        return sum(self.t_partition.values())

    def s_total(self) -> int:
        return sum(self.s_partition.values())

    def t_by_tier(self, good: bool = False) -> dict[int, int]:
        return _by_tier(self.t_good if good else self.t_partition)

    def s_by_tier(self, good: bool = False) -> dict[int, int]:
        return _by_tier(self.s_good if good else self.s_partition)


def _by_tier(d: Mapping[tuple[int, PairType], int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for (tier, _), c in d.items():
        out[tier] = out.get(tier, 0) + c
    return out


def count_good_pairs(
    g: ThreeGraph,
    m: TupleSystem,
    x: int,
    classes: Mapping[int, VertexClass],
    im: IndexMap | None = None,
) -> GoodPairTable:
    if x in m.vertices:
        raise SwapError(f"{x} is not in the leave")
    im = im or index_map(g)
    tp: dict = {}
    tg: dict = {}
    sp: dict = {}
    sg: dict = {}
    for e, f in combinations(m.tuples, 2):
        size = pair_link_mask(g, e, f, x).bit_count()
        pt = pair_type(triple_type_39(im, classes, x, e), triple_type_39(im, classes, x, f))
        key = (t_tier(*pt), pt)
        tp[key] = tp.get(key, 0) + 1
        if size >= key[0]:
            tg[key] = tg.get(key, 0) + 1
        ps = pair_type(triple_type_59(classes, e), triple_type_59(classes, f))
        key = (s_tier(*ps), ps)
        sp[key] = sp.get(key, 0) + 1
        if size >= key[0]:
            sg[key] = sg.get(key, 0) + 1
    assert sum(tp.values()) == sum(sp.values()) == comb(len(m), 2)
    return GoodPairTable(tp, tg, sp, sg)


# -- matching extension -------------------------------------------------------

def extend_with_move(
    g: ThreeGraph,
    m: TupleSystem,
    *,
    oracle_limit: int = 0,
    node_budget: int | None = 2_000_000,
) -> tuple[TupleSystem, str] | None:
    """Like :func:`extend_matching` but also names the move that worked."""
    if not is_matching(g, m):
        raise SwapError("input is not a matching")
    lv = sorted(leave(g, m))
    lvset = set(lv)
    for e in g.edges:
        if lvset.issuperset(e):
            return TupleSystem(m.tuples + (e,)), "leave_edge"
    tuples = list(m.tuples)
    # one tuple and three leave vertices become two edges
    for idx, e in enumerate(tuples):
        for trio in combinations(lv, 3):
            pm = perfect_on(g, e + trio)
            if pm is not None:
                new = tuples[:idx] + tuples[idx + 1:] + [canon(t) for t in pm]
                return TupleSystem(tuple(new)), "one_tuple"
    # two tuples, one leave vertex and two more become three edges
    for a, b in combinations(range(len(tuples)), 2):
        base = tuples[a] + tuples[b]
        for trio in combinations(lv, 3):
            pm = perfect_on(g, base + trio)
            if pm is not None:
                keep = [t for k, t in enumerate(tuples) if k not in (a, b)]
                return TupleSystem(tuple(keep + [canon(t) for t in pm])), "two_tuples"
    if g.n <= oracle_limit:
        from .oracle import Decision, max_matching

        res = max_matching(g, limit=oracle_limit, node_budget=node_budget)
        if res.decision is not Decision.TIMEOUT and res.max_size and res.max_size > len(m):
            assert res.witness is not None
            return TupleSystem(res.witness.tuples[: len(m) + 1]), "oracle"
    return None


def extend_matching(
    g: ThreeGraph,
    m: TupleSystem,
    *,
    oracle_limit: int = 0,
    node_budget: int | None = 2_000_000,
) -> TupleSystem | None:
    """A matching with one more edge than ``m``, or ``None``.

    Local moves come first: an edge inside the leave, then replacing one
    tuple (plus three leave vertices) by two edges, then two tuples (plus
    three leave vertices) by three edges. For ``n <= oracle_limit`` an exact
    maximum matching is the last resort.
    """
    got = extend_with_move(g, m, oracle_limit=oracle_limit, node_budget=node_budget)
    return None if got is None else got[0]
