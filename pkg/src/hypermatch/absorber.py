"""Absorbing sets and absorption of a small leftover set.

A 6-set ``A`` absorbs a triple ``T`` (disjoint from it) when ``H[A]`` has a
perfect matching and so does ``H[A | T]``. A family of disjoint absorbing
sets comes with a base matching of two edges per set; absorbing ``T`` swaps
one set's two edges for the three edges on ``A | T``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .core import ThreeGraph, Triple, TupleSystem, canon, perfect_on
from .degree_model import DegreeProfile, VertexClass, classify, satisfies_profile

SixSet = tuple[int, int, int, int, int, int]

# An ordered template (u2, u3, a2, b2, a3, b3) collapses onto one unordered
# 6-set in at most 6!/2^3 ways.
TEMPLATE_OVERCOUNT = factorial(6) // 2 ** 3


class AbsorberError(ValueError):
    pass


class ProfileViolation(AbsorberError):
    pass


class AbsorptionFailure(RuntimeError):
    def __init__(self, triple: Triple, message: str = "") -> None:
        super().__init__(message or f"no unused absorbing set for {triple}")
        self.triple = triple


def is_absorbing_set(g: ThreeGraph, a: Iterable[int], t: Iterable[int]) -> bool:
    a, t = tuple(sorted(a)), tuple(sorted(t))
    if len(set(a)) != 6 or len(set(t)) != 3:
        raise AbsorberError("need a 6-set and a triple")
    if set(a) & set(t):
        raise AbsorberError("the set and the triple overlap")
    return perfect_on(g, a) is not None and perfect_on(g, a + t) is not None


def _pairs_with(g: ThreeGraph, v: int, u: int, banned: set[int]) -> list[tuple[int, int]]:
    """Pairs ``{a, b}`` forming an edge with both ``v`` and ``u``."""
    common = [g.pair_nbrs[v][w] & g.pair_nbrs[u][w] for w in range(g.n)]
    out = []
    for a in range(g.n):
        if a in banned or not common[a]:
            continue
        row = common[a]
        for b in range(a + 1, g.n):
            if (row >> b) & 1 and b not in banned:
                out.append((a, b))
    return out


def enumerate_absorbing_sets(
    g: ThreeGraph,
    t: Sequence[int],
    limit: int | None = None,
    *,
    classes: Mapping[int, VertexClass] | None = None,
    avoid: Iterable[int] = (),
    exhaustive_limit: int = 15,
) -> list[SixSet]:
    """Absorbing 6-sets for ``t``, disjoint from ``avoid``.

    First the constructive template: pick ``v1`` in ``t``, an edge
    ``{v1, u2, u3}``, then pairs ``{a2, b2}`` and ``{a3, b3}`` completing
    edges with both ``v2, u2`` and ``v3, u3``. When ``classes`` is given,
    ``t`` must hold two Big vertices and ``u2, u3`` may not be Small. For
    ``n <= exhaustive_limit`` every remaining 6-set is then tested directly.
    """
    t = canon(t)
    avoid = set(avoid)
    if avoid & set(t):
        raise AbsorberError("triple meets the avoided vertices")
    if classes is not None and sum(classes[v] is VertexClass.BIG for v in t) < 2:
        raise AbsorberError(f"{t} has fewer than two Big vertices")
    found: list[SixSet] = []
    seen: set[SixSet] = set()

    def add(s: Iterable[int]) -> bool:
        key = tuple(sorted(s))
        if key not in seen:
            seen.add(key)
            found.append(key)  # type: ignore[arg-type]
        return limit is not None and len(found) >= limit

    if limit is not None and limit <= 0:
        return []
    banned0 = avoid | set(t)
    for v1, v2, v3 in permutations(t):
        if v2 > v3:
            continue
        nbrs = g.pair_nbrs[v1]
        for u2 in range(g.n):
            if u2 in banned0 or not nbrs[u2]:
                continue
            if classes is not None and classes[u2] is VertexClass.SMALL:
                continue
            for u3 in range(g.n):
                if u3 == u2 or u3 in banned0 or not (nbrs[u2] >> u3) & 1:
                    continue
                if classes is not None and classes[u3] is VertexClass.SMALL:
                    continue
                b2 = banned0 | {u2, u3}
                for a2, bb2 in _pairs_with(g, v2, u2, b2):
                    b3 = b2 | {a2, bb2}
                    for a3, bb3 in _pairs_with(g, v3, u3, b3):
                        if add((u2, u3, a2, bb2, a3, bb3)):
                            return found
    if g.n <= exhaustive_limit:
        rest = [v for v in range(g.n) if v not in banned0]
        for a in combinations(rest, 6):
            if a not in seen and is_absorbing_set(g, a, t):
                if add(a):
                    return found
    return found


@dataclass(frozen=True)
class AbsorbingFamily:
    """Disjoint absorbing sets with a two-edge matching inside each."""

    sets: tuple[SixSet, ...]
    base: tuple[tuple[Triple, Triple], ...]
    coverage: dict[Triple, int] = field(default_factory=dict, compare=False)
    shortfall: tuple[Triple, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if len(self.sets) != len(self.base):
            raise AbsorberError("one base pair of edges per set")
        seen: set[int] = set()
        for s, (p, q) in zip(self.sets, self.base):
            if seen & set(s):
                raise AbsorberError("absorbing sets must be disjoint")
            seen |= set(s)
            if set(p) | set(q) != set(s) or set(p) & set(q):
                raise AbsorberError(f"base edges do not partition {s}")

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for s in self.sets for v in s)

    @property
    def base_matching(self) -> TupleSystem:
        return TupleSystem(tuple(e for pair in self.base for e in pair))

    def __len__(self) -> int:
        return len(self.sets)

    def dumps(self) -> str:
        lines = []
        for s, (p, q) in zip(self.sets, self.base):
            lines.append(" ".join(map(str, s)) + " | " + " ".join(map(str, p)) + " ; " + " ".join(map(str, q)))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def loads(cls, text: str) -> "AbsorbingFamily":
        sets, base = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, tail = line.partition("|")
            s = tuple(int(x) for x in head.split())
            p, _, q = tail.partition(";")
            if len(s) != 6:
                raise AbsorberError(f"bad set line {line!r}")
            sets.append(s)
            base.append((canon(int(x) for x in p.split()), canon(int(x) for x in q.split())))
        return cls(tuple(sets), tuple(base))

    def check(self, g: ThreeGraph) -> bool:
        return all(p in g.edge_set and q in g.edge_set for p, q in self.base)


def family_budget(gamma: Fraction, n: int) -> int:
    return int(Fraction(gamma) ** 4 * n // 3)


def _triples_with_two_big(classes: Mapping[int, VertexClass], n: int) -> list[Triple]:
    return [
        t for t in combinations(range(n), 3)
        if sum(classes[v] is VertexClass.BIG for v in t) >= 2
    ]


def _base_of(g: ThreeGraph, s: Sequence[int]) -> tuple[Triple, Triple]:
    pm = perfect_on(g, s)
    assert pm is not None
    p, q = pm
    return canon(p), canon(q)


def build_absorbing_family(
    g: ThreeGraph,
    p: DegreeProfile,
    *,
    budget: int | None = None,
    seed: int = 0,
    force: bool = False,
    triples: Sequence[Sequence[int]] | None = None,
    method: str = "greedy",
    per_triple: int = 64,
) -> AbsorbingFamily:
    """Greedy disjoint family covering the requested triples at least once.

    ``triples`` defaults to every triple with two Big vertices, visited in a
    seeded random order. ``budget`` defaults to ``floor(gamma^4 n / 3)``.
    ``method="sample"`` instead keeps each candidate set independently with
    probability ``gamma^4 n / (2 C(n,2)^3)`` and then drops overlaps; it
    carries no guarantee at small ``n``.
    """
    if not force:
        check = satisfies_profile(g, p)
        if not check:
            raise ProfileViolation(
                f"degree profile fails at rank {check.violating_rank}: "
                f"{check.degree} < {check.required}"
            )
    if budget is None:
        budget = family_budget(p.gamma, g.n)
    classes = classify(g, p.gamma)
    todo = [canon(t) for t in triples] if triples is not None else _triples_with_two_big(classes, g.n)
    rng = random.Random(seed)
    if triples is None:
        rng.shuffle(todo)
    sets: list[SixSet] = []
    base: list[tuple[Triple, Triple]] = []
    used: set[int] = set()

    if method == "sample":
        from math import comb

        prob = Fraction(p.gamma) ** 4 * g.n / (2 * comb(g.n, 2) ** 3)
        for t in todo:
            if used & set(t):
                continue
            for s in enumerate_absorbing_sets(g, t, per_triple, avoid=used):
                if len(sets) >= budget:
                    break
                if rng.random() < prob and not used & set(s):
                    sets.append(s)
                    base.append(_base_of(g, s))
                    used |= set(s)
    elif method == "greedy":
        for t in todo:
            if len(sets) >= budget:
                break
            if any(not set(s) & set(t) and is_absorbing_set(g, s, t) for s in sets):
                continue
            if used & set(t):
                continue
            got = enumerate_absorbing_sets(g, t, 1, avoid=used)
            if got:
                s = got[0]
                sets.append(s)
                base.append(_base_of(g, s))
                used |= set(s)
    else:
        raise ValueError(f"unknown method {method!r}")

    coverage = {}
    for t in todo:
        coverage[t] = sum(1 for s in sets if not set(s) & set(t) and is_absorbing_set(g, s, t))
    short = tuple(t for t, c in coverage.items() if c == 0)
    return AbsorbingFamily(tuple(sets), tuple(base), coverage, short)


def partition_leftover(w: Iterable[int], classes: Mapping[int, VertexClass]) -> list[Triple]:
    """Split ``w`` into triples with two Big vertices each.

    Big vertices are paired in ascending order; the third vertex is the
    smallest unused non-Big vertex, or the next Big one when none is left.
    """
    w = sorted(set(w))
    if len(w) % 3:
        raise AbsorberError(f"|W|={len(w)} is not a multiple of 3")
    bigs = [v for v in w if classes[v] is VertexClass.BIG]
    others = [v for v in w if classes[v] is not VertexClass.BIG]
    if 3 * len(bigs) < 2 * len(w):
        raise AbsorberError(f"W has {len(bigs)} Big vertices, fewer than 2|W|/3")
    out = []
    while bigs or others:
        a, b = bigs[0], bigs[1]
        bigs = bigs[2:]
        if others:
            c, others = others[0], others[1:]
        else:
            c, bigs = bigs[0], bigs[1:]
        out.append(canon((a, b, c)))
    return out


def absorb(
    g: ThreeGraph,
    fam: AbsorbingFamily,
    w: Iterable[int],
    classes: Mapping[int, VertexClass],
) -> TupleSystem:
    """Matching covering exactly ``V(fam) | w``.

    Triples of the partition are assigned to distinct absorbing sets by
    bipartite augmenting paths; raises :class:`AbsorptionFailure` naming a
    triple that no free set can take.
    """
    w = set(w)
    if w & fam.vertices:
        raise AbsorberError("W meets the absorbing family")
    parts = partition_leftover(w, classes)
    options = [
        [k for k, s in enumerate(fam.sets) if is_absorbing_set(g, s, t)] for t in parts
    ]
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for k in options[i]:
            if k in seen:
                continue
            seen.add(k)
            if k not in owner or augment(owner[k], seen):
                owner[k] = i
                return True
        return False

    for i, t in enumerate(parts):
        if not augment(i, set()):
            raise AbsorptionFailure(t)
    edges: list[Triple] = []
    for k, s in enumerate(fam.sets):
        if k in owner:
            pm = perfect_on(g, s + parts[owner[k]])
            assert pm is not None
            edges.extend(canon(e) for e in pm)
        else:
            edges.extend(fam.base[k])
    return TupleSystem(tuple(edges))
