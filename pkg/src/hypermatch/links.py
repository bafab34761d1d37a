"""3-tuple link graphs, pair-link masks, stars and fans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import ThreeGraph, Triple, TupleSystem, canon

Pair = tuple[int, int]


class LinkError(ValueError):
    pass


def _pair(u: int, w: int) -> Pair:
    return (u, w) if u < w else (w, u)


@dataclass(frozen=True)
class LinkGraph:
    """Link graph of ``center`` with respect to a tuple system.

    Edges are unordered vertex pairs taken from two distinct tuples that form
    a hyperedge together with ``center``.
    """

    tuples: tuple[Triple, ...]
    center: int
    edges: frozenset[Pair]

    def degree(self, u: int) -> int:
        return sum(1 for e in self.edges if u in e)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def mask(self) -> int:
        """9-bit cross-pair mask; only defined for a link on two tuples."""
        if len(self.tuples) != 2:
            raise LinkError("mask is defined only for a link on exactly two tuples")
        e, f = self.tuples
        out = 0
        for a in range(3):
            for b in range(3):
                if _pair(e[a], f[b]) in self.edges:
                    out |= 1 << (3 * a + b)
        return out

    def matrix(self) -> list[list[int]]:
        """3x3 0/1 matrix, rows indexed by the first tuple."""
        m = self.mask
        return [[(m >> (3 * a + b)) & 1 for b in range(3)] for a in range(3)]

    def dump(self) -> str:
        e, f = self.tuples
        head = "     " + " ".join(f"{v:>3}" for v in f)
        rows = [f"{e[a]:>3} |" + " ".join(f"{x:>3}" for x in row) for a, row in enumerate(self.matrix())]
        return "\n".join([f"L_{self.center}", head, *rows])


def _check_center(u: TupleSystem, v: int) -> None:
    if v in u.vertices:
        raise LinkError(f"center {v} lies inside the tuple system")


def link_graph(g: ThreeGraph, u: TupleSystem | Iterable[Iterable[int]], v: int) -> LinkGraph:
    if not isinstance(u, TupleSystem):
        u = TupleSystem.of(u)
    _check_center(u, v)
    nbrs = g.pair_nbrs[v]
    tuples = u.tuples
    edges: set[Pair] = set()
    for i, e in enumerate(tuples):
        for f in tuples[i + 1:]:
            for a in e:
                row = nbrs[a]
                if not row:
                    continue
                for b in f:
                    if (row >> b) & 1:
                        edges.add(_pair(a, b))
    return LinkGraph(tuples, v, frozenset(edges))


def pair_link_mask(g: ThreeGraph, e: Triple, f: Triple, v: int) -> int:
    """Bit ``3*a + b`` set iff ``{v, e[a], f[b]}`` is an edge."""
    nbrs = g.pair_nbrs[v]
    out = 0
    for a in range(3):
        row = nbrs[e[a]]
        if not row:
            continue
        for b in range(3):
            if (row >> f[b]) & 1:
                out |= 1 << (3 * a + b)
    return out


def pair_link(g: ThreeGraph, e: Iterable[int], f: Iterable[int], v: int) -> LinkGraph:
    e, f = canon(e), canon(f)
    if set(e) & set(f):
        raise LinkError(f"tuples {e} and {f} intersect")
    if v in e or v in f:
        raise LinkError(f"center {v} lies inside the tuples")
    mask = pair_link_mask(g, e, f, v)
    return from_mask(e, f, v, mask)


def from_mask(e: Triple, f: Triple, v: int, mask: int) -> LinkGraph:
    edges = frozenset(
        _pair(e[a], f[b]) for a in range(3) for b in range(3) if (mask >> (3 * a + b)) & 1
    )
    return LinkGraph((e, f), v, edges)


def star_at(link: LinkGraph, u: int) -> bool:
    return link.degree(u) == 3


def fan_at(link: LinkGraph, ei: int, fj: int) -> bool:
    return star_at(link, ei) and star_at(link, fj)


def count_non_link_edges(g: ThreeGraph, m: TupleSystem | Iterable[Iterable[int]], x: int) -> int:
    """Edges at ``x`` that are not of the cross-pair form ``x e' f'``.

    These are edges meeting another uncovered vertex or using two vertices of
    one tuple.
    """
    if not isinstance(m, TupleSystem):
        m = TupleSystem.of(m)
    if x in m.vertices:
        raise LinkError(f"{x} is covered by the tuple system")
    owner = {v: i for i, t in enumerate(m.tuples) for v in t}
    count = 0
    for e in g.incidence[x]:
        a, b = (w for w in e if w != x)
        ta, tb = owner.get(a), owner.get(b)
        if ta is None or tb is None or ta == tb:
            count += 1
    return count
