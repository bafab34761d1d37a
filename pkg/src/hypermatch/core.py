"""Canonical 3-graph storage, degrees, matchings, leaves and the text format."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Triple = tuple[int, int, int]


class GraphFormatError(ValueError):
    """Raised on malformed graph text or invalid edges."""


class VertexOutOfRange(GraphFormatError):
    pass


class DuplicateVertexInEdge(GraphFormatError):
    pass


class DuplicateEdge(GraphFormatError):
    pass


def canon(triple: Iterable[int]) -> Triple:
    a, b, c = sorted(int(v) for v in triple)
    return (a, b, c)


@dataclass(frozen=True)
class ThreeGraph:
    """A 3-uniform hypergraph on vertices ``0..n-1``.

    ``edges`` is a lexicographically sorted tuple of sorted triples. Build
    instances with :meth:`from_edges`, which validates and canonicalises.
    """

    n: int
    edges: tuple[Triple, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]], *, allow_duplicates: bool = False) -> "ThreeGraph":
        if n < 0:
            raise GraphFormatError(f"negative vertex count {n}")
        seen: set[Triple] = set()
        for raw in edges:
            verts = [int(v) for v in raw]
            if len(verts) != 3:
                raise GraphFormatError(f"edge {verts} does not have 3 vertices")
            if len(set(verts)) != 3:
                raise DuplicateVertexInEdge(f"edge {verts} repeats a vertex")
            for v in verts:
                if not 0 <= v < n:
                    raise VertexOutOfRange(f"vertex {v} not in 0..{n - 1}")
            e = canon(verts)
            if e in seen and not allow_duplicates:
                raise DuplicateEdge(f"edge {e} listed twice")
            seen.add(e)
        return cls(n, tuple(sorted(seen)))

    @classmethod
    def complete(cls, n: int) -> "ThreeGraph":
        return cls(n, tuple(combinations(range(n), 3)))

    @classmethod
    def empty(cls, n: int) -> "ThreeGraph":
        return cls(n, ())

    @cached_property
    def edge_set(self) -> frozenset[Triple]:
        return frozenset(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def pair_nbrs(self) -> tuple[tuple[int, ...], ...]:
        """``pair_nbrs[v][u]`` is a bitmask of all ``w`` with ``{v,u,w}`` an edge."""
        table = [[0] * self.n for _ in range(self.n)]
        for a, b, c in self.edges:
            table[a][b] |= 1 << c
            table[a][c] |= 1 << b
            table[b][a] |= 1 << c
            table[b][c] |= 1 << a
            table[c][a] |= 1 << b
            table[c][b] |= 1 << a
        return tuple(tuple(row) for row in table)

    @cached_property
    def incidence(self) -> tuple[tuple[Triple, ...], ...]:
        inc: list[list[Triple]] = [[] for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                inc[v].append(e)
        return tuple(tuple(row) for row in inc)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, a: int, b: int, c: int) -> bool:
        if a == b or b == c or a == c:
            return False
        return canon((a, b, c)) in self.edge_set

    def __contains__(self, triple: object) -> bool:
        try:
            return canon(triple) in self.edge_set  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return False

    def induced(self, vertices: Iterable[int]) -> "ThreeGraph":
        """Induced subgraph, relabelled to ``0..k-1`` in ascending id order.

        Use :meth:`induced_with_map` when the original ids are needed.
        """
        return self.induced_with_map(vertices)[0]

    def induced_with_map(self, vertices: Iterable[int]) -> tuple["ThreeGraph", tuple[int, ...]]:
        keep = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(keep)}
        sub = [
            (pos[a], pos[b], pos[c])
            for a, b, c in self.edges
            if a in pos and b in pos and c in pos
        ]
        return ThreeGraph(len(keep), tuple(sorted(sub))), keep

    def __repr__(self) -> str:
        return f"ThreeGraph(n={self.n}, m={self.m})"


def degree(g: ThreeGraph, v: int) -> int:
    if not 0 <= v < g.n:
        raise VertexOutOfRange(f"vertex {v} not in 0..{g.n - 1}")
    return g.degrees[v]


@dataclass(frozen=True)
class TupleSystem:
    """An ordered collection of pairwise-disjoint vertex triples.

    Used both for matchings and for phantom matchings, whose tuples need not
    be edges.
    """

    tuples: tuple[Triple, ...] = ()
    _vertices: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        fixed = tuple(canon(t) for t in self.tuples)
        object.__setattr__(self, "tuples", fixed)
        seen: set[int] = set()
        for t in fixed:
            if len(set(t)) != 3:
                raise DuplicateVertexInEdge(f"tuple {t} repeats a vertex")
            for v in t:
                if v in seen:
                    raise ValueError(f"tuples overlap at vertex {v}")
                seen.add(v)
        object.__setattr__(self, "_vertices", frozenset(seen))

    @classmethod
    def of(cls, tuples: Iterable[Iterable[int]]) -> "TupleSystem":
        return cls(tuple(canon(t) for t in tuples))

    @property
    def vertices(self) -> frozenset[int]:
        return self._vertices

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.tuples)

    def replace(self, old: Iterable[Triple], new: Iterable[Triple]) -> "TupleSystem":
        drop = {canon(t) for t in old}
        kept = [t for t in self.tuples if t not in drop]
        return TupleSystem(tuple(kept) + tuple(canon(t) for t in new))

    def real_edges(self, g: ThreeGraph) -> "TupleSystem":
        return TupleSystem(tuple(t for t in self.tuples if t in g.edge_set))


def is_matching(g: ThreeGraph, m: Iterable[Iterable[int]]) -> bool:
    seen: set[int] = set()
    for t in m:
        t = tuple(t)
        if len(t) != 3 or len(set(t)) != 3:
            return False
        if canon(t) not in g.edge_set:
            return False
        for v in t:
            if v in seen:
                return False
            seen.add(v)
    return True


def perfect_on(g: ThreeGraph, verts: Sequence[int]) -> list[Triple] | None:
    """Perfect matching of ``g[verts]`` by plain backtracking (tiny sets only)."""
    vs = sorted(verts)
    if not vs:
        return []
    v, rest = vs[0], vs[1:]
    nbrs = g.pair_nbrs[v]
    for i, a in enumerate(rest):
        row = nbrs[a]
        if not row:
            continue
        for b in rest[i + 1:]:
            if (row >> b) & 1:
                sub = perfect_on(g, [w for w in rest if w != a and w != b])
                if sub is not None:
                    return [(v, a, b), *sub]
    return None


def leave(g: ThreeGraph, m: TupleSystem | Iterable[Iterable[int]]) -> frozenset[int]:
    """Vertices of ``g`` not covered by ``m``."""
    if not isinstance(m, TupleSystem):
        m = TupleSystem.of(m)
    for v in m.vertices:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{g.n - 1}")
    return frozenset(range(g.n)) - m.vertices


def parse(text: str) -> ThreeGraph:
    """Parse the ``n m`` header + one ``a b c`` line per edge format."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line)
    if not rows:
        raise GraphFormatError("missing header line")
    head = rows[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"malformed header {rows[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"malformed header {rows[0]!r}") from exc
    if n < 0 or m < 0:
        raise GraphFormatError(f"malformed header {rows[0]!r}")
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for line in body:
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"malformed edge line {line!r}")
        try:
            edges.append(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise GraphFormatError(f"malformed edge line {line!r}") from exc
    return ThreeGraph.from_edges(n, edges)


def serialize(g: ThreeGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> ThreeGraph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_graph(g: ThreeGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(g))
