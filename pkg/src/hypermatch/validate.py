"""Stand-alone matching validator.

Deliberately written against plain Python sets so that it shares no code
with anything that builds matchings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Validation:
    ok: bool
    perfect: bool
    covered: int
    problems: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"ok": self.ok, "perfect": self.perfect, "covered": self.covered, "problems": list(self.problems)}


def validate(n: int, edges: Iterable[Iterable[int]], matching: Iterable[Iterable[int]]) -> Validation:
    """Check disjointness, edge membership and coverage of ``matching``."""
    edge_set = {frozenset(e) for e in edges}
    seen: set[int] = set()
    problems = []
    for t in matching:
        t = list(t)
        s = frozenset(t)
        if len(t) != 3 or len(s) != 3:
            problems.append(f"{t} is not a triple of distinct vertices")
            continue
        if s not in edge_set:
            problems.append(f"{sorted(s)} is not an edge")
        clash = seen & s
        if clash:
            problems.append(f"{sorted(s)} reuses vertices {sorted(clash)}")
        if any(v < 0 or v >= n for v in s):
            problems.append(f"{sorted(s)} leaves the vertex range")
        seen |= s
    ok = not problems
    return Validation(ok, ok and seen == set(range(n)), len(seen), tuple(problems))
