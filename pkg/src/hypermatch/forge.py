"""Extremal constructions and random instances with a planted degree profile.

Every barrier puts its special set ``A`` on the lowest vertex ids, so that
under ``(degree, id)`` ordering the ``A`` vertices take the low ranks.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, comb

from .core import ThreeGraph
from .degree_model import DegreeProfile, InvalidProfile, ProfileKind, parse_rational, satisfies_profile


class BadInstance(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    def __init__(self, message: str, closest: ThreeGraph, deficit: int) -> None:
        super().__init__(message)
        self.closest = closest
        self.deficit = deficit


def _need_div3(n: int, lo: int = 6) -> None:
    if n < lo or n % 3:
        raise BadInstance(f"n must be a multiple of 3 with n >= {lo}, got {n}")


def gen_intro_barrier(n: int) -> ThreeGraph:
    """Every triple meeting ``A = {0..n/3-2}``."""
    _need_div3(n)
    a = n // 3 - 1
    return ThreeGraph.from_edges(n, [e for e in combinations(range(n), 3) if e[0] < a])


def gen_space_barrier(n: int) -> ThreeGraph:
    """Every triple with at most one vertex in ``A = {0..n/3}``."""
    _need_div3(n)
    a = n // 3 + 1
    return ThreeGraph.from_edges(n, [e for e in combinations(range(n), 3) if e[1] >= a])


def gen_parity_barrier(n: int) -> ThreeGraph:
    """Every triple meeting ``A = {0..n/3-1}`` in 0 or 2 vertices; needs n/3 odd."""
    _need_div3(n, lo=3)
    a = n // 3
    if a % 2 == 0:
        raise BadInstance(f"n/3 must be odd, got n={n}")
    return ThreeGraph.from_edges(
        n, [e for e in combinations(range(n), 3) if sum(v < a for v in e) in (0, 2)]
    )


def gen_complete(n: int) -> ThreeGraph:
    if n < 0:
        raise BadInstance("n must be non-negative")
    return ThreeGraph.complete(n)


def planted_targets(n: int, gamma: Fraction, t: int) -> list[int]:
    """Integer degree floors for vertices ``0..n-1`` (vertex ``i`` plays rank ``i+1``)."""
    p = DegreeProfile(gamma, t, ProfileKind.MAIN)
    return [ceil(p.threshold(n, r)) for r in range(1, n + 1)]


# Number of low endpoints, in the order edge batches are thinned.
COUPLED_FIRST = (3, 2, 1)
SINGLE_FIRST = (1, 2, 3)


def _plant(n: int, targets: list[int], rng: random.Random, order: tuple[int, ...]) -> ThreeGraph:
    low = n // 3
    deg = [comb(n - 1, 2)] * n
    alive = set(combinations(range(n), 3))
    for k in order:
        batch = [e for e in sorted(alive) if sum(v < low for v in e) == k]
        rng.shuffle(batch)
        for e in batch:
            if all(deg[v] > targets[v] for v in e):
                alive.discard(e)
                for v in e:
                    deg[v] -= 1
    return ThreeGraph.from_edges(n, sorted(alive))


def gen_planted_profile(
    n: int,
    gamma: Fraction | str,
    t: int,
    seed: int = 0,
    *,
    retries: int = 8,
    order: tuple[int, ...] = COUPLED_FIRST,
) -> ThreeGraph:
    """Thin a complete 3-graph toward a stepped degree profile.

    Vertex ``i < n/3`` is lowered toward the floor of rank ``i+1``; the rest
    never drop below the top floor. Edges are removed in batches by their
    number of low endpoints (``order``), each batch in seeded random order.
    Removing edges inside the low set first spends no degree of the high
    vertices, which is what lets the low targets be reached exactly;
    ``SINGLE_FIRST`` exhausts the high vertices' slack early. Because no
    vertex is ever pushed below its floor the output satisfies the profile
    whenever the complete graph does; the check is repeated regardless.
    """
    gamma = parse_rational(gamma) if isinstance(gamma, str) else Fraction(gamma)
    profile = DegreeProfile(gamma, t, ProfileKind.MAIN)
    profile.check_valid(n)
    targets = planted_targets(n, gamma, t)
    best: ThreeGraph | None = None
    best_gap = None
    for attempt in range(retries):
        rng = random.Random(f"{seed}:{attempt}")
        g = _plant(n, targets, rng, order)
        if satisfies_profile(g, profile):
            return g
        gap = sum(max(0, need - d) for need, d in zip(targets, g.degrees))
        if best_gap is None or gap < best_gap:
            best, best_gap = g, gap
    assert best is not None and best_gap is not None
    raise RetriesExhausted(
        f"no planted instance for n={n}, gamma={gamma}, t={t} after {retries} tries",
        best,
        best_gap,
    )


class Family(enum.Enum):
    INTRO = "intro"
    SPACE = "space"
    PARITY = "parity"
    COMPLETE = "complete"
    PLANTED = "planted"


@dataclass(frozen=True)
class InstanceSpec:
    family: Family
    n: int
    gamma: Fraction | None = None
    t: int = 0
    seed: int = 0

    @classmethod
    def parse(cls, text: str) -> "InstanceSpec":
        head, _, rest = text.strip().partition(":")
        try:
            family = Family(head.strip().lower())
        except ValueError as exc:
            raise BadInstance(f"unknown instance family {head!r}") from exc
        fields: dict[str, str] = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, val = part.partition("=")
            if not eq:
                raise BadInstance(f"malformed field {part!r}")
            fields[key.strip()] = val.strip()
        if "n" not in fields:
            raise BadInstance("instance spec needs n=")
        n = int(fields.pop("n"))
        gamma = parse_rational(fields.pop("gamma")) if "gamma" in fields else None
        t = int(fields.pop("t", "0"))
        seed = int(fields.pop("seed", "0"))
        if fields:
            raise BadInstance(f"unknown fields {sorted(fields)}")
        if family is Family.PLANTED and gamma is None:
            raise BadInstance("planted instances need gamma=")
        return cls(family, n, gamma, t, seed)

    def build(self) -> ThreeGraph:
        if self.family is Family.INTRO:
            return gen_intro_barrier(self.n)
        if self.family is Family.SPACE:
            return gen_space_barrier(self.n)
        if self.family is Family.PARITY:
            return gen_parity_barrier(self.n)
        if self.family is Family.COMPLETE:
            return gen_complete(self.n)
        assert self.gamma is not None
        try:
            return gen_planted_profile(self.n, self.gamma, self.t, self.seed)
        except InvalidProfile as exc:
            raise BadInstance(str(exc)) from exc

    def __str__(self) -> str:
        parts = [f"n={self.n}"]
        if self.gamma is not None:
            parts.append(f"gamma={self.gamma}")
        if self.family is Family.PLANTED:
            parts += [f"t={self.t}", f"seed={self.seed}"]
        return f"{self.family.value}:" + ",".join(parts)


def looks_like_spec(text: str) -> bool:
    head = text.partition(":")[0].strip().lower()
    return ":" in text and head in {f.value for f in Family}
