"""Degree-sequence threshold curves, the degree-rank bijection and vertex classes.

Every accept/reject decision here is exact: thresholds are
:class:`fractions.Fraction` values and integer degrees are compared against
them without floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

from .core import ThreeGraph

ONE_THIRD = Fraction(1, 3)
FOUR_NINTHS = Fraction(4, 9)
FIVE_NINTHS = Fraction(5, 9)


class ProfileKind(enum.Enum):
    MAIN = "main"
    ALMOST = "almost"
    ABSORBING = "absorbing"


class InvalidProfile(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal ``p/q`` (or an integer). Decimals are rejected."""
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"gamma must be a rational literal p/q, got {text!r}")
    return Fraction(s)


def max_step(kind: ProfileKind, n: int) -> int:
    """Largest admissible step count ``t`` for ``n`` vertices.

    ``t <= (1 - sqrt(2/3)) n`` for MAIN/ABSORBING and ``t <= n / (3 sqrt 2)``
    for ALMOST, both decided by integer squaring.
    """
    t = 0
    while t + 1 <= n and step_valid(kind, n, t + 1):
        t += 1
    return t


def step_valid(kind: ProfileKind, n: int, t: int) -> bool:
    if t < 0:
        return False
    if kind is ProfileKind.ALMOST:
        return 18 * t * t <= n * n
    return t <= n and 3 * (n - t) ** 2 >= 2 * n * n


@dataclass(frozen=True)
class DegreeProfile:
    gamma: Fraction
    t: int
    kind: ProfileKind = ProfileKind.MAIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.gamma <= 0:
            raise InvalidProfile(f"gamma must be positive, got {self.gamma}")
        if self.t < 0:
            raise InvalidProfile(f"step count must be non-negative, got {self.t}")

    def check_valid(self, n: int) -> None:
        if not step_valid(self.kind, n, self.t):
            raise InvalidProfile(
                f"t={self.t} too large for {self.kind.value} profile on n={n} "
                f"(max {max_step(self.kind, n)})"
            )

    def threshold(self, n: int, rank: int) -> Fraction:
        return threshold_value(self.kind, n, self.gamma, self.t, rank)

    @classmethod
    def parse(cls, text: str) -> "DegreeProfile":
        """Parse ``"main:gamma=1/100,t=3"`` style strings."""
        head, _, rest = text.strip().partition(":")
        try:
            kind = ProfileKind(head.strip().lower())
        except ValueError as exc:
            raise InvalidProfile(f"unknown profile kind {head!r}") from exc
        fields: dict[str, str] = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, val = part.partition("=")
            if not eq:
                raise InvalidProfile(f"malformed profile field {part!r}")
            fields[key.strip()] = val.strip()
        if "gamma" not in fields:
            raise InvalidProfile("profile needs gamma=p/q")
        gamma = parse_rational(fields.pop("gamma"))
        t = int(fields.pop("t", "0"))
        if fields:
            raise InvalidProfile(f"unknown profile fields {sorted(fields)}")
        return cls(gamma, t, kind)

    def __str__(self) -> str:
        return f"{self.kind.value}:gamma={self.gamma},t={self.t}"


def threshold_value(kind: ProfileKind, n: int, gamma: Fraction, t: int, rank: int) -> Fraction:
    """Lower bound demanded of the ``rank``-th smallest degree (1-based).

    Rank 1 is evaluated against the stepped curve at ``i = 1`` for every kind.
    """
    if not 1 <= rank <= n:
        raise ValueError(f"rank {rank} outside 1..{n}")
    gamma = Fraction(gamma)
    pairs = comb(n, 2)
    boost = 4 * gamma if kind is ProfileKind.ALMOST else gamma
    if 3 * rank > n:
        if kind is ProfileKind.ABSORBING:
            return FIVE_NINTHS * pairs
        return (FIVE_NINTHS + boost) * pairs
    if rank > t:
        return (FOUR_NINTHS + boost) * pairs
    if kind is ProfileKind.ABSORBING:
        return (ONE_THIRD + boost) * pairs
    return (ONE_THIRD + boost) * pairs + rank * t


@dataclass(frozen=True)
class IndexMap:
    """Vertices ordered by ``(degree, id)``; ranks are 1-based."""

    order: tuple[int, ...]
    rank_of: tuple[int, ...]
    degrees: tuple[int, ...]

    def rank(self, v: int) -> int:
        return self.rank_of[v]

    def sorted_degrees(self) -> list[int]:
        return [self.degrees[v] for v in self.order]


def index_map(g: ThreeGraph) -> IndexMap:
    deg = g.degrees
    order = tuple(sorted(range(g.n), key=lambda v: (deg[v], v)))
    rank_of = [0] * g.n
    for i, v in enumerate(order, start=1):
        rank_of[v] = i
    return IndexMap(order, tuple(rank_of), deg)


class VertexClass(enum.IntEnum):
    SMALL = 0
    MEDIUM = 1
    BIG = 2

    @property
    def not_small(self) -> bool:
        return self is not VertexClass.SMALL


def class_of(deg: int, n: int, gamma: Fraction, *, big_cut: Fraction | None = None) -> VertexClass:
    pairs = comb(n, 2)
    big = (FIVE_NINTHS + gamma) * pairs if big_cut is None else big_cut
    if deg >= big:
        return VertexClass.BIG
    if deg >= (FOUR_NINTHS + gamma) * pairs:
        return VertexClass.MEDIUM
    return VertexClass.SMALL


def classify(g: ThreeGraph, gamma: Fraction | int | str) -> dict[int, VertexClass]:
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return {v: class_of(d, g.n, gamma) for v, d in enumerate(g.degrees)}


def relaxed_classes(g: ThreeGraph, gamma: Fraction) -> dict[int, VertexClass]:
    """Classes with the big cut lowered to ``(5/9 - gamma/5) C(n,2)``.

    This is the class test used when absorbing a leftover set.
    """
    gamma = Fraction(gamma)
    cut = (FIVE_NINTHS - gamma / 5) * comb(g.n, 2)
    return {v: class_of(d, g.n, gamma, big_cut=cut) for v, d in enumerate(g.degrees)}


def class_members(classes: Mapping[int, VertexClass], cls: VertexClass) -> list[int]:
    return sorted(v for v, c in classes.items() if c is cls)


@dataclass(frozen=True)
class ProfileCheck:
    satisfied: bool
    violating_rank: int | None = None
    degree: int | None = None
    required: Fraction | None = None

    def __bool__(self) -> bool:
        return self.satisfied


def satisfies_profile(g: ThreeGraph, p: DegreeProfile) -> ProfileCheck:
    p.check_valid(g.n)
    im = index_map(g)
    for rank, d in enumerate(im.sorted_degrees(), start=1):
        need = p.threshold(g.n, rank)
        if d < need:
            return ProfileCheck(False, rank, d, need)
    return ProfileCheck(True)
