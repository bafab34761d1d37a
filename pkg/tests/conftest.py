"""Shared helpers: naive reference implementations used as oracles.

Nothing here imports the search code it is compared against.
"""

import random
from itertools import combinations

import pytest
from hypothesis import strategies as st

from hypermatch.core import ThreeGraph


def naive_has_pm(n, edges):
    """Enumerate every partition of 0..n-1 into triples."""
    if n % 3:
        return False
    es = {frozenset(e) for e in edges}

    def go(rest):
        if not rest:
            return True
        v = rest[0]
        for a, b in combinations(rest[1:], 2):
            if frozenset((v, a, b)) in es:
                if go([w for w in rest if w not in (v, a, b)]):
                    return True
        return False

    return go(list(range(n)))


def naive_max_matching(n, edges):
    es = [frozenset(e) for e in edges]
    best = 0

    def go(i, used, size):
        nonlocal best
        best = max(best, size)
        if size + (n - len(used)) // 3 <= best:
            return
        for j in range(i, len(es)):
            if not es[j] & used:
                go(j + 1, used | es[j], size + 1)

    go(0, frozenset(), 0)
    return best


def random_graph(rng, n, p):
    return ThreeGraph.from_edges(n, [e for e in combinations(range(n), 3) if rng.random() < p])


@st.composite
def graphs(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    triples = list(combinations(range(n), 3))
    if not triples:
        return ThreeGraph.empty(n)
    picks = draw(st.lists(st.sampled_from(triples), unique=True, max_size=len(triples)))
    return ThreeGraph.from_edges(n, picks)


@pytest.fixture
def rng():
    return random.Random(20261015)


# acceptance lines, printed once at the end of the run
_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
