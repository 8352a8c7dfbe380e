"""Independent brute-force oracles shared by the tests.

Nothing here calls the compiled kernels: graphs are plain edge sets and
cliques come from itertools.
"""
import itertools
import math
from collections import Counter

import pytest
from hypothesis import strategies as st

from gnpcover.graph import Graph

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# filled in by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------- hashing


def py_mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def py_fold(h: int, x: int) -> int:
    return py_mix(((h ^ x) + GOLDEN) & MASK64)


def py_key(seed: int, a: int, b: int = 0) -> int:
    return py_fold(py_fold(py_mix((seed + GOLDEN) & MASK64), a), b)


def py_unit(h: int) -> float:
    return (h >> 11) / 2.0**53


def py_gnp_edges(n: int, p: float, seed: int) -> set[tuple[int, int]]:
    key = py_key(seed, 1, 0)
    return {(u, v) for u in range(n) for v in range(u + 1, n)
            if py_unit(py_fold(py_fold(key, u), v)) < p}


# ---------------------------------------------------------------- cliques


def edge_set(g: Graph) -> set[tuple[int, int]]:
    return set(g.edge_list())


def brute_cliques(n: int, edges: set, j: int) -> list[tuple[int, ...]]:
    return [c for c in itertools.combinations(range(n), j)
            if all(pair in edges for pair in itertools.combinations(c, 2))]


def brute_per_edge(n: int, edges: set, j: int) -> Counter:
    counts = Counter()
    for c in brute_cliques(n, edges, j):
        for pair in itertools.combinations(c, 2):
            counts[pair] += 1
    return counts


def brute_omega(n: int, edges: set) -> int:
    best = 1 if n else 0
    for j in range(2, n + 1):
        if brute_cliques(n, edges, j):
            best = j
        else:
            break
    return best


def brute_maximal(n: int, edges: set) -> list[tuple[int, ...]]:
    cliques = [c for j in range(1, n + 1) for c in brute_cliques(n, edges, j)]
    sets = [set(c) for c in cliques]
    return sorted(c for c, s in zip(cliques, sets)
                  if not any(s < t for t in sets if len(t) == len(s) + 1))


def brute_theta1(n: int, edges: set) -> int:
    """Smallest subfamily of maximal cliques covering every edge (all subsets)."""
    if not edges:
        return 0
    masks = []
    index = {e: t for t, e in enumerate(sorted(edges))}
    for c in brute_maximal(n, edges):
        if len(c) >= 2:
            masks.append(sum(1 << index[pair] for pair in itertools.combinations(c, 2)))
    full = (1 << len(edges)) - 1
    for size in range(1, len(masks) + 1):
        for combo in itertools.combinations(masks, size):
            acc = 0
            for mk in combo:
                acc |= mk
            if acc == full:
                return size
    raise AssertionError("maximal cliques always cover")


# ---------------------------------------------------------------- strategies


@st.composite
def small_graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


@pytest.fixture
def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def comb(n, k):
    return math.comb(n, k)
