"""Clique enumeration and counting restricted to an active edge set.

``X(S, j)`` below is the number of ``j``-cliques of the active subgraph that
contain the clique ``S``.  Counting works by extension: the ``j``-cliques
through ``S`` are exactly ``S`` plus a ``(j - |S|)``-clique of the common
active neighbourhood of ``S``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .errors import NotACliqueError, SizingError
from .graph import EdgeSet, Graph, edge_index, pair_count, pack_rows

Clique = tuple[int, ...]

DEFAULT_CLIQUE_BUDGET = 1e8
MAXIMAL_CLIQUE_CAP = 32


@dataclass(frozen=True)
class CliqueStats:
    """Counts of active ``j``-cliques.

    ``per_edge[e]`` is ``X_u`` for the edge with canonical index ``e`` (zero for
    pairs outside the active set).  ``zeta`` is the mean count per active edge,
    ``N * C(j, 2) / m_active``.
    """

    j: int
    per_edge: np.ndarray
    x_star_2: int
    x_star_3: int
    N: int
    m_active: int
    zeta: float


@dataclass(frozen=True)
class CountEstimate:
    estimate: float
    stderr: float
    accepted: int
    samples: int


def _active(g: Graph, active: EdgeSet | None) -> EdgeSet:
    if active is None:
        return EdgeSet.full(g)
    if active.graph is not g and active.graph != g:
        raise ValueError("edge set belongs to a different graph")
    return active


def _int_rows(adj: np.ndarray) -> list[int]:
    return [int.from_bytes(row.astype("<u8").tobytes(), "little") for row in adj]


def _require_clique(S: Clique, g: Graph, active: EdgeSet) -> None:
    for a in range(len(S)):
        for b in range(a + 1, len(S)):
            if (S[a], S[b]) not in active:
                raise NotACliqueError(f"{S} is not a clique of the active edge set")


def _canonical(S: Iterable[int], n: int) -> Clique:
    S = tuple(sorted(int(v) for v in S))
    if len(set(S)) != len(S) or any(v < 0 or v >= n for v in S):
        raise ValueError(f"invalid vertex set {S}")
    return S


def cliques_containing(S: Iterable[int], j: int, g: Graph,
                       active: EdgeSet | None = None) -> Iterator[Clique]:
    """Yield the active ``j``-cliques containing ``S`` in lexicographic order."""
    active = _active(g, active)
    S = _canonical(S, g.n)
    if not len(S) <= j <= g.n:
        raise ValueError(f"need |S| <= j <= n, got |S|={len(S)}, j={j}, n={g.n}")
    _require_clique(S, g, active)
    rows = _int_rows(active.adjacency())
    cand = (1 << g.n) - 1
    for v in S:
        cand &= rows[v]
    need = j - len(S)

    def extend(chosen: list[int], cand: int, need: int):
        if need == 0:
            yield tuple(sorted(S + tuple(chosen)))
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            yield from extend(chosen, cand & rows[v], need - 1)
            chosen.pop()

    yield from extend([], cand, need)


def count_containing(S: Iterable[int], j: int, g: Graph,
                     active: EdgeSet | None = None) -> int:
    """``X(S, j)``: number of active ``j``-cliques containing ``S``."""
    active = _active(g, active)
    S = _canonical(S, g.n)
    if not len(S) <= j <= g.n:
        raise ValueError(f"need |S| <= j <= n, got |S|={len(S)}, j={j}, n={g.n}")
    _require_clique(S, g, active)
    verts = np.array(S, dtype=np.int64)
    return int(_kernels.count_in_common(active.adjacency(), verts, j - len(S)))


def count_per_edge(j: int, g: Graph, active: EdgeSet | None = None) -> CliqueStats:
    if j < 2:
        raise ValueError("clique size must be at least 2")
    active = _active(g, active)
    per_edge = np.zeros(pair_count(g.n), dtype=np.int64)
    if active.size == 0:
        return CliqueStats(j, per_edge, 0, 0, 0, 0, 0.0)
    adj = active.adjacency()
    us, vs = active.pairs()
    counts = _kernels.per_edge_counts(adj, us, vs, j - 2)
    per_edge[edge_index(g.n, us, vs)] = counts
    pairs_per_clique = math.comb(j, 2)
    total = int(counts.sum())
    if total % pairs_per_clique:
        raise AssertionError("per-edge counts are inconsistent with clique total")
    N = total // pairs_per_clique
    if j == 2:
        x3 = 0
    elif j == 3:
        x3 = 1 if N else 0
    else:
        x3 = max(int(_kernels.triangle_max(adj, j - 3)), 0)
    return CliqueStats(
        j=j,
        per_edge=per_edge,
        x_star_2=int(counts.max()),
        x_star_3=x3,
        N=N,
        m_active=active.size,
        zeta=N * pairs_per_clique / active.size,
    )


def expected_count(s: int, j: int, i: int, n: int, p: float) -> float:
    """Predicted number of active ``j``-cliques through a fixed active ``s``-clique.

    Models the uncovered graph at iteration ``i`` (``i = 1`` is the untouched
    graph) as G(n, p e^{1-i}):

        C(n - s, j - s) * (e^{i-1} / p) ** (C(s, 2) - C(j, 2))
    """
    if not 0 <= s <= j <= n:
        raise ValueError(f"need 0 <= s <= j <= n, got s={s}, j={j}, n={n}")
    if i < 1:
        raise ValueError("iterations are numbered from 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if s == j:
        return 1.0
    if p == 0.0:
        raise ValueError("p = 0 admits no cliques beyond the given one")
    # exact binomial keeps ratio identities at full double precision
    log_rate = -math.log(p) + (i - 1)
    expo = math.log(math.comb(n - s, j - s)) + (math.comb(s, 2) - math.comb(j, 2)) * log_rate
    try:
        return math.exp(expo)
    except OverflowError:
        return math.inf


def max_clique(g: Graph) -> tuple[int, Clique]:
    """Exact clique number with a witness."""
    if g.n == 0:
        return 0, ()
    dense = g.dense()
    # high degree first tightens the colouring bound
    order = np.argsort(-dense.sum(axis=1), kind="stable")
    adj = pack_rows(dense[np.ix_(order, order)])
    witness = _kernels.max_clique(adj)
    clique = tuple(sorted(int(order[v]) for v in witness))
    return len(clique), clique


def maximal_cliques(g: Graph, cap: int = MAXIMAL_CLIQUE_CAP) -> Iterator[Clique]:
    """All inclusion-maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    if g.n > cap:
        raise SizingError(f"maximal clique enumeration is capped at n={cap}, got n={g.n}")
    rows = _int_rows(g.adjacency)
    found: list[Clique] = []

    def bk(R: list[int], P: int, X: int):
        if not P and not X:
            found.append(tuple(sorted(R)))
            return
        pivot_pool = P | X
        pivot, best = -1, -1
        while pivot_pool:
            low = pivot_pool & -pivot_pool
            u = low.bit_length() - 1
            pivot_pool ^= low
            c = bin(P & rows[u]).count("1")
            if c > best:
                pivot, best = u, c
        todo = P & ~rows[pivot]
        while todo:
            low = todo & -todo
            v = low.bit_length() - 1
            todo ^= low
            R.append(v)
            bk(R, P & rows[v], X & rows[v])
            R.pop()
            P &= ~low
            X |= low

    if g.n:
        bk([], (1 << g.n) - 1, 0)
    yield from sorted(found)


def estimate_clique_count(j: int, g: Graph, active: EdgeSet | None, samples: int,
                          seed: int) -> CountEstimate:
    """Rejection-sampling estimate of the number of active ``j``-cliques.

    Uniform ``j``-subsets are drawn; the accepted fraction times ``C(n, j)`` is
    unbiased.
    """
    from . import rng

    if samples < 1:
        raise ValueError("samples must be positive")
    active = _active(g, active)
    n = g.n
    if j > n or j < 1:
        return CountEstimate(0.0, 0.0, 0, samples)
    total = math.comb(n, j)
    dense = active.as_graph().dense() if active.size else np.zeros((n, n), bool)
    gen = rng.generator(seed)
    accepted = 0
    drawn = 0
    pairs = [(a, b) for a in range(j) for b in range(a + 1, j)]
    # ordered draws with repeats rejected are uniform over j-subsets, but only
    # cheap while repeats are rare; otherwise take the j smallest of n random keys
    by_rejection = j * (j - 1) <= 2 * n
    while drawn < samples:
        if by_rejection:
            batch = min(1 << 17, samples - drawn)
            rows = gen.integers(0, n, size=(batch * 2 + 16, j))
            rows.sort(axis=1)
            distinct = np.all(np.diff(rows, axis=1) > 0, axis=1)
            rows = rows[distinct][:batch]
        else:
            batch = min(max(1, (1 << 22) // n), samples - drawn)
            keys = gen.random((batch, n))
            rows = np.argpartition(keys, j - 1, axis=1)[:, :j]
        ok = np.ones(len(rows), dtype=bool)
        for a, b in pairs:
            ok &= dense[rows[:, a], rows[:, b]]
        accepted += int(ok.sum())
        drawn += len(rows)
    phat = accepted / drawn
    return CountEstimate(
        estimate=total * phat,
        stderr=total * math.sqrt(phat * (1 - phat) / drawn),
        accepted=accepted,
        samples=drawn,
    )


def check_budget(j: int, i: int, g: Graph, active: EdgeSet, p: float,
                 budget: float = DEFAULT_CLIQUE_BUDGET, samples: int = 20000,
                 seed: int = 0) -> tuple[float, float]:
    """Refuse enumeration when either the model or a sample predicts > ``budget`` cliques.

    Returns ``(model prediction, sampled estimate)``.
    """
    predicted = expected_count(0, j, i, g.n, p) if j <= g.n else 0.0
    sampled = estimate_clique_count(j, g, active, samples, seed).estimate
    worst = max(predicted, sampled)
    if worst > budget:
        raise SizingError(
            f"iteration {i}: about {worst:.3g} active {j}-cliques predicted, "
            f"budget is {budget:.3g}",
            iteration=i, clique_size=j, predicted=worst,
        )
    return predicted, sampled
