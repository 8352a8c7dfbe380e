"""Reference points for cover sizes: the counting lower bound, an exact
minimum cover for tiny graphs, and a greedy heuristic."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cliques import max_clique, maximal_cliques
from .cover import CliqueCover
from .errors import SizingError
from .graph import Graph, edge_index, pair_count

EXACT_NODE_CAP = 12


@dataclass(frozen=True)
class BoundReport:
    m: int
    omega: int
    lower: int
    c1_reference: float


def c1_reference(p: float) -> float:
    """Lower-bound constant ``(ln b)^2 p / 2`` with ``b = 1/p``."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    return math.log(1.0 / p) ** 2 * p / 2


def lower_bound(g: Graph, p: float | None = None) -> BoundReport:
    """``ceil(m / C(omega, 2))``: no clique covers more than ``C(omega, 2)`` edges.

    ``p`` only feeds the reference constant; it defaults to the edge density.
    """
    if p is None:
        p = g.m / pair_count(g.n) if g.n > 1 else 1.0
    c1 = c1_reference(p) if p > 0 else 0.0
    if g.m == 0:
        return BoundReport(0, 1 if g.n else 0, 0, c1)
    omega, _ = max_clique(g)
    per = math.comb(omega, 2)
    return BoundReport(g.m, omega, -(-g.m // per), c1)


def _edge_masks(g: Graph, cliques: list[tuple[int, ...]]) -> list[int]:
    """Each clique as a bitmask over the graph's edge list."""
    pos = {int(e): t for t, e in enumerate(g.edge_indices())}
    masks = []
    for c in cliques:
        bits = 0
        for a in range(len(c)):
            for b in range(a + 1, len(c)):
                bits |= 1 << pos[edge_index(g.n, c[a], c[b])]
        masks.append(bits)
    return masks


def exact_theta1(g: Graph, cap: int = EXACT_NODE_CAP) -> tuple[int, CliqueCover]:
    """Minimum edge clique cover by branch and bound.

    Only maximal cliques are branched on: growing a cover member to a maximal
    clique containing it keeps the cover valid and its size unchanged, so some
    optimum uses maximal cliques only.  The bound at a node is the number of
    uncovered edges over ``C(omega, 2)``.
    """
    if g.n > cap:
        raise SizingError(f"exact clique cover is capped at n={cap}, got n={g.n}")
    if g.m == 0:
        return 0, CliqueCover()
    cliques = [c for c in maximal_cliques(g) if len(c) >= 2]
    masks = _edge_masks(g, cliques)
    per = max(math.comb(len(c), 2) for c in cliques)
    # covering[e]: cliques containing edge e, largest first, ties by position
    covering = [sorted((t for t, mk in enumerate(masks) if mk >> e & 1),
                       key=lambda t: (-bin(masks[t]).count("1"), t))
                for e in range(g.m)]
    greedy = greedy_cover(g)
    best = [len(greedy), [tuple(c) for c in greedy]]
    chosen: list[int] = []

    def search(uncovered: int):
        left = bin(uncovered).count("1")
        if left == 0:
            if len(chosen) < best[0]:
                best[0] = len(chosen)
                best[1] = [cliques[t] for t in chosen]
            return
        if len(chosen) + -(-left // per) >= best[0]:
            return
        # branch on the uncovered edge with the fewest covering cliques
        edge, options = -1, None
        rest = uncovered
        while rest:
            low = rest & -rest
            e = low.bit_length() - 1
            rest ^= low
            if options is None or len(covering[e]) < len(options):
                edge, options = e, covering[e]
        for t in options:
            chosen.append(t)
            search(uncovered & ~masks[t])
            chosen.pop()

    search((1 << g.m) - 1)
    return best[0], CliqueCover(best[1])


def greedy_cover(g: Graph) -> CliqueCover:
    """Take the first uncovered edge, grow it to a maximal clique by repeatedly
    adding the common neighbour that covers the most uncovered edges (lowest
    index on ties)."""
    if g.m == 0:
        return CliqueCover()
    eu, ev = g.edges()
    flat, offsets = _kernels.greedy_cover(g.dense().astype(np.uint8), eu, ev)
    flat = flat.tolist()
    return CliqueCover(flat[offsets[t]:offsets[t + 1]] for t in range(len(offsets) - 1))
