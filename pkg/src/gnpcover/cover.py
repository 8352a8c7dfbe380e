"""The randomized nibble that covers the edges of G(n, p) with cliques.

Iteration ``i`` works on the uncovered edges ``E_i``:

* Step A keeps every active ``k_i``-clique independently with probability
  ``1 / X*`` where ``X*`` is the largest number of active ``k_i``-cliques
  through a single active edge.
* Step B adds each edge missed by Step A, as a 2-clique, with probability
  ``rho(X_u, X*)``.  This equalises the chance of an edge staying uncovered to
  exactly ``e^{-1} - 1/X*`` whatever its own count ``X_u``.

Edges left after the last iteration are added as 2-cliques.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import _kernels, rng
from .cliques import DEFAULT_CLIQUE_BUDGET, Clique, CliqueStats, check_budget, count_per_edge
from .errors import GraphParseError, SizingError
from .graph import EdgeSet, Graph, edge_index, edge_pair, pair_count

INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class CoverParams:
    alpha: float = 0.55
    p: float = 0.5
    i0_override: int | None = None
    schedule_override: tuple[int, ...] | None = None
    rng_seed: int = 0
    clique_budget: float = DEFAULT_CLIQUE_BUDGET

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.i0_override is not None and self.i0_override < 0:
            raise ValueError("i0_override must be non-negative")
        if self.schedule_override is not None:
            sched = tuple(int(k) for k in self.schedule_override)
            if any(k < 3 for k in sched) or any(a < b for a, b in zip(sched, sched[1:])):
                raise ValueError("schedule_override must be non-increasing sizes >= 3")
            object.__setattr__(self, "schedule_override", sched)
        rng.check_seed(self.rng_seed)


@dataclass(frozen=True)
class Schedule:
    k: int
    i0: int
    sizes: tuple[int, ...]

    @property
    def truncated(self) -> bool:
        return len(self.sizes) < self.i0


class CliqueCover:
    """Ordered list of cliques (vertex tuples, ascending, size >= 2)."""

    def __init__(self, cliques: Iterable[Iterable[int]] = ()):
        self.cliques: list[Clique] = [tuple(sorted(int(v) for v in c)) for c in cliques]

    def append(self, clique: Iterable[int]) -> None:
        self.cliques.append(tuple(sorted(int(v) for v in clique)))

    def extend(self, cliques: Iterable[Iterable[int]]) -> None:
        for c in cliques:
            self.append(c)

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self) -> Iterator[Clique]:
        return iter(self.cliques)

    def __getitem__(self, i):
        return self.cliques[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, CliqueCover) and self.cliques == other.cliques

    def __repr__(self) -> str:
        return f"CliqueCover({len(self)} cliques)"


@dataclass
class IterationRecord:
    i: int
    k_i: int
    Y_i: int
    Z_i: int
    x_star_2: int
    x_star_3: int
    uncovered_after: int
    elapsed: float


@dataclass
class CoverState:
    graph: Graph
    active: EdgeSet
    seed: int
    i: int = 1
    cover: CliqueCover = field(default_factory=CliqueCover)
    records: list[IterationRecord] = field(default_factory=list)
    finalize_early: bool = False

    @classmethod
    def initial(cls, g: Graph, seed: int = 0) -> CoverState:
        return cls(graph=g, active=EdgeSet.full(g), seed=rng.check_seed(seed))


@dataclass
class CoverRun:
    cover: CliqueCover
    records: list[IterationRecord]
    schedule: Schedule | None
    exit_reason: str
    uncovered_final: int

    def __iter__(self):
        # allows ``cover, records = run_cover(...)``
        return iter((self.cover, self.records))


def derive_schedule(n: int, params: CoverParams) -> Schedule:
    """Clique sizes per iteration: ``k = floor(alpha log_b n)``, ``k_i = floor(k/i)``.

    The schedule stops early at the first ``k_i < 3``.
    """
    if params.schedule_override is not None:
        sizes = params.schedule_override
        return Schedule(k=sizes[0] if sizes else 0, i0=len(sizes), sizes=sizes)
    if n < 3:
        raise SizingError(f"need n >= 3 to derive a schedule, got n={n}")
    p = params.p
    if not 0.0 < p <= 1.0:
        raise ValueError(f"deriving a schedule needs 0 < p <= 1, got {p}")
    if p == 1.0:
        k = n
    else:
        # the epsilon keeps exact products such as 0.6 * 10 from rounding down
        k = min(n, math.floor(params.alpha * math.log(n) / math.log(1.0 / p) + 1e-9))
    if params.i0_override is not None:
        i0 = params.i0_override
    else:
        if n <= math.e:
            raise SizingError(f"ln ln n is undefined for n={n}; give i0_override")
        i0 = math.ceil(4 * math.log(math.log(n)))
    sizes = []
    for i in range(1, i0 + 1):
        if k // i < 3:
            break
        sizes.append(k // i)
    return Schedule(k=k, i0=i0, sizes=tuple(sizes))


def rho(x_u: int, x_star: int) -> float:
    """Step B probability solving ``e^-1 - 1/X* = (1 - 1/X*)^X_u (1 - rho)``, clamped."""
    if not 0 <= x_u <= x_star:
        raise ValueError(f"need 0 <= X_u <= X*, got X_u={x_u}, X*={x_star}")
    if x_star == 0:
        raise ValueError("X* = 0: no cliques were offered in Step A")
    if x_star == 1:
        return 1.0
    r = 1.0 - (INV_E - 1.0 / x_star) / math.exp(x_u * math.log1p(-1.0 / x_star))
    return min(1.0, max(0.0, r))


def rho_array(x_u: np.ndarray, x_star: int) -> np.ndarray:
    x_u = np.asarray(x_u, dtype=np.float64)
    if x_star <= 1:
        return np.ones_like(x_u)
    r = 1.0 - (INV_E - 1.0 / x_star) / np.exp(x_u * math.log1p(-1.0 / x_star))
    return np.clip(r, 0.0, 1.0)


def select_cliques(active: EdgeSet, k_i: int, x_star: int, seed: int, i: int) -> np.ndarray:
    """Step A draw: rows of kept ``k_i``-cliques, lexicographic."""
    q = 1.0 / x_star
    return _kernels.select_cliques(active.adjacency(), k_i, q, rng.key(seed, rng.STEP_A, i))


def patch_edges(us: np.ndarray, vs: np.ndarray, x_u: np.ndarray, x_star: int,
                seed: int, i: int) -> np.ndarray:
    """Step B draw: boolean mask of the given edges that are added as 2-cliques."""
    u = rng.pair_uniforms(rng.key(seed, rng.STEP_B, i), us, vs)
    return u < rho_array(x_u, x_star)


def step_a(state: CoverState, k_i: int) -> tuple[np.ndarray, CliqueStats]:
    """Run Step A in place; returns the kept cliques and the start-of-iteration stats."""
    if k_i < 3:
        raise ValueError("Step A needs cliques of size >= 3")
    stats = count_per_edge(k_i, state.graph, state.active)
    if stats.x_star_2 == 0:
        state.finalize_early = True
        return np.empty((0, k_i), dtype=np.int64), stats
    kept = select_cliques(state.active, k_i, stats.x_star_2, state.seed, state.i)
    covered = np.zeros(pair_count(state.graph.n), dtype=bool)
    _kernels.mark_clique_edges(state.graph.n, kept, covered)
    state.active = state.active.without(covered)
    state.cover.extend(kept.tolist())
    return kept, stats


def step_b(state: CoverState, stats: CliqueStats) -> np.ndarray:
    """Run Step B in place using the counts from before Step A; returns added edge indices."""
    if stats.x_star_2 == 0:
        return np.empty(0, dtype=np.int64)
    idx = state.active.indices()
    us, vs = edge_pair(state.graph.n, idx)
    add = patch_edges(us, vs, stats.per_edge[idx], stats.x_star_2, state.seed, state.i)
    added = idx[add]
    removed = np.zeros(pair_count(state.graph.n), dtype=bool)
    removed[added] = True
    state.active = state.active.without(removed)
    state.cover.extend(zip(us[add].tolist(), vs[add].tolist()))
    return added


def run_cover(g: Graph, params: CoverParams) -> CoverRun:
    if g.m == 0:
        return CoverRun(CliqueCover(), [], None, "empty", 0)
    schedule = derive_schedule(g.n, params)
    state = CoverState.initial(g, params.rng_seed)
    exit_reason = "truncated" if schedule.truncated else "schedule"
    for i, k_i in enumerate(schedule.sizes, start=1):
        state.i = i
        if state.active.size == 0:
            exit_reason = "exhausted"
            break
        if k_i > g.n:
            exit_reason = "no-cliques"
            break
        # both estimates run on the same data; keep the guard's seed apart from the cover's
        check_budget(k_i, i, g, state.active, params.p, params.clique_budget,
                     seed=rng.key(params.rng_seed, rng.SAMPLING, i))
        t0 = time.perf_counter()
        before = state.active.size
        kept, stats = step_a(state, k_i)
        added = step_b(state, stats)
        state.records.append(IterationRecord(
            i=i, k_i=k_i, Y_i=len(kept), Z_i=len(added),
            x_star_2=stats.x_star_2, x_star_3=stats.x_star_3,
            uncovered_after=state.active.size,
            elapsed=time.perf_counter() - t0,
        ))
        assert state.active.size <= before
        if state.finalize_early:
            exit_reason = "no-cliques"
            break
    us, vs = state.active.pairs()
    state.cover.extend(zip(us.tolist(), vs.tolist()))
    return CoverRun(state.cover, state.records, schedule, exit_reason, int(len(us)))


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str = ""
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.valid


def verify_cover(g: Graph, cover: Iterable[Iterable[int]]) -> Verdict:
    """Every member must be a clique of ``g`` and every edge must be covered."""
    covered = np.zeros(pair_count(g.n), dtype=bool)
    for c in cover:
        c = tuple(int(v) for v in c)
        if len(c) < 2 or len(set(c)) != len(c) or any(not 0 <= v < g.n for v in c):
            return Verdict(False, "member is not a vertex set of size >= 2", c)
        c = tuple(sorted(c))
        arr = np.array(c, dtype=np.int64)
        a, b = np.triu_indices(len(c), 1)
        idx = edge_index(g.n, arr[a], arr[b])
        if not g.is_clique(c):
            return Verdict(False, "member is not a clique", c)
        covered[idx] = True
    missing = np.flatnonzero(~covered[g.edge_indices()])
    if len(missing):
        us, vs = g.edges()
        return Verdict(False, "edge not covered", (int(us[missing[0]]), int(vs[missing[0]])))
    return Verdict(True)


def write_cover(cover: Iterable[Iterable[int]], stream: TextIO) -> None:
    for c in cover:
        stream.write(" ".join(str(v) for v in sorted(c)) + "\n")


def read_cover(stream: TextIO) -> CliqueCover:
    cover = CliqueCover()
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            vs = [int(t) for t in text.split()]
        except ValueError:
            raise GraphParseError(f"non-integer vertex in '{text}'", lineno) from None
        if any(a >= b for a, b in zip(vs, vs[1:])):
            raise GraphParseError("vertices must be strictly ascending", lineno)
        cover.append(vs)
    return cover


def cover_accounting(run: CoverRun) -> int:
    """``sum Y_i + sum Z_i + uncovered_final``; equals ``len(run.cover)``."""
    return (sum(r.Y_i for r in run.records) + sum(r.Z_i for r in run.records)
            + run.uncovered_final)
