"""Simple undirected graphs on dense vertex sets ``0..n-1``, stored as bitsets.

Edges ``u < v`` have a canonical index, their position in the lexicographic
order of all ``n(n-1)/2`` pairs.  Edge sets, per-edge statistics and keyed
randomness all use that index.
"""
from __future__ import annotations

import io
from functools import lru_cache
from typing import Iterable, TextIO

import numpy as np

from . import _kernels, rng
from .errors import GraphParseError


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, u, v):
    """Canonical index of pair ``u < v``; works elementwise on arrays."""
    return u * n - (u * (u + 1)) // 2 + (v - u - 1)


@lru_cache(maxsize=8)
def _pair_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    us, vs = np.triu_indices(n, 1)
    us = us.astype(np.int64)
    vs = vs.astype(np.int64)
    us.setflags(write=False)
    vs.setflags(write=False)
    return us, vs


def edge_pair(n: int, idx):
    """Inverse of :func:`edge_index` (elementwise)."""
    us, vs = _pair_table(n)
    return us[idx], vs[idx]


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Boolean ``(n, n)`` matrix to ``(n, ceil(n/64))`` uint64 bitset rows."""
    n = dense.shape[0]
    words = (n + 63) // 64
    packed = np.packbits(np.asarray(dense, dtype=bool), axis=1, bitorder="little")
    out = np.zeros((n, words * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").astype(np.uint64).reshape(n, words)


def unpack_rows(bits: np.ndarray, n: int) -> np.ndarray:
    raw = np.ascontiguousarray(bits, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little", count=n).astype(bool)


class Graph:
    """Immutable simple graph.

    ``adjacency`` is an ``(n, W)`` uint64 array of neighbour bitsets.
    """

    __slots__ = ("n", "adjacency", "m", "_edges")

    def __init__(self, n: int, adjacency: np.ndarray):
        adjacency = np.ascontiguousarray(adjacency, dtype=np.uint64)
        if n < 0 or adjacency.shape != (n, (n + 63) // 64):
            raise ValueError("adjacency shape does not match vertex count")
        adjacency.setflags(write=False)
        self.n = n
        self.adjacency = adjacency
        eu, ev = _kernels.edges_of(adjacency) if n else (np.empty(0, np.int64),) * 2
        eu.setflags(write=False)
        ev.setflags(write=False)
        self._edges = (eu, ev)
        self.m = int(eu.shape[0])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.ascontiguousarray(pairs.min(axis=1))
        hi = np.ascontiguousarray(pairs.max(axis=1))
        return cls(n, _kernels.adjacency_from_pairs(n, lo, hi))

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> Graph:
        dense = np.asarray(dense, dtype=bool)
        if dense.shape[0] != dense.shape[1] or not np.array_equal(dense, dense.T):
            raise ValueError("adjacency matrix must be square and symmetric")
        if dense.diagonal().any():
            raise ValueError("self-loops are not allowed")
        return cls(dense.shape[0], pack_rows(dense))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_dense(~np.eye(n, dtype=bool))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, np.zeros((n, (n + 63) // 64), np.uint64))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(u, v)``, ``u < v``, in canonical order."""
        return self._edges

    def edge_list(self) -> list[tuple[int, int]]:
        return list(zip(self._edges[0].tolist(), self._edges[1].tolist()))

    def edge_indices(self) -> np.ndarray:
        return edge_index(self.n, *self._edges)

    def dense(self) -> np.ndarray:
        return unpack_rows(self.adjacency, self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((int(self.adjacency[u, v >> 6]) >> (v & 63)) & 1)

    def neighbours(self, u: int) -> list[int]:
        return np.flatnonzero(unpack_rows(self.adjacency[u : u + 1], self.n)[0]).tolist()

    def degrees(self) -> np.ndarray:
        return self.dense().sum(axis=1)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self.adjacency, other.adjacency))

    def __hash__(self):
        return hash((self.n, self.adjacency.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class EdgeSet:
    """Immutable subset of a graph's edges, as a mask over canonical indices."""

    __slots__ = ("graph", "mask", "size", "_adjacency")

    def __init__(self, graph: Graph, mask: np.ndarray):
        mask = np.ascontiguousarray(mask, dtype=bool)
        if mask.shape != (pair_count(graph.n),):
            raise ValueError("mask length must be n(n-1)/2")
        present = np.zeros_like(mask)
        present[graph.edge_indices()] = True
        if np.any(mask & ~present):
            raise ValueError("edge set contains pairs that are not edges of the graph")
        mask.setflags(write=False)
        self.graph = graph
        self.mask = mask
        self.size = int(mask.sum())
        self._adjacency = None

    @classmethod
    def full(cls, graph: Graph) -> EdgeSet:
        mask = np.zeros(pair_count(graph.n), dtype=bool)
        mask[graph.edge_indices()] = True
        return cls(graph, mask)

    @classmethod
    def from_edges(cls, graph: Graph, edges: Iterable[tuple[int, int]]) -> EdgeSet:
        mask = np.zeros(pair_count(graph.n), dtype=bool)
        for u, v in edges:
            u, v = min(u, v), max(u, v)
            mask[edge_index(graph.n, u, v)] = True
        return cls(graph, mask)

    def __contains__(self, edge) -> bool:
        u, v = sorted(edge)
        return u != v and bool(self.mask[edge_index(self.graph.n, u, v)])

    def __len__(self) -> int:
        return self.size

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        return edge_pair(self.graph.n, self.indices())

    def adjacency(self) -> np.ndarray:
        """Bitset rows of the subgraph formed by the member edges."""
        if self._adjacency is None:
            us, vs = self.pairs()
            adj = _kernels.adjacency_from_pairs(self.graph.n, us, vs)
            adj.setflags(write=False)
            self._adjacency = adj
        return self._adjacency

    def without(self, removed: np.ndarray) -> EdgeSet:
        """Copy with the edges flagged in the boolean mask ``removed`` dropped."""
        return EdgeSet(self.graph, self.mask & ~removed)

    def as_graph(self) -> Graph:
        return Graph(self.graph.n, self.adjacency())


def generate_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p).

    Pair ``(u, v)`` is an edge iff a hash of ``(seed, u, v)`` falls below ``p``,
    so the result is a pure function of the arguments and the graph on the
    first ``n`` vertices is the same for every larger ``n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    k = rng.key(seed, rng.GRAPH)
    return Graph(n, _kernels.gnp_adjacency(n, float(p), k))


def edge_count(g: Graph) -> int:
    return g.m


def save_graph(g: Graph, stream: TextIO) -> None:
    stream.write(f"{g.n} {g.m}\n")
    eu, ev = g.edges()
    for u, v in zip(eu.tolist(), ev.tolist()):
        stream.write(f"{u} {v}\n")


def load_graph(stream: TextIO | str) -> Graph:
    """Parse the ``n m`` / ``u v`` text format.

    Edges must satisfy ``0 <= u < v < n`` and appear once.  Edge order is free.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = [(i, line.strip()) for i, line in enumerate(stream, start=1)]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise GraphParseError("missing header", 1)
    hdr_line, hdr = lines[0]
    n, m = _ints(hdr, hdr_line, "header")
    if n < 0 or m < 0:
        raise GraphParseError("header values must be non-negative", hdr_line)
    body = lines[1:]
    if len(body) != m:
        raise GraphParseError(f"header declares {m} edges but {len(body)} follow",
                              body[-1][0] if len(body) > m else hdr_line)
    seen = set()
    edges = []
    for lineno, text in body:
        u, v = _ints(text, lineno, "edge")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"vertex index out of range in edge '{text}'", lineno)
        if u >= v:
            raise GraphParseError(f"edge '{text}' must be written with u < v", lineno)
        if (u, v) in seen:
            raise GraphParseError(f"duplicate edge '{text}'", lineno)
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def _ints(text: str, lineno: int, what: str) -> tuple[int, int]:
    parts = text.split()
    if len(parts) != 2:
        raise GraphParseError(f"{what} must have exactly two integers", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"{what} must have exactly two integers", lineno) from None
