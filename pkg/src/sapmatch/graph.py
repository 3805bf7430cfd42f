"""Graphs, matchings and alternating paths.

Vertices are dense integers ``0..n-1``.  Edges keep the id they were given at
construction time; parallel edges get distinct ids and are harmless to the
solver.  Whether an edge is matched is decided by its endpoints (``mate[u] ==
v``), so every parallel copy of a matched pair counts as matched.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "NotAugmentingError",
    "Graph",
    "Matching",
    "Path",
    "build_graph",
    "validate_matching",
    "augment_along",
    "matched_edge_ids",
]


class GraphError(ValueError):
    """Raised for malformed graph input (self-loops, ids out of range)."""


class NotAugmentingError(ValueError):
    """Raised when a path handed to :func:`augment_along` is not augmenting."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph in compressed adjacency form.

    ``adj_start[v]:adj_start[v+1]`` indexes the slice of ``adj_nbr`` /
    ``adj_eid`` holding the neighbours of ``v`` and the ids of the edges
    leading to them.
    """

    n: int
    eu: np.ndarray
    ev: np.ndarray
    adj_start: np.ndarray
    adj_nbr: np.ndarray
    adj_eid: np.ndarray

    @property
    def m(self) -> int:
        return len(self.eu)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.eu.tolist(), self.ev.tolist()))

    def degree(self, v: int) -> int:
        return int(self.adj_start[v + 1] - self.adj_start[v])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbour, edge id)`` pairs of ``v`` in adjacency order."""
        lo, hi = self.adj_start[v], self.adj_start[v + 1]
        return list(zip(self.adj_nbr[lo:hi].tolist(), self.adj_eid[lo:hi].tolist()))

    def endpoints(self, e: int) -> tuple[int, int]:
        return int(self.eu[e]), int(self.ev[e])

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = self.adj_start[u], self.adj_start[u + 1]
        return bool(np.any(self.adj_nbr[lo:hi] == v))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_list: Iterable[tuple[int, int]] | np.ndarray) -> Graph:
    """Build a :class:`Graph` on ``n`` vertices from ``(u, v)`` pairs."""
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    arr = np.asarray(
        edge_list if isinstance(edge_list, np.ndarray) else list(edge_list),
        dtype=np.int64,
    )
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError("edge list must be a sequence of vertex pairs")
    eu = np.ascontiguousarray(arr[:, 0])
    ev = np.ascontiguousarray(arr[:, 1])
    bad = (eu < 0) | (eu >= n) | (ev < 0) | (ev >= n)
    if bad.any():
        e = int(np.flatnonzero(bad)[0])
        raise GraphError(f"edge {e} ({eu[e]}, {ev[e]}) has an endpoint outside [0, {n})")
    loops = eu == ev
    if loops.any():
        e = int(np.flatnonzero(loops)[0])
        raise GraphError(f"edge {e} is a self-loop at vertex {eu[e]}")

    m = len(eu)
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2)
    order = np.argsort(src, kind="stable")
    adj_start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=adj_start[1:])
    return Graph(
        n=n,
        eu=eu,
        ev=ev,
        adj_start=adj_start,
        adj_nbr=np.ascontiguousarray(dst[order]),
        adj_eid=np.ascontiguousarray(eid[order]),
    )


class Matching:
    """A matching stored as a mate array (``-1`` marks a free vertex)."""

    __slots__ = ("mate",)

    def __init__(self, mate: np.ndarray | Sequence[int]):
        self.mate = np.array(mate, dtype=np.int64)

    @classmethod
    def empty(cls, n: int) -> Matching:
        return cls(np.full(n, -1, dtype=np.int64))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Matching:
        mate = np.full(n, -1, dtype=np.int64)
        for u, v in pairs:
            if mate[u] != -1 or mate[v] != -1:
                raise ValueError(f"pair ({u}, {v}) overlaps an earlier pair")
            mate[u], mate[v] = v, u
        return cls(mate)

    @property
    def n(self) -> int:
        return len(self.mate)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mate >= 0)) // 2

    def __len__(self) -> int:
        return self.size

    def pairs(self) -> list[tuple[int, int]]:
        """Matched pairs ``(u, v)`` with ``u < v``, sorted."""
        u = np.flatnonzero(self.mate > np.arange(self.n))
        return list(zip(u.tolist(), self.mate[u].tolist()))

    def is_free(self, v: int) -> bool:
        return self.mate[v] < 0

    def copy(self) -> Matching:
        return Matching(self.mate.copy())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matching) and np.array_equal(self.mate, other.mate)

    def __repr__(self) -> str:
        return f"Matching(size={self.size}, n={self.n})"


@dataclass(frozen=True)
class Path:
    """A vertex sequence with the edge id used between each consecutive pair."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if self.vertices and len(self.edges) != len(self.vertices) - 1:
            raise ValueError("a path needs exactly one edge per consecutive vertex pair")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def reversed(self) -> Path:
        return Path(self.vertices[::-1], self.edges[::-1])

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def follows(self, g: Graph) -> bool:
        """True when each listed edge really joins its two vertices in ``g``."""
        for i, e in enumerate(self.edges):
            if not 0 <= e < g.m:
                return False
            a, b = g.endpoints(e)
            if {a, b} != {self.vertices[i], self.vertices[i + 1]}:
                return False
        return True

    def is_alternating(self, m: Matching, first_matched: bool | None = None) -> bool:
        """Check the edges alternate matched/unmatched with respect to ``m``.

        ``first_matched`` pins the status of the first edge; ``None`` accepts
        either phase.
        """
        vs = self.vertices
        flags = [m.mate[vs[i]] == vs[i + 1] for i in range(len(vs) - 1)]
        if not flags:
            return True
        if first_matched is not None and flags[0] != first_matched:
            return False
        return all(flags[i] != flags[i + 1] for i in range(len(flags) - 1))

    def is_augmenting(self, m: Matching) -> bool:
        vs = self.vertices
        return (
            len(vs) >= 2
            and len(self.edges) % 2 == 1
            and vs[0] != vs[-1]
            and m.is_free(vs[0])
            and m.is_free(vs[-1])
            and self.is_simple()
            and self.is_alternating(m, first_matched=False)
        )


def validate_matching(g: Graph, m: Matching) -> bool:
    """True iff ``m`` is a matching of ``g`` (involutive, loop-free, on edges)."""
    mate = m.mate
    if len(mate) != g.n:
        return False
    idx = np.arange(g.n)
    matched = mate >= 0
    if np.any(mate >= g.n) or np.any(mate < -1):
        return False
    if np.any(mate[matched] == idx[matched]):
        return False
    if np.any(mate[mate[matched]] != idx[matched]):
        return False
    return bool(np.all(matched_edge_ids(g, mate)[matched] >= 0))


def augment_along(m: Matching, p: Path) -> Matching:
    """Return ``m`` with the edges of the augmenting path ``p`` flipped."""
    if not p.is_augmenting(m):
        raise NotAugmentingError(f"path {p.vertices} is not augmenting for this matching")
    mate = m.mate.copy()
    vs = p.vertices
    for i in range(0, len(vs) - 1, 2):
        mate[vs[i]] = vs[i + 1]
        mate[vs[i + 1]] = vs[i]
    return Matching(mate)


def matched_edge_ids(g: Graph, mate: np.ndarray) -> np.ndarray:
    """Per-vertex id of an edge realising the matched pair (``-1`` if free)."""
    out = np.full(g.n, -1, dtype=np.int64)
    hit = np.flatnonzero(mate[g.eu] == g.ev)
    out[g.eu[hit]] = hit
    out[g.ev[hit]] = hit
    return out
