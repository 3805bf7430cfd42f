"""Seeded instance generators."""
from __future__ import annotations

import numpy as np

from .graph import Graph, Matching, build_graph

__all__ = ["KINDS", "generate", "random_gnm", "random_bipartite", "long_path_chain", "nested_blossom_gadget"]


def _distinct_pairs(rng, m: int, draw) -> np.ndarray:
    """Draw ``(u, v)`` pairs with ``draw(k)`` until ``m`` distinct non-loop
    pairs are collected (as unordered pairs)."""
    got = np.empty((0, 2), dtype=np.int64)
    keys = np.empty(0, dtype=np.int64)
    while len(got) < m:
        need = m - len(got)
        cand = draw(need + need // 4 + 8)
        cand = cand[cand[:, 0] != cand[:, 1]]
        lo, hi = cand.min(axis=1), cand.max(axis=1)
        k = lo * (1 << 32) + hi
        k, first = np.unique(k, return_index=True)
        fresh = ~np.isin(k, keys)
        add = cand[np.sort(first[fresh])][:need]
        got = np.concatenate([got, add])
        keys = np.concatenate([keys, (add.min(axis=1) << 32) + add.max(axis=1)])
    return got


def random_gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform simple graph with ``n`` vertices and ``m`` edges."""
    if n < 0 or m < 0 or m > n * (n - 1) // 2:
        raise ValueError(f"cannot place {m} edges on {n} vertices")
    rng = np.random.default_rng(seed)
    pairs = _distinct_pairs(rng, m, lambda k: rng.integers(0, n, size=(k, 2)))
    return build_graph(n, pairs)


def random_bipartite(n: int, m: int, seed: int = 0) -> Graph:
    """Random simple bipartite graph; sides are ``0..ceil(n/2)-1`` and the rest."""
    left = (n + 1) // 2
    right = n - left
    if n < 0 or m < 0 or m > left * right:
        raise ValueError(f"cannot place {m} edges between sides of {left} and {right}")
    rng = np.random.default_rng(seed)

    def draw(k):
        return np.stack([rng.integers(0, left, k), left + rng.integers(0, max(right, 1), k)], axis=1)

    return build_graph(n, _distinct_pairs(rng, m, draw))


def long_path_chain(n: int, seed: int = 0) -> Graph:
    """A single path on ``n`` vertices under a seeded relabelling, edges
    listed in shuffled order."""
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges = np.stack([perm[:-1], perm[1:]], axis=1)
    return build_graph(n, edges[rng.permutation(n - 1)])


def nested_blossom_gadget(depth: int, seed: int = 0, with_matching: bool = False):
    """Odd cycles stacked through each other so that blossoms nest ``depth``
    levels deep.

    Level 0 is a triangle ``r, a, b`` with ``ab`` matched and ``r`` free.
    Level ``i`` adds a matched pair ``p, q`` with edges ``x-p`` and ``q-y``,
    where ``x, y`` is the previous level's matched pair (``a, b`` for level
    1) in a seeded order.  An alternating tail of ``depth`` matched pairs
    ending in a free vertex hangs off the last ``q``, giving ``4 + 4 * depth``
    vertices.  Under the companion matching (returned with
    ``with_matching``) the search nests blossoms at least ``depth`` levels
    deep.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    rng = np.random.default_rng(seed)
    edges = [(0, 1), (1, 2), (2, 0)]
    pairs = [(1, 2)]
    n, prev = 3, (1, 2)
    for _ in range(depth):
        p, q = n, n + 1
        x, y = prev if rng.random() < 0.5 else prev[::-1]
        edges += [(x, p), (p, q), (q, y)]
        pairs.append((p, q))
        n += 2
        prev = (p, q)
    # alternating tail of `depth` matched pairs ending in a free vertex, long
    # enough that the search from r finishes every level first
    last = prev[1]
    for _ in range(depth):
        edges += [(last, n), (n, n + 1)]
        pairs.append((n, n + 1))
        last = n + 1
        n += 2
    edges.append((last, n))
    n += 1
    perm = rng.permutation(n)
    g = build_graph(n, [(int(perm[u]), int(perm[v])) for u, v in edges])
    if not with_matching:
        return g
    return g, Matching.from_pairs(n, [(int(perm[u]), int(perm[v])) for u, v in pairs])


KINDS = ("random-gnm", "random-bipartite", "long-path-chain", "nested-blossom-gadget")


def generate(kind: str, n: int = 0, m: int = 0, seed: int = 0, depth: int = 3) -> Graph:
    """Dispatch on ``kind``; ``m`` is ignored by the structured families and
    ``depth`` is used only by the gadget."""
    if kind == "random-gnm":
        return random_gnm(n, m, seed)
    if kind == "random-bipartite":
        return random_bipartite(n, m, seed)
    if kind == "long-path-chain":
        return long_path_chain(n, seed)
    if kind == "nested-blossom-gadget":
        return nested_blossom_gadget(depth, seed)
    raise ValueError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
