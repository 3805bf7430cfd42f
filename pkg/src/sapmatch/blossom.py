"""Blossom bookkeeping shared by both phases.

Two structures live here:

* a union-find over vertex ids answering "which blossom base does this vertex
  currently belong to" (:class:`BaseTracker`);
* an append-only store of ordered blossom trees (:class:`BlossomStore`).  A
  blossom node keeps its children as a ring together with the edge linking
  each child to the next one.  That is enough to rebuild the even-length
  alternating path from any member down to the blossom base.

Node ids ``0..n-1`` are the vertices themselves (leaves); blossoms get ids
from ``n`` upwards.  Ring edge ``i`` joins child ``i`` to child ``i+1``
(cyclically) and is stored oriented: ``ring_u`` lies in child ``i``,
``ring_v`` in child ``i+1``.  Child 0 holds the base, so ring edge ``i`` is
matched exactly when ``i`` is odd.

The array kernels are compiled with numba and are shared with the search code;
the classes below are thin Python views for callers and tests.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .graph import Path

__all__ = [
    "BlossomError",
    "BaseTracker",
    "BlossomStore",
    "BlossomNode",
    "find_base",
    "merge_into",
    "record_blossom",
    "extract_path",
]


class BlossomError(ValueError):
    """Structural problem with a blossom (bad ring, foreign vertex, ...)."""


# ---------------------------------------------------------------------------
# union-find kernels


@njit(cache=True)
def uf_find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True)
def uf_union(parent, rank, a, b):
    """Link the sets rooted at ``a`` and ``b``; return the surviving root."""
    ra = uf_find(parent, a)
    rb = uf_find(parent, b)
    if ra == rb:
        return ra
    if rank[ra] < rank[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    if rank[ra] == rank[rb]:
        rank[ra] += 1
    return ra


@njit(cache=True)
def uf_base(parent, base, v):
    return base[uf_find(parent, v)]


class BaseTracker:
    """Set-merging structure mapping every vertex to its blossom base.

    Union by rank with path halving; ``merge_into`` names the base of the
    merged set explicitly.
    """

    def __init__(self, n: int):
        self.n = n
        self.parent = np.arange(n, dtype=np.int64)
        self.rank = np.zeros(n, dtype=np.int64)
        self.base = np.arange(n, dtype=np.int64)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise KeyError(f"vertex {v} is not registered (n={self.n})")

    def find_base(self, v: int) -> int:
        self._check(v)
        return int(uf_base(self.parent, self.base, v))

    def merge_into(self, members: Iterable[int], new_base: int) -> None:
        members = list(members)
        for v in members:
            self._check(v)
        self._check(new_base)
        target = uf_find(self.parent, new_base)
        if all(uf_find(self.parent, v) != target for v in members):
            raise BlossomError(f"base {new_base} is not inside any of the merged sets")
        root = target
        for v in members:
            root = uf_union(self.parent, self.rank, root, v)
        self.base[root] = new_base


def find_base(t: BaseTracker, v: int) -> int:
    return t.find_base(v)


def merge_into(t: BaseTracker, members: Iterable[int], new_base: int) -> None:
    t.merge_into(members, new_base)


# ---------------------------------------------------------------------------
# blossom store

StoreArrays = namedtuple(
    "StoreArrays",
    [
        "node_base",
        "node_created",
        "node_absorbed",
        "node_parent",
        "node_pos",
        "ch_start",
        "ch_len",
        "ring_child",
        "ring_eid",
        "ring_u",
        "ring_v",
        "count",  # [number of nodes, number of ring slots, number of leaves]
        "stk_kind",
        "stk_node",
        "stk_s",
        "stk_fwd",
        "chain",
    ],
)

_SEG = 0
_EDGE = 1


def new_store(n: int, max_blossoms: int | None = None) -> StoreArrays:
    """Allocate a store holding ``n`` leaves and room for ``max_blossoms``."""
    if max_blossoms is None:
        max_blossoms = n
    nodes = n + max_blossoms
    ring = 3 * n + 3 * max_blossoms + 4
    stack = 2 * ring + nodes + 16
    i64 = np.int64
    count = np.zeros(3, dtype=i64)
    count[0] = n
    count[2] = n
    return StoreArrays(
        node_base=np.concatenate([np.arange(n, dtype=i64), np.full(max_blossoms, -1, i64)]),
        node_created=np.zeros(nodes, dtype=i64),
        node_absorbed=np.full(nodes, -1, dtype=i64),
        node_parent=np.full(nodes, -1, dtype=i64),
        node_pos=np.full(nodes, -1, dtype=i64),
        ch_start=np.zeros(nodes, dtype=i64),
        ch_len=np.zeros(nodes, dtype=i64),
        ring_child=np.full(ring, -1, dtype=i64),
        ring_eid=np.full(ring, -1, dtype=i64),
        ring_u=np.full(ring, -1, dtype=i64),
        ring_v=np.full(ring, -1, dtype=i64),
        count=count,
        stk_kind=np.zeros(stack, dtype=i64),
        stk_node=np.zeros(stack, dtype=i64),
        stk_s=np.zeros(stack, dtype=i64),
        stk_fwd=np.zeros(stack, dtype=i64),
        chain=np.zeros(nodes + 1, dtype=i64),
    )


@njit(cache=True)
def store_open(S, base, created, size):
    """Reserve a blossom node with ``size`` ring slots; returns its id."""
    node = S.count[0]
    S.count[0] += 1
    S.node_base[node] = base
    S.node_created[node] = created
    S.node_absorbed[node] = -1
    S.node_parent[node] = -1
    S.node_pos[node] = -1
    S.ch_start[node] = S.count[1]
    S.ch_len[node] = size
    S.count[1] += size
    return node


@njit(cache=True)
def store_set_child(S, node, i, child, eid, u, v, when):
    """Fill ring slot ``i`` of ``node``: ``child`` plus the edge ``u``->``v``
    leading to the next child."""
    r = S.ch_start[node] + i
    S.ring_child[r] = child
    S.ring_eid[r] = eid
    S.ring_u[r] = u
    S.ring_v[r] = v
    S.node_parent[child] = node
    S.node_pos[child] = i
    S.node_absorbed[child] = when


@njit(cache=True)
def _push(S, top, kind, node, s, fwd):
    S.stk_kind[top] = kind
    S.stk_node[top] = node
    S.stk_s[top] = s
    S.stk_fwd[top] = fwd
    return top + 1


@njit(cache=True)
def _push_rest(S, top, N, j, reverse_order, flip):
    # Pieces of the path through ring node N that follow the child at ring
    # position j: alternately a ring edge and a (child, entry vertex, dir)
    # segment, ending in child 0.
    if j == 0:
        return top
    r0 = S.ch_start[N]
    L = S.ch_len[N]
    k = L - 1
    if j % 2 == 1:
        cnt = k - j + 1
        for t in range(cnt):
            h = k - t if reverse_order else j + t
            if h % 2 == 1:
                c = S.ring_child[r0 + h + 1]
                s = S.ring_u[r0 + h + 1]
                d = 0
            else:
                c = S.ring_child[r0 + (h + 1) % L]
                s = S.ring_v[r0 + h]
                d = 1
            if flip:
                d = 1 - d
            e = S.ring_eid[r0 + h]
            if reverse_order:
                top = _push(S, top, _SEG, c, s, d)
                top = _push(S, top, _EDGE, e, 0, 0)
            else:
                top = _push(S, top, _EDGE, e, 0, 0)
                top = _push(S, top, _SEG, c, s, d)
    else:
        for t in range(j):
            h = t if reverse_order else j - 1 - t
            c = S.ring_child[r0 + h]
            if h % 2 == 1:
                s = S.ring_v[r0 + h - 1]
                d = 0
            else:
                s = S.ring_u[r0 + h]
                d = 1
            if flip:
                d = 1 - d
            e = S.ring_eid[r0 + h]
            if reverse_order:
                top = _push(S, top, _SEG, c, s, d)
                top = _push(S, top, _EDGE, e, 0, 0)
            else:
                top = _push(S, top, _EDGE, e, 0, 0)
                top = _push(S, top, _SEG, c, s, d)
    return top


@njit(cache=True)
def emit_blossom_path(S, s0, node0, fwd0, hlevel, label, hnode, out_v, out_e, nv, ne):
    """Append the even alternating path between vertex ``s0`` and the base of
    ``node0`` to ``out_v``/``out_e``.

    ``fwd0 == 1`` emits it from ``s0`` to the base, ``0`` from the base to
    ``s0``.  With ``hlevel`` set, nodes flagged as contracted vertices
    (``hnode[label[.]]``) are treated as leaves and reported by label.
    Returns the new ``(nv, ne)`` fill counts, or ``(-1, -1)`` if ``s0`` is not
    below ``node0``.
    """
    top = _push(S, 0, _SEG, node0, s0, fwd0)
    while top > 0:
        top -= 1
        kind = S.stk_kind[top]
        C = S.stk_node[top]
        s = S.stk_s[top]
        fwd = S.stk_fwd[top]
        if kind == _EDGE:
            out_e[ne] = C
            ne += 1
            continue
        if hlevel:
            entry = hnode[label[s]]
        else:
            entry = s
        if entry == C:
            out_v[nv] = label[s] if hlevel else s
            nv += 1
            continue
        depth = 0
        a = entry
        while a != C:
            if a < 0:
                return -1, -1
            S.chain[depth] = a
            depth += 1
            a = S.node_parent[a]
        if fwd == 1:
            for i in range(depth, 0, -1):
                N = S.chain[i] if i < depth else C
                top = _push_rest(S, top, N, S.node_pos[S.chain[i - 1]], True, False)
            out_v[nv] = label[s] if hlevel else s
            nv += 1
        else:
            top = _push(S, top, _SEG, entry, s, 0)
            for i in range(1, depth + 1):
                N = S.chain[i] if i < depth else C
                top = _push_rest(S, top, N, S.node_pos[S.chain[i - 1]], False, True)
    return nv, ne


_NOLABEL = np.zeros(0, dtype=np.int64)


class BlossomStore:
    """Python view over a :data:`StoreArrays` block."""

    def __init__(self, n: int, max_blossoms: int | None = None, arrays: StoreArrays | None = None):
        self.n = n
        self.arr = arrays if arrays is not None else new_store(n, max_blossoms)

    @property
    def num_nodes(self) -> int:
        return int(self.arr.count[0])

    def node(self, node_id: int) -> BlossomNode:
        if not 0 <= node_id < self.num_nodes:
            raise KeyError(f"no node {node_id}")
        return BlossomNode(self, node_id)

    def blossom_ids(self) -> range:
        return range(self.n, self.num_nodes)

    def is_leaf(self, node_id: int) -> bool:
        return node_id < self.n

    def leaves(self, node_id: int) -> list[int]:
        A = self.arr
        out, stack = [], [node_id]
        while stack:
            x = stack.pop()
            if x < self.n:
                out.append(x)
                continue
            lo = A.ch_start[x]
            stack.extend(A.ring_child[lo:lo + A.ch_len[x]][::-1].tolist())
        return out

    def contains(self, node_id: int, v: int) -> bool:
        a = v
        while a != -1:
            if a == node_id:
                return True
            a = int(self.arr.node_parent[a])
        return False

    def record_blossom(
        self,
        children: Sequence[int],
        ring_edges: Sequence[tuple[int, int, int]],
        base: int,
        created_at: int = 0,
    ) -> BlossomNode:
        """Add a blossom whose children form the given cycle.

        ``ring_edges[i] = (edge id, u, v)`` links ``children[i]`` (holding
        ``u``) to ``children[(i+1) % k]`` (holding ``v``).  ``children[0]``
        must contain ``base``.
        """
        k = len(children)
        if k < 3 or k % 2 == 0:
            raise BlossomError(f"a blossom cycle needs an odd number >= 3 of children, got {k}")
        if len(ring_edges) != k:
            raise BlossomError("need one connecting edge per child")
        A = self.arr
        if A.count[0] >= len(A.node_base):
            raise BlossomError("blossom store is full")
        for c in children:
            if not 0 <= c < self.num_nodes:
                raise BlossomError(f"unknown child node {c}")
            if A.node_parent[c] != -1:
                raise BlossomError(f"node {c} already belongs to another blossom")
        if len(set(children)) != k:
            raise BlossomError("children must be distinct")
        if not self.contains(children[0], base):
            raise BlossomError(f"base {base} is not inside the first child")
        for i, (_, u, v) in enumerate(ring_edges):
            if not (self.contains(children[i], u) and self.contains(children[(i + 1) % k], v)):
                raise BlossomError(f"ring edge {i} does not join children {i} and {(i + 1) % k}")
        node = store_open(A, base, created_at, k)
        for i, (c, (e, u, v)) in enumerate(zip(children, ring_edges)):
            store_set_child(A, node, i, c, e, u, v, created_at)
        return BlossomNode(self, int(node))

    def extract_path(self, node_id: int, v: int) -> Path:
        """The even alternating path from member ``v`` to the base of ``node_id``."""
        if not self.contains(node_id, v):
            raise BlossomError(f"vertex {v} is not inside node {node_id}")
        size = len(self.leaves(node_id))
        out_v = np.empty(size + 1, dtype=np.int64)
        out_e = np.empty(size + 1, dtype=np.int64)
        nv, ne = emit_blossom_path(self.arr, v, node_id, 1, False, _NOLABEL, _NOLABEL, out_v, out_e, 0, 0)
        if nv < 0:
            raise BlossomError(f"vertex {v} is not inside node {node_id}")
        return Path(tuple(out_v[:nv].tolist()), tuple(out_e[:ne].tolist()))


@dataclass(frozen=True)
class BlossomNode:
    """Read-only handle on one node of a :class:`BlossomStore`."""

    store: BlossomStore
    id: int

    @property
    def is_leaf(self) -> bool:
        return self.store.is_leaf(self.id)

    @property
    def base(self) -> int:
        return int(self.store.arr.node_base[self.id])

    @property
    def created_at(self) -> int:
        return int(self.store.arr.node_created[self.id])

    @property
    def parent(self) -> int:
        return int(self.store.arr.node_parent[self.id])

    @property
    def children(self) -> list[int]:
        A = self.store.arr
        lo = A.ch_start[self.id]
        return A.ring_child[lo:lo + A.ch_len[self.id]].tolist()

    @property
    def ring_edges(self) -> list[tuple[int, int, int]]:
        A = self.store.arr
        lo, hi = A.ch_start[self.id], A.ch_start[self.id] + A.ch_len[self.id]
        return list(zip(A.ring_eid[lo:hi].tolist(), A.ring_u[lo:hi].tolist(), A.ring_v[lo:hi].tolist()))

    def leaves(self) -> list[int]:
        return self.store.leaves(self.id)

    def subtree_size(self) -> int:
        """Number of nodes (leaves and blossoms) in the tree under this node."""
        A, n = self.store.arr, self.store.n
        count, stack = 0, [self.id]
        while stack:
            x = stack.pop()
            count += 1
            if x >= n:
                lo = A.ch_start[x]
                stack.extend(A.ring_child[lo:lo + A.ch_len[x]].tolist())
        return count

    def extract_path(self, v: int) -> Path:
        return self.store.extract_path(self.id, v)


def record_blossom(
    store: BlossomStore,
    children: Sequence[int],
    ring_edges: Sequence[tuple[int, int, int]],
    base: int,
    created_at: int = 0,
) -> BlossomNode:
    return store.record_blossom(children, ring_edges, base, created_at)


def extract_path(node: BlossomNode, v: int) -> Path:
    return node.extract_path(v)
