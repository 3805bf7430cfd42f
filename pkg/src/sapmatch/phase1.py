"""One search of Edmonds' weighted matching algorithm, specialised for
shortest augmenting paths.

Weights are 2 on matched edges and 0 elsewhere, every dual starts at 1 and
the search starts with no blossoms, so only grow, blossom and dual adjustment
steps occur (no expand steps, no inner blossoms).  Duals are kept lazily:

    y(v) = ybase[v] + sign[v] * (delta - dbase[v])

with ``sign`` +1 for inner, -1 for outer and 0 outside the search forest.  A
dual adjustment is then just an increase of ``delta``.  Candidate edges sit in
integer buckets ``L(d)`` keyed by the value of ``delta`` at which they become
tight; ``delta`` never exceeds ``n // 2`` while an augmenting path exists, so
anything projected beyond that is dropped.

When the search meets an edge joining two different trees it stops and the
graph ``H`` of tight edges, with every positive blossom contracted, is built
from the final duals.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .blossom import (
    BlossomStore,
    new_store,
    store_open,
    store_set_child,
    uf_find,
    uf_union,
)
from .graph import Graph, Matching, matched_edge_ids, validate_matching

__all__ = [
    "UNREACHED",
    "OUTER",
    "INNER",
    "EdmondsSearch",
    "SearchOutcome",
    "HGraph",
    "run_search",
    "build_H",
]

UNREACHED = 0
OUTER = 1
INNER = 2

RUNNING = 0
OPTIMAL = 1
AUGMENTED = 2

# trace record kinds
T_GROW = 0
T_BLOSSOM = 1
T_AUGMENT = 2

# slots of the scalar array
_DELTA = 0
_NEV = 1
_STAMP = 2
_OUTCOME = 3
_FX = 4
_FY = 5
_FE = 6
_MAXD = 7
_TRACE = 8
_NTRACE = 9
_NSTEPS = 10
_NSCAL = 11

Phase1Arrays = namedtuple(
    "Phase1Arrays",
    [
        "adj_start",
        "adj_nbr",
        "adj_eid",
        "eu",
        "ev",
        "mate",
        "mate_eid",
        "status",
        "root",
        "lab_from",
        "lab_eid",
        "ybase",
        "dbase",
        "ysign",
        "outer_time",
        "mark",
        "uf_parent",
        "uf_rank",
        "uf_base",
        "top_node",
        "bhead",
        "btail",
        "ev_edge",
        "ev_from",
        "ev_next",
        "cyc_a",
        "cyc_b",
        "sc",
        "tr_kind",
        "tr_delta",
        "tr_edge",
        "tr_node",
    ],
)


def _allocate(g: Graph, mate: np.ndarray, trace: bool) -> tuple[Phase1Arrays, BlossomStore]:
    n, m = g.n, g.m
    i64 = np.int64
    sc = np.zeros(_NSCAL, dtype=i64)
    sc[_MAXD] = n // 2
    sc[_TRACE] = int(trace)
    sc[_FX] = sc[_FY] = sc[_FE] = -1
    nb = n // 2 + 1
    tcap = n + 4 if trace else 1
    P = Phase1Arrays(
        adj_start=g.adj_start,
        adj_nbr=g.adj_nbr,
        adj_eid=g.adj_eid,
        eu=g.eu,
        ev=g.ev,
        mate=mate,
        mate_eid=matched_edge_ids(g, mate),
        status=np.zeros(n, dtype=i64),
        root=np.full(n, -1, dtype=i64),
        lab_from=np.full(n, -1, dtype=i64),
        lab_eid=np.full(n, -1, dtype=i64),
        ybase=np.ones(n, dtype=i64),
        dbase=np.zeros(n, dtype=i64),
        ysign=np.zeros(n, dtype=i64),
        outer_time=np.full(n, -1, dtype=i64),
        mark=np.zeros(n, dtype=i64),
        uf_parent=np.arange(n, dtype=i64),
        uf_rank=np.zeros(n, dtype=i64),
        uf_base=np.arange(n, dtype=i64),
        top_node=np.arange(n, dtype=i64),
        bhead=np.full(nb, -1, dtype=i64),
        btail=np.full(nb, -1, dtype=i64),
        ev_edge=np.empty(2 * m + 1, dtype=i64),
        ev_from=np.empty(2 * m + 1, dtype=i64),
        ev_next=np.empty(2 * m + 1, dtype=i64),
        cyc_a=np.empty(n + 1, dtype=i64),
        cyc_b=np.empty(n + 1, dtype=i64),
        sc=sc,
        tr_kind=np.empty(tcap, dtype=i64),
        tr_delta=np.empty(tcap, dtype=i64),
        tr_edge=np.empty(tcap, dtype=i64),
        tr_node=np.empty(tcap, dtype=i64),
    )
    # Phase 2 adds at most n // 2 more blossoms to the same store.
    return P, BlossomStore(n, arrays=new_store(n, n))


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def _y(P, v, delta):
    return P.ybase[v] + P.ysign[v] * (delta - P.dbase[v])


@njit(cache=True)
def _find(P, v):
    return P.uf_base[uf_find(P.uf_parent, v)]


@njit(cache=True)
def _trace(P, kind, edge, node):
    if P.sc[_TRACE] == 0:
        return
    t = P.sc[_NTRACE]
    P.tr_kind[t] = kind
    P.tr_delta[t] = P.sc[_DELTA]
    P.tr_edge[t] = edge
    P.tr_node[t] = node
    P.sc[_NTRACE] = t + 1


@njit(cache=True)
def _enqueue(P, d, e, u):
    k = P.sc[_NEV]
    P.sc[_NEV] = k + 1
    P.ev_edge[k] = e
    P.ev_from[k] = u
    P.ev_next[k] = -1
    if P.bhead[d] == -1:
        P.bhead[d] = k
    else:
        P.ev_next[P.btail[d]] = k
    P.btail[d] = k


@njit(cache=True)
def scan_outer_kernel(P, u):
    """Queue every unmatched edge at ``u`` under the delta making it tight."""
    delta = P.sc[_DELTA]
    yu = _y(P, u, delta)
    bu = _find(P, u)
    for i in range(P.adj_start[u], P.adj_start[u + 1]):
        v = P.adj_nbr[i]
        if P.mate[u] == v:
            continue
        st = P.status[v]
        if st == INNER:
            continue
        if st == UNREACHED:
            d = delta + yu + _y(P, v, delta)
        else:
            if _find(P, v) == bu:
                continue
            d = delta + (yu + _y(P, v, delta)) // 2
        if d > P.sc[_MAXD]:
            continue
        _enqueue(P, d, P.adj_eid[i], u)


@njit(cache=True)
def init_kernel(P):
    n = len(P.status)
    for v in range(n):
        if P.mate[v] == -1:
            P.status[v] = OUTER
            P.root[v] = v
            P.ysign[v] = -1
            P.outer_time[v] = 0
    for v in range(n):
        if P.mate[v] == -1:
            scan_outer_kernel(P, v)


@njit(cache=True)
def next_event_kernel(P):
    """Pop the next event that can fire; returns ``(x, y, e)`` or ``-1``s.

    ``delta`` is advanced to the bucket the event came from.  Events whose
    ends now share a blossom, whose far end turned inner, or whose tight time
    moved because the far end became outer after queuing, are dropped: the
    later promotion queued a fresh event for them.
    """
    d = P.sc[_DELTA]
    maxd = P.sc[_MAXD]
    while d <= maxd:
        k = P.bhead[d]
        while k != -1:
            P.bhead[d] = P.ev_next[k]
            x = P.ev_from[k]
            e = P.ev_edge[k]
            y = P.ev[e] if P.eu[e] == x else P.eu[e]
            k = P.bhead[d]
            st = P.status[y]
            if st == INNER:
                continue
            if st == OUTER and _find(P, x) == _find(P, y):
                continue
            if _y(P, x, d) + _y(P, y, d) != 0:
                continue
            P.sc[_DELTA] = d
            return x, y, e
        P.btail[d] = -1
        d += 1
    return -1, -1, -1


@njit(cache=True)
def grow_kernel(P, x, y, e):
    delta = P.sc[_DELTA]
    yp = P.mate[y]
    P.status[y] = INNER
    P.ybase[y] = _y(P, y, delta)
    P.dbase[y] = delta
    P.ysign[y] = 1
    P.status[yp] = OUTER
    P.ybase[yp] = _y(P, yp, delta)
    P.dbase[yp] = delta
    P.ysign[yp] = -1
    P.outer_time[yp] = delta
    P.lab_from[yp] = x
    P.lab_eid[yp] = e
    P.root[y] = P.root[x]
    P.root[yp] = P.root[x]
    _trace(P, T_GROW, e, -1)
    scan_outer_kernel(P, yp)


@njit(cache=True)
def _parent_base(P, c):
    # base of the outer blossom above the blossom whose base is c
    return _find(P, P.lab_from[c])


@njit(cache=True)
def blossom_kernel(P, S, x, y, e):
    """Contract the fundamental cycle of the tight edge ``xy``; returns the
    new node id."""
    delta = P.sc[_DELTA]
    bx = _find(P, x)
    by = _find(P, y)
    P.sc[_STAMP] += 1
    stamp = P.sc[_STAMP]
    P.mark[bx] = stamp
    P.mark[by] = stamp
    cx = bx
    cy = by
    a = -1
    while a == -1:
        if P.mate[cx] != -1:
            cx = _parent_base(P, cx)
            if P.mark[cx] == stamp:
                a = cx
                break
            P.mark[cx] = stamp
        if P.mate[cy] != -1:
            cy = _parent_base(P, cy)
            if P.mark[cy] == stamp:
                a = cy
                break
            P.mark[cy] = stamp
    # bases strictly below the common ancestor on either side
    nx = 0
    c = bx
    while c != a:
        P.cyc_a[nx] = c
        nx += 1
        c = _parent_base(P, c)
    ny = 0
    c = by
    while c != a:
        P.cyc_b[ny] = c
        ny += 1
        c = _parent_base(P, c)

    size = 1 + 2 * nx + 2 * ny
    node = store_open(S, a, delta, size)
    slot = 0
    # ring slot i records child i and the edge to child i+1; build it by
    # walking the cycle from the common ancestor down the x side, across xy,
    # and up the y side.
    cur_child = P.top_node[a]
    for t in range(nx - 1, -1, -1):
        c = P.cyc_a[t]
        i = P.mate[c]
        store_set_child(S, node, slot, cur_child, P.lab_eid[c], P.lab_from[c], i, delta)
        slot += 1
        store_set_child(S, node, slot, i, P.mate_eid[i], i, c, delta)
        slot += 1
        cur_child = P.top_node[c]
    store_set_child(S, node, slot, cur_child, e, x, y, delta)
    slot += 1
    for t in range(ny):
        c = P.cyc_b[t]
        i = P.mate[c]
        store_set_child(S, node, slot, P.top_node[c], P.mate_eid[c], c, i, delta)
        slot += 1
        store_set_child(S, node, slot, i, P.lab_eid[c], i, P.lab_from[c], delta)
        slot += 1
    # merge and promote the inner vertices
    r = uf_find(P.uf_parent, a)
    for t in range(nx):
        c = P.cyc_a[t]
        r = uf_union(P.uf_parent, P.uf_rank, r, c)
        r = uf_union(P.uf_parent, P.uf_rank, r, P.mate[c])
    for t in range(ny):
        c = P.cyc_b[t]
        r = uf_union(P.uf_parent, P.uf_rank, r, c)
        r = uf_union(P.uf_parent, P.uf_rank, r, P.mate[c])
    P.uf_base[r] = a
    P.top_node[a] = node
    _trace(P, T_BLOSSOM, e, node)
    # former inner vertices become outer, then get scanned in ring order
    for t in range(nx):
        _promote(P, P.mate[P.cyc_a[t]], delta)
    for t in range(ny):
        _promote(P, P.mate[P.cyc_b[t]], delta)
    for t in range(nx - 1, -1, -1):
        scan_outer_kernel(P, P.mate[P.cyc_a[t]])
    for t in range(ny):
        scan_outer_kernel(P, P.mate[P.cyc_b[t]])
    return node


@njit(cache=True)
def _promote(P, v, delta):
    P.ybase[v] = _y(P, v, delta)
    P.dbase[v] = delta
    P.ysign[v] = -1
    P.status[v] = OUTER
    P.outer_time[v] = delta


@njit(cache=True)
def run_kernel(P, S, budget):
    """Process up to ``budget`` events (``budget < 0``: until the search
    ends).  Returns the outcome code."""
    while budget != 0:
        x, y, e = next_event_kernel(P)
        if x == -1:
            P.sc[_OUTCOME] = OPTIMAL
            return OPTIMAL
        P.sc[_NSTEPS] += 1
        st = P.status[y]
        if st == UNREACHED:
            grow_kernel(P, x, y, e)
        elif P.root[x] == P.root[y]:
            blossom_kernel(P, S, x, y, e)
        else:
            P.sc[_FX] = x
            P.sc[_FY] = y
            P.sc[_FE] = e
            _trace(P, T_AUGMENT, e, -1)
            P.sc[_OUTCOME] = AUGMENTED
            return AUGMENTED
        if budget > 0:
            budget -= 1
    return RUNNING


# ---------------------------------------------------------------------------
# H construction kernels


@njit(cache=True)
def _label_kernel(S, n, top_node, uf_parent, uf_base, delta_final, label, hnode):
    """Top-down pass over every maximal blossom: discard blossoms formed at
    the final delta and label each vertex with the base of the maximal
    positive blossom (or itself) that contains it."""
    stack = np.empty(S.count[0] + 1, dtype=np.int64)
    for v in range(n):
        if uf_base[uf_find(uf_parent, v)] != v:
            continue
        top = 0
        stack[top] = top_node[v]
        top += 1
        while top > 0:
            top -= 1
            node = stack[top]
            if node >= n and S.node_created[node] == delta_final:
                lo = S.ch_start[node]
                for i in range(S.ch_len[node]):
                    stack[top] = S.ring_child[lo + i]
                    top += 1
                continue
            rep = S.node_base[node]
            hnode[rep] = node
            S.node_parent[node] = -1
            # label every leaf below this node
            sub = top
            stack[sub] = node
            sub += 1
            while sub > top:
                sub -= 1
                w = stack[sub]
                if w < n:
                    label[w] = rep
                else:
                    lo = S.ch_start[w]
                    for i in range(S.ch_len[w]):
                        stack[sub] = S.ring_child[lo + i]
                        sub += 1


# ---------------------------------------------------------------------------
# Python surface


@dataclass
class SearchOutcome:
    """Result of one search.

    ``optimal`` means no augmenting path exists.  Otherwise ``delta_final`` is
    the value of delta at the augmenting edge, ``y`` the final duals and
    ``positive_blossoms`` the node ids of the maximal blossoms formed before
    the last dual adjustment.
    """

    optimal: bool
    delta_final: int
    y: np.ndarray
    positive_blossoms: list[int]
    z: dict[int, int]
    search: EdmondsSearch = field(repr=False)
    augmenting_edge: int = -1

    @property
    def sap_length(self) -> int | None:
        return None if self.optimal else 2 * self.delta_final - 1

    def certificate(self):
        """Dual certificate of optimality (only for optimal outcomes)."""
        if not self.optimal:
            raise ValueError("only an optimal outcome carries an optimality certificate")
        return self.search.certificate(self.search.n // 2 + 1)


class EdmondsSearch:
    """A single search, exposed step by step.

    ``run`` drives it to completion; the individual steps are available for
    inspection and testing.
    """

    def __init__(self, g: Graph, m: Matching | None = None, trace: bool = False):
        if m is None:
            m = Matching.empty(g.n)
        if not validate_matching(g, m):
            raise ValueError("search needs a valid matching of the graph")
        self.g = g
        self.n = g.n
        self.matching = m
        self.P, self.store = _allocate(g, m.mate.copy(), trace)
        self._frozen = None
        init_kernel(self.P)

    # -- state inspection -------------------------------------------------
    @property
    def delta(self) -> int:
        return int(self.P.sc[_DELTA])

    @property
    def max_delta(self) -> int:
        return int(self.P.sc[_MAXD])

    @property
    def status(self) -> np.ndarray:
        return self.P.status

    @property
    def steps(self) -> int:
        return int(self.P.sc[_NSTEPS])

    def y(self, delta: int | None = None) -> np.ndarray:
        """Materialised vertex duals at ``delta`` (default: current)."""
        d = self.delta if delta is None else delta
        P = self.P
        return P.ybase + P.ysign * (d - P.dbase)

    def find_base(self, v: int) -> int:
        return int(_find(self.P, v))

    def bucket(self, d: int) -> list[tuple[int, int]]:
        """Pending ``(edge, from vertex)`` events in ``L(d)``, FIFO order."""
        P, out = self.P, []
        k = P.bhead[d]
        while k != -1:
            out.append((int(P.ev_edge[k]), int(P.ev_from[k])))
            k = P.ev_next[k]
        return out

    def blossom_ids(self) -> list[int]:
        """Blossoms formed by this search (later users of the shared store
        may append more)."""
        if self._frozen is not None:
            return list(range(self.n, len(self._frozen)))
        return list(self.store.blossom_ids())

    def _parents(self) -> np.ndarray:
        if self._frozen is not None:
            return self._frozen
        A = self.store.arr
        return A.node_parent[:A.count[0]]

    def z(self, delta: int | None = None) -> dict[int, int]:
        """Blossom duals: each blossom gains 2 per unit of delta while it is
        maximal, i.e. from creation until absorbed into a larger one."""
        d = self.delta if delta is None else delta
        A = self.store.arr
        ids = np.asarray(self.blossom_ids(), dtype=np.int64)
        end = A.node_absorbed[ids]
        end = np.where(end >= 0, end, d)
        return dict(zip(ids.tolist(), (2 * (end - A.node_created[ids])).tolist()))

    def tree_edges(self) -> list[int]:
        """Edge ids of the search structure: grow edges, matched edges inside
        it and blossom ring edges."""
        P, A = self.P, self.store.arr
        in_s = np.flatnonzero(P.status != UNREACHED)
        out = set(P.lab_eid[in_s][P.lab_eid[in_s] >= 0].tolist())
        out.update(P.mate_eid[in_s][P.mate_eid[in_s] >= 0].tolist())
        for b in self.blossom_ids():
            lo = A.ch_start[b]
            out.update(A.ring_eid[lo:lo + A.ch_len[b]].tolist())
        return sorted(out)

    def trace_records(self) -> list[dict]:
        P = self.P
        kinds = ("grow", "blossom", "augment")
        out = []
        for t in range(int(P.sc[_NTRACE])):
            node = int(P.tr_node[t])
            out.append({
                "step": kinds[P.tr_kind[t]],
                "delta": int(P.tr_delta[t]),
                "edge": int(P.tr_edge[t]),
                "blossom": node if node >= 0 else None,
            })
        return out

    # -- individual steps --------------------------------------------------
    def scan_outer(self, u: int) -> None:
        scan_outer_kernel(self.P, u)

    def next_event(self) -> tuple[int, int, int] | None:
        x, y, e = next_event_kernel(self.P)
        return None if x == -1 else (int(x), int(y), int(e))

    def grow_step(self, x: int, y: int, e: int) -> None:
        if self.P.mate[y] == -1:
            raise ValueError(f"vertex {y} is free: that is an augment, not a grow")
        if self.P.status[y] != UNREACHED:
            raise ValueError(f"vertex {y} is already in the search forest")
        grow_kernel(self.P, x, y, e)

    def blossom_step(self, x: int, y: int, e: int) -> int:
        P = self.P
        if P.status[x] != OUTER or P.status[y] != OUTER:
            raise ValueError("a blossom step needs two outer vertices")
        if P.root[x] != P.root[y]:
            raise ValueError("ends lie in different trees: that is an augment")
        if _find(P, x) == _find(P, y):
            raise ValueError("ends already share a blossom")
        return int(blossom_kernel(P, self.store.arr, x, y, e))

    def step(self) -> int:
        """Process one event; returns 0 (running), 1 (optimal), 2 (augmented)."""
        return int(run_kernel(self.P, self.store.arr, 1))

    def run(self, debug: bool = False) -> SearchOutcome:
        if debug:
            from .oracle import check_search_state

            check_search_state(self)
            code = RUNNING
            while code == RUNNING:
                code = self.step()
                check_search_state(self)
        else:
            code = run_kernel(self.P, self.store.arr, -1)
        return self.outcome()

    def outcome(self) -> SearchOutcome:
        code = int(self.P.sc[_OUTCOME])
        if code == RUNNING:
            raise RuntimeError("search has not finished")
        d = self.delta
        if self._frozen is None:
            A = self.store.arr
            self._frozen = A.node_parent[:A.count[0]].copy()
        if code == OPTIMAL:
            return SearchOutcome(True, d, self.y(), [], self.z(), self, -1)
        # maximal positive: formed before the last adjustment, with every
        # enclosing blossom (if any) formed at the final delta
        ids = np.arange(self.n, len(self._frozen))
        A = self.store.arr
        created = A.node_created[ids]
        par = self._frozen[ids]
        top = par < 0
        top_or_fresh = top.copy()
        top_or_fresh[~top] = A.node_created[par[~top]] == d
        positive = ids[(created < d) & top_or_fresh].tolist()
        return SearchOutcome(False, d, self.y(), sorted(positive), self.z(), self, int(self.P.sc[_FE]))

    def certificate(self, delta: int):
        """Snapshot of the duals at ``delta`` as an oracle certificate."""
        from .oracle import Certificate

        A = self.store.arr
        ids = self.blossom_ids()
        par = self._parents()
        # blossom i is store node n + i
        parent = par[self.n:] - self.n
        parent[parent < 0] = -1
        innermost = par[:self.n] - self.n
        innermost[innermost < 0] = -1
        zd = self.z(delta)
        return Certificate(
            y=self.y(delta),
            blossom_parent=parent,
            blossom_base=A.node_base[np.asarray(ids, dtype=np.int64)].copy(),
            z=np.fromiter((zd[b] for b in ids), dtype=np.int64, count=len(ids)),
            vertex_blossom=innermost,
            mate=self.P.mate.copy(),
        )


def run_search(g: Graph, m: Matching | None = None, debug: bool = False, trace: bool = False) -> SearchOutcome:
    """Run one search on ``g`` from matching ``m``."""
    return EdmondsSearch(g, m, trace=trace).run(debug=debug)


@dataclass(eq=False)
class HGraph:
    """Tight-edge graph with the positive blossoms contracted.

    H-vertices are named by a representative vertex of ``G`` (the base of the
    contracted blossom, or the vertex itself); ``label[v]`` maps every vertex
    of ``G`` to its H-vertex and ``hnode[h]`` to the blossom store node behind
    it.  Each adjacency slot keeps the ``G`` edge id and the two ``G``
    endpoints (``gself`` in this H-vertex, ``gother`` in the neighbour).
    """

    g: Graph
    mate: np.ndarray
    mate_eid: np.ndarray
    label: np.ndarray
    hnode: np.ndarray
    adj_start: np.ndarray
    adj_nbr: np.ndarray
    adj_eid: np.ndarray
    adj_gself: np.ndarray
    adj_gother: np.ndarray
    edge_ids: np.ndarray
    store: BlossomStore
    delta_final: int
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.g.n

    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.label == np.arange(self.g.n))

    def is_vertex(self, h: int) -> bool:
        return bool(self.label[h] == h)

    def is_contracted(self, h: int) -> bool:
        return bool(self.hnode[h] != h)

    def members(self, h: int) -> list[int]:
        return np.flatnonzero(self.label == h).tolist()

    def neighbors(self, h: int) -> list[tuple[int, int]]:
        lo, hi = self.adj_start[h], self.adj_start[h + 1]
        return list(zip(self.adj_nbr[lo:hi].tolist(), self.adj_eid[lo:hi].tolist()))

    def is_matched_edge(self, e: int) -> bool:
        return bool(self.mate[self.g.eu[e]] == self.g.ev[e])

    def h_edges(self) -> list[tuple[int, int, int]]:
        """``(h_u, h_v, G edge id)`` for every edge of H."""
        g = self.g
        return [(int(self.label[g.eu[e]]), int(self.label[g.ev[e]]), int(e)) for e in self.edge_ids]


@njit(cache=True)
def _h_adjacency_kernel(eu, ev, y, mate, label, n):
    """Tight edges between distinct H-vertices, bucketed by H-vertex in
    edge order (a counting sort)."""
    m = len(eu)
    keep = np.empty(m, dtype=np.int64)
    k = 0
    adj_start = np.zeros(n + 1, dtype=np.int64)
    for e in range(m):
        u, v = eu[e], ev[e]
        w = 2 if mate[u] == v else 0
        if y[u] + y[v] == w and label[u] != label[v]:
            keep[k] = e
            k += 1
            adj_start[label[u] + 1] += 1
            adj_start[label[v] + 1] += 1
    for h in range(n):
        adj_start[h + 1] += adj_start[h]
    fill = adj_start[:n].copy()
    nbr = np.empty(2 * k, dtype=np.int64)
    eid = np.empty(2 * k, dtype=np.int64)
    gself = np.empty(2 * k, dtype=np.int64)
    gother = np.empty(2 * k, dtype=np.int64)
    # all first-endpoint slots before second-endpoint slots, as a stable
    # sort of the doubled edge list would give
    for side in range(2):
        for i in range(k):
            e = keep[i]
            a, b = (eu[e], ev[e]) if side == 0 else (ev[e], eu[e])
            h = label[a]
            j = fill[h]
            fill[h] += 1
            nbr[j] = label[b]
            eid[j] = e
            gself[j] = a
            gother[j] = b
    return keep[:k].copy(), adj_start, nbr, eid, gself, gother


def build_H(g: Graph, m: Matching, outcome: SearchOutcome) -> HGraph:
    """Contract the maximal positive blossoms and keep the tight edges that
    join distinct H-vertices."""
    if outcome.optimal:
        raise ValueError("H is only defined after an augmenting search")
    search = outcome.search
    P, S = search.P, search.store.arr
    n = g.n
    label = np.arange(n, dtype=np.int64)
    hnode = np.arange(n, dtype=np.int64)
    _label_kernel(S, n, P.top_node, P.uf_parent, P.uf_base, outcome.delta_final, label, hnode)

    y = outcome.y
    mate = P.mate
    ids, adj_start, nbr, eid, gself, gother = _h_adjacency_kernel(g.eu, g.ev, y, mate, label, n)
    return HGraph(
        g=g,
        mate=mate,
        mate_eid=P.mate_eid,
        label=label,
        hnode=hnode,
        adj_start=adj_start,
        adj_nbr=nbr,
        adj_eid=eid,
        adj_gself=gself,
        adj_gother=gother,
        edge_ids=ids,
        store=search.store,
        delta_final=outcome.delta_final,
        y=y,
    )
