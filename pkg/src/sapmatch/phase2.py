"""Path-preserving depth-first search over ``H`` and path expansion.

``find_ap_set`` grows one alternating DFS tree at a time from each free
H-vertex.  Blossoms are contracted as the search meets back edges, always
exploring the newly outer vertices nearest the old base first, so the DFS
path to the current vertex keeps every outer vertex that still has edges
to scan.  When a free vertex is reached, the path to it is recorded, its
vertices are deleted and the whole tree is abandoned.

Recursion is replaced by an explicit stack of ``(vertex, adjacency
position)`` frames; abandoning a tree clears it.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .blossom import emit_blossom_path, store_open, store_set_child, uf_find, uf_union
from .graph import Path
from .oracle import InvariantError
from .phase1 import HGraph

__all__ = ["PathSet", "find_ap_set", "expand_paths", "apply_paths", "DEBUG_COUNTERS"]

UNREACHED = 0
OUTER = 1
INNER = 2

T_GROW = 0
T_BLOSSOM = 1
T_AUGMENT = 2

# scalar slots
_CLOCK = 0
_NSTACK = 1
_NPATH = 2
_HV = 3
_HE = 4
_NTRACE = 5
_DEBUG = 6
_TRACE = 7
_NGROW = 8
_NBLOSSOM = 9
_STAMP = 10
_NSCAL = 11

# in-kernel debug counters
DEBUG_COUNTERS = (
    "invariant_I",
    "timestamp_vs_ancestry",
    "cross_tree_outer",
    "edge_scanned_thrice",
    "containment",
    "broken_ancestry_walk",
)
_D_INV = 0
_D_TS = 1
_D_CROSS = 2
_D_SCAN = 3
_D_CONT = 4
_D_WALK = 5

Phase2Arrays = namedtuple(
    "Phase2Arrays",
    [
        "adj_start",
        "adj_nbr",
        "adj_eid",
        "adj_gself",
        "adj_gother",
        "eu",
        "ev",
        "mate",
        "mate_eid",
        "label",
        "hnode",
        "hmate",
        "status",
        "dead",
        "uf_parent",
        "uf_rank",
        "uf_base",
        "top_node",
        "outer_time",
        "lab_parent",
        "lab_eid",
        "lab_gx",
        "lab_gy",
        "root",
        "fr_v",
        "fr_pos",
        "cyc",
        "hp_v",
        "hp_e",
        "hp_voff",
        "hp_eoff",
        "sc",
        "dbg",
        "scan_cnt",
        "slot_scanned",
        "mark",
        "scr_v",
        "scr_e",
        "scr2_v",
        "tr_kind",
        "tr_time",
        "tr_edge",
        "tr_node",
    ],
)


def _allocate(h: HGraph, debug: bool, trace: bool) -> Phase2Arrays:
    n, g = h.n, h.g
    i64 = np.int64
    hmate = np.full(n, -1, dtype=i64)
    reps = h.vertices()
    matched = reps[h.mate[reps] >= 0]
    hmate[matched] = h.label[h.mate[matched]]
    sc = np.zeros(_NSCAL, dtype=i64)
    sc[_DEBUG] = int(debug)
    sc[_TRACE] = int(trace)
    dn = n + 2 if debug else 1
    tcap = 2 * n + 4 if trace else 1
    return Phase2Arrays(
        adj_start=h.adj_start,
        adj_nbr=h.adj_nbr,
        adj_eid=h.adj_eid,
        adj_gself=h.adj_gself,
        adj_gother=h.adj_gother,
        eu=g.eu,
        ev=g.ev,
        mate=h.mate,
        mate_eid=h.mate_eid,
        label=h.label,
        hnode=h.hnode,
        hmate=hmate,
        status=np.zeros(n, dtype=i64),
        dead=np.zeros(n, dtype=np.bool_),
        uf_parent=np.arange(n, dtype=i64),
        uf_rank=np.zeros(n, dtype=i64),
        uf_base=np.arange(n, dtype=i64),
        top_node=h.hnode.copy(),
        outer_time=np.full(n, -1, dtype=i64),
        lab_parent=np.full(n, -1, dtype=i64),
        lab_eid=np.full(n, -1, dtype=i64),
        lab_gx=np.full(n, -1, dtype=i64),
        lab_gy=np.full(n, -1, dtype=i64),
        root=np.full(n, -1, dtype=i64),
        fr_v=np.empty(n + 1, dtype=i64),
        fr_pos=np.empty(n + 1, dtype=i64),
        cyc=np.empty(n + 1, dtype=i64),
        hp_v=np.empty(n + 1, dtype=i64),
        hp_e=np.empty(n + 1, dtype=i64),
        hp_voff=np.zeros(n + 2, dtype=i64),
        hp_eoff=np.zeros(n + 2, dtype=i64),
        sc=sc,
        dbg=np.zeros(len(DEBUG_COUNTERS), dtype=i64),
        scan_cnt=np.zeros(g.m if debug else 1, dtype=i64),
        slot_scanned=np.zeros(len(h.adj_nbr) if debug else 1, dtype=np.bool_),
        mark=np.zeros(dn, dtype=i64),
        scr_v=np.empty(dn, dtype=i64),
        scr_e=np.empty(dn, dtype=i64),
        scr2_v=np.empty(dn, dtype=i64),
        tr_kind=np.empty(tcap, dtype=i64),
        tr_time=np.empty(tcap, dtype=i64),
        tr_edge=np.empty(tcap, dtype=i64),
        tr_node=np.empty(tcap, dtype=i64),
    )


@njit(cache=True)
def _find(Q, v):
    return Q.uf_base[uf_find(Q.uf_parent, v)]


@njit(cache=True)
def _trace(Q, kind, edge, node):
    if Q.sc[_TRACE] == 0:
        return
    t = Q.sc[_NTRACE]
    Q.tr_kind[t] = kind
    Q.tr_time[t] = Q.sc[_CLOCK]
    Q.tr_edge[t] = edge
    Q.tr_node[t] = node
    Q.sc[_NTRACE] = t + 1


@njit(cache=True)
def _emit_px(Q, S, x, out_v, out_e, nv, ne):
    """Append the H-level path P(x) from outer ``x`` to its tree root."""
    cur = x
    while True:
        b = _find(Q, cur)
        nv, ne = emit_blossom_path(S, cur, Q.top_node[b], 1, True, Q.label, Q.hnode, out_v, out_e, nv, ne)
        if nv < 0:
            return -1, -1
        if Q.hmate[b] == -1:
            return nv, ne
        out_e[ne] = Q.mate_eid[b]
        ne += 1
        out_v[nv] = Q.hmate[b]
        nv += 1
        out_e[ne] = Q.lab_eid[b]
        ne += 1
        cur = Q.lab_parent[b]


@njit(cache=True)
def _mark_px(Q, S, x, stamp):
    nv, ne = _emit_px(Q, S, x, Q.scr_v, Q.scr_e, 0, 0)
    for i in range(nv):
        Q.mark[Q.scr_v[i]] = stamp
    return nv


@njit(cache=True)
def _next_stamp(Q):
    Q.sc[_STAMP] += 1
    return Q.sc[_STAMP]


@njit(cache=True)
def _check_invariant_I(Q, S, x):
    # every outer vertex with a pending frame must lie on P(x)
    stamp = _next_stamp(Q)
    _mark_px(Q, S, x, stamp)
    for i in range(Q.sc[_NSTACK]):
        if Q.mark[Q.fr_v[i]] != stamp:
            Q.dbg[_D_INV] += 1
            return


@njit(cache=True)
def _sm_ancestor(Q, a, v):
    """Explicit test: is ``a`` a proper ancestor of outer ``v`` in the grow
    forest?  Climbs two levels (outer to outer) at a time."""
    cur = v
    steps = 0
    n = len(Q.status)
    while steps <= n:
        if Q.lab_parent[cur] != -1:
            cur = Q.lab_parent[cur]
        elif Q.hmate[cur] != -1 and Q.lab_parent[Q.hmate[cur]] != -1:
            # former inner vertex: its parent is the scanner of its mate's
            # grow edge
            cur = Q.lab_parent[Q.hmate[cur]]
        else:
            return False
        if cur == a:
            return True
        steps += 1
    return False


@njit(cache=True)
def _check_containment(Q, S, k):
    # P(u_1) contains P(u_2) contains ... P(u_k); u_i = hmate[cyc[k - i]]
    for i in range(1, k):
        stamp = _next_stamp(Q)
        _mark_px(Q, S, Q.hmate[Q.cyc[k - i]], stamp)
        nv, ne = _emit_px(Q, S, Q.hmate[Q.cyc[k - i - 1]], Q.scr2_v, Q.scr_e, 0, 0)
        for t in range(nv):
            if Q.mark[Q.scr2_v[t]] != stamp:
                Q.dbg[_D_CONT] += 1
                return


@njit(cache=True)
def _make_outer(Q, v):
    Q.status[v] = OUTER
    Q.sc[_CLOCK] += 1
    Q.outer_time[v] = Q.sc[_CLOCK]


@njit(cache=True)
def _push_frame(Q, v):
    t = Q.sc[_NSTACK]
    Q.fr_v[t] = v
    Q.fr_pos[t] = Q.adj_start[v]
    Q.sc[_NSTACK] = t + 1


@njit(cache=True)
def _blossom_step(Q, S, x, y, gx, gy, e):
    bx = _find(Q, x)
    by = _find(Q, y)
    k = 0
    c = by
    while c != bx:
        if Q.lab_parent[c] == -1:
            Q.dbg[_D_WALK] += 1
            return -1
        Q.cyc[k] = c
        k += 1
        c = _find(Q, Q.lab_parent[c])
    # cyc[k-1] is c_1 (nearest bx), cyc[0] is c_k = by
    r = uf_find(Q.uf_parent, bx)
    for i in range(k - 1, -1, -1):
        c = Q.cyc[i]
        u = Q.hmate[c]
        r = uf_union(Q.uf_parent, Q.uf_rank, r, u)
        r = uf_union(Q.uf_parent, Q.uf_rank, r, c)
        _make_outer(Q, u)
        Q.root[u] = Q.root[bx]
    Q.uf_base[r] = bx

    # ring: top_node[bx], u_1, c_1, ..., u_k, c_k; the edge out of c_i is
    # the grow edge of c_{i+1}, and the one out of c_k is the scanned edge
    node = store_open(S, bx, -1, 1 + 2 * k)
    c = Q.cyc[k - 1]
    store_set_child(S, node, 0, Q.top_node[bx], Q.lab_eid[c], Q.lab_gx[c], Q.lab_gy[c], -1)
    slot = 1
    for i in range(k - 1, -1, -1):
        c = Q.cyc[i]
        u = Q.hmate[c]
        store_set_child(S, node, slot, Q.top_node[u], Q.mate_eid[c], u, c, -1)
        if i > 0:
            nc = Q.cyc[i - 1]
            store_set_child(S, node, slot + 1, Q.top_node[c], Q.lab_eid[nc], Q.lab_gx[nc], Q.lab_gy[nc], -1)
        else:
            store_set_child(S, node, slot + 1, Q.top_node[c], e, gy, gx, -1)
        slot += 2
    Q.top_node[bx] = node
    Q.sc[_NBLOSSOM] += 1
    _trace(Q, T_BLOSSOM, e, node)
    if Q.sc[_DEBUG]:
        _check_containment(Q, S, k)
    for i in range(k):
        _push_frame(Q, Q.hmate[Q.cyc[i]])
    return node


@njit(cache=True)
def _record_path(Q, S, x, y, e):
    p = Q.sc[_NPATH]
    nv = Q.sc[_HV]
    ne = Q.sc[_HE]
    start = nv
    Q.hp_v[nv] = y
    nv += 1
    Q.hp_e[ne] = e
    ne += 1
    nv, ne = _emit_px(Q, S, x, Q.hp_v, Q.hp_e, nv, ne)
    for i in range(start, nv):
        Q.dead[Q.hp_v[i]] = True
    Q.sc[_HV] = nv
    Q.sc[_HE] = ne
    Q.sc[_NPATH] = p + 1
    Q.hp_voff[p + 1] = nv
    Q.hp_eoff[p + 1] = ne
    _trace(Q, T_AUGMENT, e, -1)


@njit(cache=True)
def find_ap_set_kernel(Q, S):
    n = len(Q.status)
    debug = Q.sc[_DEBUG] != 0
    for f in range(n):
        if Q.label[f] != f or Q.hmate[f] != -1 or Q.dead[f] or Q.status[f] != UNREACHED:
            continue
        _make_outer(Q, f)
        Q.root[f] = f
        Q.sc[_NSTACK] = 0
        _push_frame(Q, f)
        while Q.sc[_NSTACK] > 0:
            t = Q.sc[_NSTACK] - 1
            x = Q.fr_v[t]
            i = Q.fr_pos[t]
            if i == Q.adj_start[x + 1]:
                Q.sc[_NSTACK] = t
                continue
            Q.fr_pos[t] = i + 1
            y = Q.adj_nbr[i]
            gx = Q.adj_gself[i]
            gy = Q.adj_gother[i]
            e = Q.adj_eid[i]
            if Q.mate[gx] == gy:
                continue
            if debug:
                _check_invariant_I(Q, S, x)
                Q.scan_cnt[e] += 1
                if Q.scan_cnt[e] > 2:
                    Q.dbg[_D_SCAN] += 1
                Q.slot_scanned[i] = True
            if Q.dead[y]:
                continue
            st = Q.status[y]
            if st == UNREACHED:
                if Q.hmate[y] == -1:
                    _record_path(Q, S, x, y, e)
                    Q.sc[_NSTACK] = 0
                    break
                yp = Q.hmate[y]
                Q.status[y] = INNER
                Q.root[y] = Q.root[x]
                Q.root[yp] = Q.root[x]
                Q.lab_parent[yp] = x
                Q.lab_eid[yp] = e
                Q.lab_gx[yp] = gx
                Q.lab_gy[yp] = gy
                _make_outer(Q, yp)
                Q.sc[_NGROW] += 1
                _trace(Q, T_GROW, e, -1)
                _push_frame(Q, yp)
            elif st == OUTER:
                bx = _find(Q, x)
                by = _find(Q, y)
                if bx == by:
                    continue
                later = Q.outer_time[by] > Q.outer_time[bx]
                if debug:
                    if Q.root[x] != Q.root[y]:
                        Q.dbg[_D_CROSS] += 1
                    if later != _sm_ancestor(Q, bx, by):
                        Q.dbg[_D_TS] += 1
                if later:
                    _blossom_step(Q, S, x, y, gx, gy, e)


# ---------------------------------------------------------------------------
# expansion into G


@njit(cache=True)
def _gend(eu, ev, label, e, h):
    return eu[e] if label[eu[e]] == h else ev[e]


@njit(cache=True)
def expand_kernel(S, eu, ev, mate, label, hnode, hp_v, hp_e, hp_voff, hp_eoff, npath, gv, ge, gvoff, geoff):
    """Replace every contracted H-vertex on the recorded paths by the
    even-length path through its blossom; returns False on a failure."""
    nv = 0
    ne = 0
    for p in range(npath):
        v0 = hp_voff[p]
        v1 = hp_voff[p + 1]
        e0 = hp_eoff[p]
        L = v1 - v0
        for j in range(L):
            h = hp_v[v0 + j]
            node = hnode[h]
            if node == h:
                gv[nv] = h
                nv += 1
            else:
                if j == L - 1:
                    s = _gend(eu, ev, label, hp_e[e0 + j - 1], h)
                    fwd = 1
                else:
                    out = hp_e[e0 + j]
                    if j > 0 and mate[eu[out]] == ev[out]:
                        # entered by an unmatched edge, leaves by the base
                        s = _gend(eu, ev, label, hp_e[e0 + j - 1], h)
                        fwd = 1
                    else:
                        s = _gend(eu, ev, label, out, h)
                        fwd = 0
                nv, ne = emit_blossom_path(S, s, node, fwd, False, label, hnode, gv, ge, nv, ne)
                if nv < 0:
                    return False
            if j < L - 1:
                ge[ne] = hp_e[e0 + j]
                ne += 1
        gvoff[p + 1] = nv
        geoff[p + 1] = ne
    return True


@njit(cache=True)
def apply_kernel(mate, gv, gvoff, npath):
    for p in range(npath):
        for i in range(gvoff[p], gvoff[p + 1] - 1, 2):
            a = gv[i]
            b = gv[i + 1]
            mate[a] = b
            mate[b] = a


@dataclass(eq=False)
class PathSet:
    """Vertex-disjoint augmenting paths of ``H`` found by one DFS pass.

    Paths are stored flat: path ``i`` has H-vertices
    ``hp_v[hp_voff[i]:hp_voff[i+1]]`` and the ``G`` edge ids between them in
    ``hp_e[hp_eoff[i]:hp_eoff[i+1]]``.  After :func:`expand_paths` the
    matching ``G`` paths are available the same way through ``gv``/``ge``.
    """

    h: HGraph
    hp_v: np.ndarray
    hp_e: np.ndarray
    hp_voff: np.ndarray
    hp_eoff: np.ndarray
    stats: dict = field(default_factory=dict)
    debug_counts: dict | None = None
    trace: list = field(default_factory=list)
    gv: np.ndarray | None = None
    ge: np.ndarray | None = None
    gvoff: np.ndarray | None = None
    geoff: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.hp_voff) - 1

    def h_paths(self) -> list[Path]:
        """Paths in ``H``: H-vertex sequences with ``G`` edge ids."""
        return [
            Path(
                tuple(self.hp_v[self.hp_voff[i]:self.hp_voff[i + 1]].tolist()),
                tuple(self.hp_e[self.hp_eoff[i]:self.hp_eoff[i + 1]].tolist()),
            )
            for i in range(len(self))
        ]

    def g_paths(self) -> list[Path]:
        if self.gv is None:
            expand_paths(self)
        return [
            Path(
                tuple(self.gv[self.gvoff[i]:self.gvoff[i + 1]].tolist()),
                tuple(self.ge[self.geoff[i]:self.geoff[i + 1]].tolist()),
            )
            for i in range(len(self))
        ]

    def h_vertices(self) -> np.ndarray:
        return self.hp_v

    @property
    def path_length(self) -> int | None:
        """Common length (in ``G``) of the expanded paths."""
        if len(self) == 0:
            return None
        if self.gv is None:
            expand_paths(self)
        return int(self.geoff[1] - self.geoff[0])


def find_ap_set(h: HGraph, debug: bool = False, trace: bool = False) -> PathSet:
    """Maximal set of vertex-disjoint augmenting paths of ``h``.

    With ``debug`` the search counts violations of its structural invariants
    (see :data:`DEBUG_COUNTERS`) and the halting properties are checked;
    ``debug_counts`` on the result holds the tallies.
    """
    Q = _allocate(h, debug, trace)
    S = h.store.arr
    find_ap_set_kernel(Q, S)
    k = int(Q.sc[_NPATH])
    ps = PathSet(
        h=h,
        hp_v=Q.hp_v[:Q.sc[_HV]].copy(),
        hp_e=Q.hp_e[:Q.sc[_HE]].copy(),
        hp_voff=Q.hp_voff[:k + 1].copy(),
        hp_eoff=Q.hp_eoff[:k + 1].copy(),
        stats={"grows": int(Q.sc[_NGROW]), "blossoms": int(Q.sc[_NBLOSSOM])},
    )
    if trace:
        kinds = ("grow", "blossom", "augment")
        for t in range(int(Q.sc[_NTRACE])):
            node = int(Q.tr_node[t])
            ps.trace.append({
                "step": kinds[Q.tr_kind[t]],
                "time": int(Q.tr_time[t]),
                "edge": int(Q.tr_edge[t]),
                "blossom": node if node >= 0 else None,
            })
    if debug:
        counts = {name: int(Q.dbg[i]) for i, name in enumerate(DEBUG_COUNTERS)}
        counts.update(_halt_checks(h, Q))
        ps.debug_counts = counts
    return ps


@njit(cache=True)
def _all_bases(Q):
    n = len(Q.status)
    out = np.empty(n, dtype=np.int64)
    for v in range(n):
        out[v] = _find(Q, v)
    return out


def _halt_checks(h: HGraph, Q: Phase2Arrays) -> dict:
    """Properties of the halted search, over the alive part of ``H``."""
    n = h.n
    reps = h.vertices()
    base = _all_bases(Q)
    alive = ~Q.dead
    out = {}
    free = reps[(Q.hmate[reps] == -1) & alive[reps]]
    out["free_not_outer"] = int(np.count_nonzero(Q.status[free] != OUTER))
    owner = np.repeat(np.arange(n), np.diff(h.adj_start))
    other = h.adj_nbr
    unmatched = Q.mate[h.adj_gself] != h.adj_gother
    live = alive[owner] & alive[other] & unmatched
    sel = live & (Q.status[owner] == OUTER)
    bad = sel & (Q.status[other] != INNER) & (base[owner] != base[other])
    out["outer_edge_unresolved"] = int(np.count_nonzero(bad))
    # both-ends-scanned edges must have equal bases
    order = np.argsort(h.adj_eid, kind="stable")
    a, b = order[0::2], order[1::2]
    both = Q.slot_scanned[a] & Q.slot_scanned[b] & live[a]
    out["scanned_both_ends_split"] = int(np.count_nonzero(both & (base[owner[a]] != base[owner[b]])))
    return out


def expand_paths(ps: PathSet) -> PathSet:
    """Fill in the ``G`` paths of ``ps`` by expanding every contracted
    H-vertex through its blossom."""
    h = ps.h
    k = len(ps)
    gv = np.empty(h.n + 1, dtype=np.int64)
    ge = np.empty(h.n + 1, dtype=np.int64)
    gvoff = np.zeros(k + 1, dtype=np.int64)
    geoff = np.zeros(k + 1, dtype=np.int64)
    ok = expand_kernel(
        h.store.arr, h.g.eu, h.g.ev, h.mate, h.label, h.hnode,
        ps.hp_v, ps.hp_e, ps.hp_voff, ps.hp_eoff, k, gv, ge, gvoff, geoff,
    )
    if not ok:
        raise InvariantError("path expansion left a blossom it could not traverse")
    ps.gv, ps.ge = gv[:gvoff[k]], ge[:geoff[k]]
    ps.gvoff, ps.geoff = gvoff, geoff
    return ps


def apply_paths(mate: np.ndarray, ps: PathSet) -> None:
    """Flip ``mate`` in place along every expanded path of ``ps``."""
    if ps.gv is None:
        expand_paths(ps)
    apply_kernel(mate, ps.gv, ps.gvoff, len(ps))
