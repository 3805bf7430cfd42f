"""Brute-force ground truth and dual-certificate checking.

Nothing here shares code with the solver beyond :mod:`sapmatch.graph`; the
brute-force routines are exponential and guarded by hard size limits.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, Matching, Path

__all__ = [
    "OracleSizeError",
    "CertificateError",
    "InvariantError",
    "brute_max_matching",
    "brute_saps",
    "verify_sap_set_maximal",
    "h_augmenting_paths",
    "contract_path",
    "Certificate",
    "check_certificate",
    "certificate_violations",
    "check_duals",
    "check_search_state",
]

MAX_MATCHING_N = 20
MAX_SAP_N = 14


class OracleSizeError(ValueError):
    """Instance is beyond the brute-force size guard."""


class CertificateError(ValueError):
    """Structurally malformed blossom family (not laminar, bad parents)."""


class InvariantError(AssertionError):
    """A debug-mode invariant check failed."""


def _adj_masks(g: Graph) -> list[int]:
    adj = [0] * g.n
    for u, v in zip(g.eu.tolist(), g.ev.tolist()):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


# ---------------------------------------------------------------------------
# maximum matching


def brute_max_matching(g: Graph) -> tuple[int, Matching]:
    """Exact maximum matching by memoised branching on the lowest vertex.

    Returns the size and one witness matching.
    """
    if g.n > MAX_MATCHING_N:
        raise OracleSizeError(f"brute_max_matching is limited to n <= {MAX_MATCHING_N}, got {g.n}")
    adj = _adj_masks(g)

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple[tuple[int, int], ...]]:
        # drop vertices with no neighbour left; they can never be matched
        while mask:
            v = (mask & -mask).bit_length() - 1
            if adj[v] & mask:
                break
            mask &= ~(1 << v)
        if not mask:
            return 0, ()
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        top, pairs = best(rest)
        bound = bin(mask).count("1") // 2
        nb = adj[v] & rest
        while nb and top < bound:
            u = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            k, p = best(rest & ~(1 << u))
            if k + 1 > top:
                top, pairs = k + 1, ((v, u),) + p
        return top, pairs

    size, pairs = best((1 << g.n) - 1)
    return size, Matching.from_pairs(g.n, pairs)


# ---------------------------------------------------------------------------
# shortest augmenting paths


def _alternating_paths(adj_list, mate, starts, is_end, limit):
    """All simple alternating paths of exactly ``limit`` edges from a vertex
    in ``starts`` to a vertex accepted by ``is_end``, first edge unmatched."""
    found = []
    for s in starts:
        path = [s]
        on = {s}

        def dfs(x, want_matched):
            if len(path) - 1 == limit:
                if is_end(x) and x != s:
                    found.append(tuple(path))
                return
            if want_matched:
                y = mate[x]
                if y < 0 or y in on:
                    return
                nxt = [y]
            else:
                nxt = [y for y in adj_list[x] if y not in on and mate[x] != y]
            for y in nxt:
                path.append(y)
                on.add(y)
                dfs(y, not want_matched)
                on.discard(y)
                path.pop()

        dfs(s, False)
    return found


def _canonical(seq: Sequence[int]) -> tuple[int, ...]:
    t = tuple(seq)
    r = t[::-1]
    return min(t, r)


def brute_saps(g: Graph, m: Matching) -> tuple[int, set[tuple[int, ...]]] | None:
    """Length and complete set of shortest augmenting paths, or ``None`` when
    ``m`` is maximum.

    Paths are vertex sequences, each listed once in the orientation that is
    lexicographically smaller.  Exhaustive DFS with iterative deepening over
    odd lengths.
    """
    if g.n > MAX_SAP_N:
        raise OracleSizeError(f"brute_saps is limited to n <= {MAX_SAP_N}, got {g.n}")
    mate = m.mate.tolist()
    free = [v for v in range(g.n) if mate[v] < 0]
    if len(free) < 2:
        return None
    adj_list = [sorted({u for u, _ in g.neighbors(v)}) for v in range(g.n)]
    for length in range(1, g.n, 2):
        paths = _alternating_paths(adj_list, mate, free, lambda x: mate[x] < 0, length)
        if paths:
            return length, {_canonical(p) for p in paths}
    return None


def verify_sap_set_maximal(g: Graph, m: Matching, paths: Iterable[Path]) -> bool:
    """True iff ``paths`` are pairwise disjoint saps of ``(g, m)`` and every
    other sap meets one of them."""
    paths = list(paths)
    res = brute_saps(g, m)
    if res is None:
        return not paths
    length, saps = res
    used: set[int] = set()
    for p in paths:
        if not (p.follows(g) and p.is_augmenting(m)) or len(p) != length:
            return False
        if used & set(p.vertices):
            return False
        used |= set(p.vertices)
    if not paths:
        return False
    return all(used & set(s) for s in saps)


def contract_path(vertices: Sequence[int], label: np.ndarray) -> tuple[int, ...]:
    """Image of a ``G`` vertex sequence in ``H``: map through ``label`` and
    merge runs of the same H-vertex."""
    out: list[int] = []
    for v in vertices:
        h = int(label[v])
        if not out or out[-1] != h:
            out.append(h)
    return tuple(out)


def h_augmenting_paths(h, max_vertices: int = MAX_SAP_N) -> set[tuple[int, ...]]:
    """Every augmenting path of the contracted graph ``h`` (canonical
    orientation), by exhaustive search."""
    verts = h.vertices().tolist()
    if len(verts) > max_vertices:
        raise OracleSizeError(f"H has {len(verts)} vertices, limit {max_vertices}")
    adj = {v: set() for v in verts}
    hmate = {v: -1 for v in verts}
    for a, b, e in h.h_edges():
        if h.is_matched_edge(e):
            hmate[a], hmate[b] = b, a
        else:
            adj[a].add(b)
            adj[b].add(a)
    free = [v for v in verts if hmate[v] < 0]
    out: set[tuple[int, ...]] = set()
    for s in free:
        path, on = [s], {s}

        def dfs(x):
            for y in adj[x]:
                if y in on:
                    continue
                if hmate[y] < 0:
                    out.add(_canonical(path + [y]))
                    continue
                z = hmate[y]
                if z in on:
                    continue
                path.extend((y, z))
                on.update((y, z))
                dfs(z)
                on.difference_update((y, z))
                del path[-2:]

        dfs(s)
    return out


# ---------------------------------------------------------------------------
# dual certificates


@dataclass
class Certificate:
    """Vertex duals ``y`` and a laminar blossom family with duals ``z``.

    Blossom ``i`` has parent index ``blossom_parent[i]`` (``-1`` if maximal)
    and base ``blossom_base[i]``; ``vertex_blossom[v]`` is the innermost
    blossom containing ``v`` (``-1`` if none).  ``mate`` is the matching the
    certificate speaks about.
    """

    y: np.ndarray
    blossom_parent: np.ndarray
    blossom_base: np.ndarray
    z: np.ndarray
    vertex_blossom: np.ndarray
    mate: np.ndarray

    @property
    def num_blossoms(self) -> int:
        return len(self.z)

    @classmethod
    def from_sets(
        cls,
        y: Sequence[int],
        blossoms: Sequence[tuple[Iterable[int], int, int]],
        mate: Sequence[int],
    ) -> Certificate:
        """Build from explicit ``(vertex set, base, z)`` triples.

        Raises :class:`CertificateError` if the sets are not laminar.
        """
        sets = [frozenset(s) for s, _, _ in blossoms]
        k = len(sets)
        for i, j in combinations(range(k), 2):
            a, b = sets[i], sets[j]
            if a & b and not (a <= b or b <= a):
                raise CertificateError(f"blossoms {i} and {j} overlap without nesting")
            if a == b:
                raise CertificateError(f"blossoms {i} and {j} are the same set")
        parent = np.full(k, -1, dtype=np.int64)
        for i in range(k):
            sup = [j for j in range(k) if j != i and sets[i] < sets[j]]
            if sup:
                parent[i] = min(sup, key=lambda j: len(sets[j]))
        n = len(y)
        inner = np.full(n, -1, dtype=np.int64)
        for v in range(n):
            own = [i for i in range(k) if v in sets[i]]
            if own:
                inner[v] = min(own, key=lambda i: len(sets[i]))
        return cls(
            y=np.asarray(y, dtype=np.int64),
            blossom_parent=parent,
            blossom_base=np.array([b for _, b, _ in blossoms], dtype=np.int64),
            z=np.array([z for _, _, z in blossoms], dtype=np.int64),
            vertex_blossom=inner,
            mate=np.asarray(mate, dtype=np.int64),
        )


class _Forest:
    """Ancestor queries over the blossom forest by binary lifting.

    Index ``k`` is a virtual root above every maximal blossom; ``up[j][i]``
    is the ``2**j``-th ancestor of ``i`` (sticking at the root).
    """

    def __init__(self, cert: Certificate):
        k = cert.num_blossoms
        parent = cert.blossom_parent
        if np.any((parent < -1) | (parent >= k)):
            raise CertificateError("blossom parent index out of range")
        self.k = k
        self.parent = np.append(np.where(parent < 0, k, parent), k).astype(np.int64)
        up = [self.parent]
        limit = int(k).bit_length() + 1
        while np.any(up[-1] != k):
            if len(up) > limit:
                raise CertificateError("blossom parent links contain a cycle")
            up.append(up[-1][up[-1]])
        self.up = up
        # depth: maximal blossoms at 1, the virtual root at 0
        cur = np.arange(k + 1, dtype=np.int64)
        depth = np.zeros(k + 1, dtype=np.int64)
        for j in reversed(range(len(up))):
            nxt = up[j][cur]
            move = nxt != k
            depth[move] += 1 << j
            cur[move] = nxt[move]
        depth[:k] += 1
        self.depth = depth
        # zacc[i]: z summed over i and all its ancestors
        acc = np.append(cert.z, 0).astype(np.int64)
        for j in range(len(up) - 1):
            acc = acc + acc[up[j]]
        self.zacc = acc

    def node_of(self, inner: np.ndarray) -> np.ndarray:
        return np.where(inner < 0, self.k, inner)

    def lift(self, a: np.ndarray, d: np.ndarray | int) -> np.ndarray:
        """Ancestor of each ``a`` at depth ``d`` (or ``a`` itself if shallower)."""
        a = np.asarray(a, dtype=np.int64).copy()
        diff = np.maximum(self.depth[a] - d, 0)
        for j in range(len(self.up)):
            bit = (diff >> j) & 1 == 1
            a[bit] = self.up[j][a[bit]]
        return a

    def lca(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d = np.minimum(self.depth[a], self.depth[b])
        a, b = self.lift(a, d), self.lift(b, d)
        for j in reversed(range(len(self.up))):
            na, nb = self.up[j][a], self.up[j][b]
            move = na != nb
            a[move], b[move] = na[move], nb[move]
        return np.where(a == b, a, self.parent[a])


def _edge_weights(g: Graph, mate: np.ndarray) -> np.ndarray:
    return np.where(mate[g.eu] == g.ev, 2, 0)


def _dual_violations(g: Graph, cert: Certificate, forest: _Forest, tight_mate=None) -> list[str]:
    out = []
    if np.any(cert.z < 0):
        out.append(f"negative z on blossom {int(np.flatnonzero(cert.z < 0)[0])}")
    if np.any(cert.z % 2 != 0):
        out.append(f"odd z on blossom {int(np.flatnonzero(cert.z % 2)[0])}")
    if g.m == 0:
        return out
    w = _edge_weights(g, cert.mate)
    a = forest.node_of(cert.vertex_blossom[g.eu])
    b = forest.node_of(cert.vertex_blossom[g.ev])
    lhs = cert.y[g.eu] + cert.y[g.ev] + forest.zacc[forest.lca(a, b)]
    under = np.flatnonzero(lhs < w)
    if len(under):
        e = int(under[0])
        out.append(f"edge {e} {g.endpoints(e)} not dominated ({int(lhs[e])} < {int(w[e])})")
    tm = cert.mate if tight_mate is None else tight_mate
    loose = np.flatnonzero((tm[g.eu] == g.ev) & (lhs != w))
    if len(loose):
        e = int(loose[0])
        out.append(f"matched edge {e} {g.endpoints(e)} not tight ({int(lhs[e])} != {int(w[e])})")
    return out


def _structure_violations(g: Graph, cert: Certificate, forest: _Forest) -> list[str]:
    out = []
    k, n = forest.k, g.n
    if k == 0:
        return out
    mate = cert.mate
    depth = forest.depth
    # sizes and matched-inside counts, accumulated bottom-up
    size = np.zeros(k + 1, dtype=np.int64)
    inner_nodes = forest.node_of(cert.vertex_blossom)
    np.add.at(size, inner_nodes, 1)
    inside = np.zeros(k + 1, dtype=np.int64)
    matched = np.flatnonzero(mate > np.arange(n))
    if len(matched):
        l = forest.lca(inner_nodes[matched], inner_nodes[mate[matched]])
        np.add.at(inside, l, 2)
    # one level at a time, deepest first
    order = np.argsort(-depth[:k], kind="stable")
    cuts = np.flatnonzero(np.diff(depth[order])) + 1
    for level in np.split(order, cuts):
        np.add.at(size, forest.parent[level], size[level])
        np.add.at(inside, forest.parent[level], inside[level])
    size, inside = size[:k], inside[:k]
    bad = np.flatnonzero(size % 2 == 0)
    if len(bad):
        out.append(f"blossom {int(bad[0])} has even size {int(size[bad[0]])}")
    bad = np.flatnonzero(size < 3)
    if len(bad):
        out.append(f"blossom {int(bad[0])} has fewer than 3 vertices")
    bad = np.flatnonzero(inside != size - 1)
    if len(bad):
        out.append(f"blossom {int(bad[0])} is not filled by matched edges")
    base = cert.blossom_base
    if np.any((base < 0) | (base >= n)):
        out.append("blossom base out of range")
        return out
    ids = np.arange(k, dtype=np.int64)
    at = forest.lift(forest.node_of(cert.vertex_blossom[base]), depth[:k])
    bad = np.flatnonzero(at != ids)
    if len(bad):
        out.append(f"base {int(base[bad[0]])} lies outside blossom {int(bad[0])}")
    else:
        mb = mate[base]
        has = mb >= 0
        if has.any():
            at = forest.lift(forest.node_of(cert.vertex_blossom[mb[has]]), depth[:k][has])
            bad = np.flatnonzero(at == ids[has])
            if len(bad):
                out.append(f"base of blossom {int(ids[has][bad[0]])} is matched inside it")
    return out


def certificate_violations(g: Graph, cert: Certificate) -> list[str]:
    """Human-readable list of everything wrong with ``cert`` (empty if valid).

    Raises :class:`CertificateError` if the blossom family is malformed.
    """
    forest = _Forest(cert)
    out = _structure_violations(g, cert, forest) + _dual_violations(g, cert, forest)
    free = np.flatnonzero(cert.mate < 0)
    if len(free) >= 2:
        top2 = np.sort(cert.y[free])[-2:]
        if int(top2.sum()) >= 2 - g.n:
            out.append(
                f"free-vertex duals too large to rule out an augmenting path "
                f"({int(top2.sum())} >= {2 - g.n})"
            )
    return out


def check_certificate(g: Graph, cert: Certificate) -> bool:
    """True iff ``cert`` proves ``cert.mate`` is a maximum matching of ``g``.

    Checks domination of every edge, tightness of matched edges, ``z`` even
    and nonnegative, blossom bases and fullness, and that no two free
    vertices have duals large enough to carry an augmenting path between
    them: along an augmenting path with ``k`` matched edges the free-end
    duals satisfy ``y(f1) + y(f2) >= -2k >= 2 - n``.
    """
    return not certificate_violations(g, cert)


def check_duals(g: Graph, cert: Certificate, tight_mate: np.ndarray | None = None) -> list[str]:
    """Feasibility only: domination, matched tightness and ``z`` sign/parity.

    Weights come from ``cert.mate``.  ``tight_mate`` names a different
    matching whose edges must be tight under those weights, as after an
    augment along tight edges.
    """
    return _dual_violations(g, cert, _Forest(cert), tight_mate)


def check_search_state(search) -> None:
    """Debug-mode checks on a live Phase-1 search; raises
    :class:`InvariantError` on the first failure."""
    from .phase1 import UNREACHED

    g, n = search.g, search.n
    d = search.delta
    if d > n // 2:
        raise InvariantError(f"delta {d} exceeds n // 2 = {n // 2}")
    cert = search.certificate(d)
    problems = check_duals(g, cert)
    if problems:
        raise InvariantError(f"at delta {d}: {problems[0]}")
    y = cert.y
    status = search.status
    if np.any(y[status == UNREACHED] != 1):
        raise InvariantError("vertex outside the search forest has y != 1")
    in_s = y[status != UNREACHED]
    if len(in_s) and len(np.unique(in_s % 2)) > 1:
        raise InvariantError(f"duals in the search forest have mixed parity at delta {d}")
    forest = _Forest(cert)
    ids = np.asarray(search.tree_edges(), dtype=np.int64)
    if len(ids):
        u, v = g.eu[ids], g.ev[ids]
        a = forest.node_of(cert.vertex_blossom[u])
        b = forest.node_of(cert.vertex_blossom[v])
        lhs = y[u] + y[v] + forest.zacc[forest.lca(a, b)]
        w = _edge_weights(g, cert.mate)[ids]
        loose = np.flatnonzero(lhs != w)
        if len(loose):
            e = int(ids[loose[0]])
            raise InvariantError(f"search edge {e} {g.endpoints(e)} is not tight at delta {d}")
