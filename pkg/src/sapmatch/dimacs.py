"""DIMACS-style edge files and solution files.

Instances::

    c comment
    p edge <n> <m>
    e <u> <v>          (1-based, m lines)

Solutions::

    s <size>
    m <u> <v>          (1-based, u < v)
    c phases=<k> ...
"""
from __future__ import annotations

import numpy as np

from .graph import Graph, Matching, build_graph

__all__ = ["DimacsError", "parse_dimacs", "emit_dimacs", "emit_solution", "parse_solution"]


class DimacsError(ValueError):
    """Malformed instance or solution text; ``line`` is 1-based (0 if the
    problem is not tied to one line)."""

    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


def _ints(parts: list[str], lineno: int) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise DimacsError(lineno, f"expected integers, got {' '.join(parts)!r}") from None


def parse_dimacs(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError(lineno, "second problem line")
            if len(parts) != 4 or parts[1] != "edge":
                raise DimacsError(lineno, "problem line must read 'p edge <n> <m>'")
            n, m = _ints(parts[2:], lineno)
            if n < 0 or m < 0:
                raise DimacsError(lineno, "vertex and edge counts must be nonnegative")
        elif tag == "e":
            if n is None:
                raise DimacsError(lineno, "edge line before the problem line")
            if len(parts) != 3:
                raise DimacsError(lineno, "edge line must read 'e <u> <v>'")
            u, v = _ints(parts[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(lineno, f"vertex id out of range [1, {n}]")
            if u == v:
                raise DimacsError(lineno, f"self-loop at vertex {u}")
            edges.append((u - 1, v - 1))
        else:
            raise DimacsError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise DimacsError(0, "missing problem line 'p edge <n> <m>'")
    if len(edges) != m:
        raise DimacsError(0, f"header promises {m} edges, found {len(edges)}")
    return build_graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def emit_dimacs(g: Graph, comments: list[str] | None = None) -> str:
    lines = [f"c {c}" for c in comments or []]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in zip(g.eu.tolist(), g.ev.tolist()))
    return "\n".join(lines) + "\n"


def emit_solution(m: Matching, stats=None, per_phase: bool = False) -> str:
    """Solution text; ``stats`` (a ``SolveStats``) adds summary comments and,
    with ``per_phase``, one comment per phase."""
    lines = [f"s {m.size}"]
    lines.extend(f"m {u + 1} {v + 1}" for u, v in m.pairs())
    if stats is not None:
        lens = ",".join(map(str, stats.path_lengths)) or "-"
        lines.append(f"c phases={stats.phases} time={stats.seconds:.6f} lengths={lens}")
        if per_phase:
            for i, p in enumerate(stats.per_phase, 1):
                lines.append(
                    f"c phase={i} delta={p.delta_final if p.delta_final is not None else '-'} "
                    f"paths={p.num_paths} length={p.path_length or '-'} "
                    f"grows={p.grows} blossoms={p.blossoms} seconds={p.seconds:.6f}"
                )
    return "\n".join(lines) + "\n"


def parse_solution(text: str, n: int) -> Matching:
    """Read a solution back into a :class:`Matching` on ``n`` vertices."""
    size = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s" and len(parts) == 2:
            size = _ints(parts[1:], lineno)[0]
        elif parts[0] == "m" and len(parts) == 3:
            u, v = _ints(parts[1:], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(lineno, f"vertex id out of range [1, {n}]")
            pairs.append((u - 1, v - 1))
        else:
            raise DimacsError(lineno, f"unexpected line {raw!r}")
    if size is None:
        raise DimacsError(0, "missing size line 's <size>'")
    if size != len(pairs):
        raise DimacsError(0, f"size line says {size}, found {len(pairs)} pairs")
    try:
        return Matching.from_pairs(n, pairs)
    except ValueError as ex:
        raise DimacsError(0, str(ex)) from None
