"""The phase loop: search, build ``H``, collect disjoint saps, augment."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Matching, validate_matching
from .oracle import InvariantError, check_certificate, check_duals, certificate_violations
from .phase1 import EdmondsSearch, build_H
from .phase2 import apply_paths, expand_paths, find_ap_set

__all__ = ["PhaseStats", "SolveStats", "maximum_matching", "phase_bound", "certify"]


def phase_bound(n: int) -> int:
    """Upper bound on the number of phases: ``2 * ceil(sqrt(n)) + 2``."""
    root = math.isqrt(n - 1) + 1 if n > 0 else 0
    return 2 * root + 2


@dataclass
class PhaseStats:
    delta_final: int | None
    num_paths: int
    path_length: int | None
    seconds: float
    grows: int = 0
    blossoms: int = 0


@dataclass
class SolveStats:
    """Per-phase record of a solve.  The last phase is the one whose search
    found no augmenting path (``delta_final`` is then ``None``)."""

    n: int
    m: int
    per_phase: list[PhaseStats] = field(default_factory=list)
    matched: int = 0
    seconds: float = 0.0
    trace: list[dict] = field(default_factory=list)

    @property
    def phases(self) -> int:
        return len(self.per_phase)

    @property
    def path_lengths(self) -> list[int]:
        return [p.path_length for p in self.per_phase if p.path_length is not None]

    def summary(self) -> str:
        lens = ",".join(map(str, self.path_lengths)) or "-"
        return f"phases={self.phases} matched={self.matched} time={self.seconds:.4f}s lengths={lens}"


def maximum_matching(
    g: Graph,
    matching: Matching | None = None,
    debug: bool = False,
    trace: bool = False,
) -> tuple[Matching, SolveStats]:
    """Maximum cardinality matching of ``g``, optionally warm-started.

    ``debug`` turns on every runtime check (dual feasibility after each
    search step and each augment, the DFS invariants, certificates at the
    end) and raises :class:`InvariantError` on the first failure.
    ``trace`` records one dict per search step in ``stats.trace``.
    """
    m = Matching.empty(g.n) if matching is None else matching.copy()
    if not validate_matching(g, m):
        raise ValueError("starting matching is not a valid matching of the graph")
    stats = SolveStats(n=g.n, m=g.m)
    bound = phase_bound(g.n)
    start = time.perf_counter()
    while True:
        t0 = time.perf_counter()
        search = EdmondsSearch(g, m, trace=trace)
        outcome = search.run(debug=debug)
        phase = stats.phases + 1
        if trace:
            stats.trace.extend({"phase": phase, "stage": 1, **r} for r in search.trace_records())
        if outcome.optimal:
            if debug:
                problems = certificate_violations(g, outcome.certificate())
                if problems:
                    raise InvariantError(f"optimality certificate rejected: {problems[0]}")
            stats.per_phase.append(PhaseStats(None, 0, None, time.perf_counter() - t0))
            break
        h = build_H(g, m, outcome)
        ps = find_ap_set(h, debug=debug, trace=trace)
        expand_paths(ps)
        if trace:
            stats.trace.extend({"phase": phase, "stage": 2, **r} for r in ps.trace)
        if debug:
            _check_phase(g, m, outcome, ps)
        mate = m.mate.copy()
        apply_paths(mate, ps)
        new = Matching(mate)
        if debug:
            if new.size != m.size + len(ps):
                raise InvariantError("augmenting did not grow the matching by one per path")
            # under this phase's weights every newly matched edge is tight
            cert = search.certificate(outcome.delta_final)
            problems = check_duals(g, cert, tight_mate=mate)
            if problems:
                raise InvariantError(f"after augmenting: {problems[0]}")
            lens = stats.path_lengths
            if lens and ps.path_length <= lens[-1]:
                raise InvariantError("sap length did not increase between phases")
        m = new
        stats.per_phase.append(PhaseStats(
            outcome.delta_final, len(ps), ps.path_length, time.perf_counter() - t0,
            ps.stats["grows"], ps.stats["blossoms"],
        ))
        if stats.phases > bound:
            raise InvariantError(f"phase count {stats.phases} exceeds the bound {bound}")
    stats.matched = m.size
    stats.seconds = time.perf_counter() - start
    return m, stats


def _check_phase(g: Graph, m: Matching, outcome, ps) -> None:
    bad = {k: v for k, v in ps.debug_counts.items() if v}
    if bad:
        raise InvariantError(f"path-preserving search invariants violated: {bad}")
    if len(ps) == 0:
        raise InvariantError("search found an augmenting path but H yielded none")
    want = 2 * outcome.delta_final - 1
    seen = np.zeros(g.n, dtype=bool)
    for p in ps.g_paths():
        if not (p.follows(g) and p.is_augmenting(m)):
            raise InvariantError(f"expanded path {p.vertices} is not augmenting")
        if len(p) != want:
            raise InvariantError(f"expanded path has length {len(p)}, expected {want}")
        idx = np.asarray(p.vertices)
        if seen[idx].any():
            raise InvariantError("expanded paths share a vertex")
        seen[idx] = True


def certify(g: Graph, m: Matching) -> bool:
    """Run one search from ``m`` and check its optimality certificate."""
    outcome = EdmondsSearch(g, m).run()
    return outcome.optimal and check_certificate(g, outcome.certificate())
