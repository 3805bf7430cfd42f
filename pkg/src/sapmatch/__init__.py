"""Maximum cardinality matching in general graphs, phase by phase.

Each phase runs one search of a simplified weighted-matching algorithm to
find the length of a shortest augmenting path and the graph ``H`` of tight
edges, then a path-preserving depth-first search on ``H`` to pick a maximal
set of vertex-disjoint shortest augmenting paths.
"""
from .blossom import BaseTracker, BlossomError, BlossomNode, BlossomStore
from .driver import PhaseStats, SolveStats, certify, maximum_matching, phase_bound
from .graph import (
    Graph,
    GraphError,
    Matching,
    NotAugmentingError,
    Path,
    augment_along,
    build_graph,
    validate_matching,
)
from .oracle import (
    Certificate,
    CertificateError,
    InvariantError,
    OracleSizeError,
    brute_max_matching,
    brute_saps,
    check_certificate,
    verify_sap_set_maximal,
)
from .phase1 import EdmondsSearch, HGraph, SearchOutcome, build_H, run_search
from .phase2 import PathSet, expand_paths, find_ap_set

__version__ = "0.1.0"
