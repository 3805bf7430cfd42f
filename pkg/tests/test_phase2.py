import numpy as np
import pytest

from sapmatch import Matching, build_graph, build_H, run_search
from sapmatch.oracle import brute_saps, verify_sap_set_maximal
from sapmatch.phase2 import DEBUG_COUNTERS, apply_paths, expand_paths, find_ap_set
from sapmatch.generators import nested_blossom_gadget

from conftest import path_graph, random_graph, random_matching


def _phase(g, m, debug=True):
    out = run_search(g, m)
    assert not out.optimal
    ps = find_ap_set(build_H(g, m, out), debug=debug)
    expand_paths(ps)
    return out, ps


def test_two_disjoint_edges_give_two_paths():
    g = build_graph(4, [(0, 1), (2, 3)])
    _, ps = _phase(g, Matching.empty(4))
    assert len(ps) == 2
    assert sorted(p.vertices for p in ps.g_paths()) in ([(0, 1), (2, 3)], [(0, 1), (3, 2)],
                                                         [(1, 0), (2, 3)], [(1, 0), (3, 2)])


def test_p4_single_path():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    _, ps = _phase(g, m)
    (p,) = ps.g_paths()
    assert set(p.ends) == {0, 3}
    assert ps.path_length == 3
    assert all(v == 0 for v in ps.debug_counts.values())


def test_path_through_positive_blossom():
    g = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])
    m = Matching.from_pairs(6, [(1, 2), (3, 4)])
    _, ps = _phase(g, m)
    (hp,) = ps.h_paths()
    assert len(hp) == 3  # the triangle is one H-vertex
    (p,) = ps.g_paths()
    assert p.vertices in ((0, 1, 2, 3, 4, 5), (5, 4, 3, 2, 1, 0))
    assert p.is_augmenting(m)


def test_apply_paths_grows_matching():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    _, ps = _phase(g, m)
    mate = m.mate.copy()
    apply_paths(mate, ps)
    assert Matching(mate) == Matching.from_pairs(4, [(0, 1), (2, 3)])


def test_debug_counter_names():
    assert set(DEBUG_COUNTERS) == {
        "invariant_I", "timestamp_vs_ancestry", "cross_tree_outer",
        "edge_scanned_thrice", "containment", "broken_ancestry_walk",
    }


@pytest.mark.parametrize("depth", [1, 2, 3, 5])
def test_gadget_paths(depth):
    g, m = nested_blossom_gadget(depth, seed=depth, with_matching=True)
    out, ps = _phase(g, m)
    assert all(v == 0 for v in ps.debug_counts.values())
    paths = ps.g_paths()
    assert all(p.is_augmenting(m) and len(p) == out.sap_length for p in paths)
    if g.n <= 14:
        assert out.sap_length == brute_saps(g, m)[0]
        assert verify_sap_set_maximal(g, m, paths)


def test_random_phases_are_maximal_sap_sets(rng):
    done = 0
    while done < 300:
        g = random_graph(rng, n_max=12, m_max=24, n_min=2)
        m = random_matching(g, rng)
        if brute_saps(g, m) is None:
            continue
        out, ps = _phase(g, m)
        assert all(v == 0 for v in ps.debug_counts.values()), ps.debug_counts
        paths = ps.g_paths()
        assert all(p.follows(g) and p.is_augmenting(m) for p in paths)
        assert {len(p) for p in paths} == {out.sap_length}
        assert verify_sap_set_maximal(g, m, paths)
        done += 1


def test_trace_records_steps():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    out = run_search(g, m)
    ps = find_ap_set(build_H(g, m, out), trace=True)
    kinds = [r["step"] for r in ps.trace]
    assert kinds[-1] == "augment"
    assert "grow" in kinds
