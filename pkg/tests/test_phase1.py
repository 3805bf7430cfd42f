import numpy as np
import pytest

from sapmatch import Matching, build_graph, build_H, run_search
from sapmatch.oracle import brute_saps, check_search_state, check_certificate
from sapmatch.phase1 import EdmondsSearch

from conftest import cycle, path_graph, random_graph, random_matching


def test_single_edge_augments_at_delta_one():
    out = run_search(build_graph(2, [(0, 1)]))
    assert not out.optimal
    assert out.delta_final == 1
    assert out.sap_length == 1
    assert out.y.tolist() == [0, 0]
    assert out.positive_blossoms == []


def test_single_vertex_is_optimal():
    out = run_search(build_graph(1, []))
    assert out.optimal
    assert check_certificate(build_graph(1, []), out.certificate())


def test_no_edges_is_optimal():
    g = build_graph(4, [])
    out = run_search(g)
    assert out.optimal
    assert check_certificate(g, out.certificate())


def test_perfect_matching_is_optimal():
    g = path_graph(4)
    out = run_search(g, Matching.from_pairs(4, [(0, 1), (2, 3)]))
    assert out.optimal


def test_p4_middle_matched_gives_length_three():
    out = run_search(path_graph(4), Matching.from_pairs(4, [(1, 2)]))
    assert (out.delta_final, out.sap_length) == (2, 3)
    # free vertices drop to 1 - 2; 1 and 2 join at delta 2 still at 1, so
    # the matched edge keeps y-sum 2
    assert out.y.tolist() == [-1, 1, 1, -1]


def test_initial_buckets():
    # P4 with 1-2 matched: 0 and 3 are free and outer at delta 0; the edges
    # to the unreached matched vertices land in L(0 + 1 + 1)
    s = EdmondsSearch(path_graph(4), Matching.from_pairs(4, [(1, 2)]))
    assert s.delta == 0
    assert sorted(s.bucket(2)) == [(0, 0), (2, 3)]
    assert s.bucket(0) == [] and s.bucket(1) == []


def test_free_free_edge_bucket():
    # two free outer ends: index delta + (1 + 1) / 2 = 1
    s = EdmondsSearch(build_graph(2, [(0, 1)]))
    assert len(s.bucket(1)) == 2


def test_events_beyond_half_n_are_dropped():
    # n = 3: the grow event at 2 exceeds floor(3/2) = 1 and never enters L
    g = cycle(3)
    s = EdmondsSearch(g, Matching.from_pairs(3, [(1, 2)]))
    assert s.max_delta == 1
    assert s.bucket(1) == []
    assert s.run().optimal


def test_padded_triangle_trace():
    # triangle 0,1,2 with 1-2 matched, plus an isolated vertex so that the
    # grow at delta 2 is admissible
    g = build_graph(4, [(0, 1), (1, 2), (2, 0)])
    s = EdmondsSearch(g, Matching.from_pairs(4, [(1, 2)]), trace=True)
    out = s.run(debug=True)
    steps = [(r["step"], r["delta"]) for r in s.trace_records()]
    assert steps[0] == ("grow", 2)
    assert ("blossom", 2) in steps
    # vertex 0 is the only reachable free vertex
    assert out.optimal


def test_triangle_with_tail_has_positive_blossom():
    # triangle 0,1,2 (1-2 matched) hung off a free vertex 0; edge 2-3 with
    # 3-4 matched, 4-5, 5 free: the sap 0-1-2-3-4-5 goes through the blossom
    g = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])
    m = Matching.from_pairs(6, [(1, 2), (3, 4)])
    out = run_search(g, m, debug=True)
    assert out.sap_length == brute_saps(g, m)[0] == 5
    assert len(out.positive_blossoms) == 1
    b = out.positive_blossoms[0]
    assert out.search.store.node(b).base == 0
    assert out.z[b] > 0


def test_step_interface_and_validation():
    g = path_graph(4)
    s = EdmondsSearch(g, Matching.from_pairs(4, [(1, 2)]))
    with pytest.raises(ValueError):
        s.blossom_step(0, 1, 0)
    with pytest.raises(ValueError):
        s.grow_step(0, 3, 2)  # free target is an augment
    assert s.step() == 0
    check_search_state(s)
    with pytest.raises(RuntimeError):
        s.outcome()


def test_rejects_invalid_matching():
    with pytest.raises(ValueError):
        EdmondsSearch(path_graph(3), Matching.from_pairs(3, [(0, 2)]))


def test_random_search_states_stay_valid(rng):
    for _ in range(300):
        g = random_graph(rng, n_max=11, m_max=25)
        m = random_matching(g, rng)
        out = run_search(g, m, debug=True)  # raises on any violation
        ref = brute_saps(g, m)
        if ref is None:
            assert out.optimal
            assert check_certificate(g, out.certificate())
        else:
            assert out.sap_length == ref[0]


def test_H_of_p4():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    h = build_H(g, m, run_search(g, m))
    assert h.vertices().tolist() == [0, 1, 2, 3]
    assert sorted(e for _, _, e in h.h_edges()) == [0, 1, 2]
    assert h.is_matched_edge(1) and not h.is_matched_edge(0)


def test_H_contracts_positive_blossom():
    g = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])
    m = Matching.from_pairs(6, [(1, 2), (3, 4)])
    h = build_H(g, m, run_search(g, m))
    assert h.label[[0, 1, 2]].tolist() == [0, 0, 0]
    assert h.is_contracted(0)
    assert h.members(0) == [0, 1, 2]
    # triangle edges vanish inside the contracted vertex
    assert {e for _, _, e in h.h_edges()} == {3, 4, 5}


def test_H_requires_augmenting_outcome():
    g = build_graph(1, [])
    with pytest.raises(ValueError):
        build_H(g, Matching.empty(1), run_search(g))


def test_certificate_perturbation_is_caught(rng):
    caught = 0
    for _ in range(200):
        g = random_graph(rng, n_max=10, m_max=20, n_min=3)
        m = random_matching(g, rng)
        out = run_search(g, m)
        if not out.optimal or g.m == 0:
            continue
        cert = out.certificate()
        assert check_certificate(g, cert)
        # lowering both ends of a non-matched edge breaks domination
        e = int(rng.integers(g.m))
        u, v = int(g.eu[e]), int(g.ev[e])
        cert.y[u] = cert.y[v] = -(g.n + 10)
        assert not check_certificate(g, cert)
        caught += 1
    assert caught > 20
