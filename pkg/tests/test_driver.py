import numpy as np
import pytest
from hypothesis import given, settings

from sapmatch import Matching, build_graph, certify, maximum_matching, phase_bound, validate_matching
from sapmatch.oracle import brute_max_matching
from sapmatch.generators import long_path_chain, nested_blossom_gadget, random_bipartite, random_gnm

from conftest import complete, cycle, graphs, path_graph, petersen, random_matching


@pytest.mark.parametrize(
    "g, size",
    [(path_graph(4), 2), (cycle(5), 2), (cycle(6), 3), (petersen(), 5), (complete(5), 2),
     (build_graph(0, []), 0), (build_graph(3, []), 0)],
)
def test_named_graphs(g, size):
    m, stats = maximum_matching(g, debug=True)
    assert m.size == size
    assert validate_matching(g, m)
    assert stats.phases <= phase_bound(g.n)
    assert certify(g, m)


def test_phase_bound_values():
    assert [phase_bound(n) for n in (0, 1, 4, 5, 100)] == [2, 4, 6, 8, 22]


def test_idempotent_on_maximum_matching():
    g = petersen()
    m, _ = maximum_matching(g)
    m2, stats = maximum_matching(g, m)
    assert m2 == m
    assert stats.phases == 1 and stats.path_lengths == []


def test_warm_start_from_partial(rng):
    g = random_gnm(40, 90, seed=3)
    m0 = random_matching(g, rng)
    m, _ = maximum_matching(g, m0, debug=True)
    ref, _ = maximum_matching(g)
    assert m.size == ref.size


def test_rejects_bad_start():
    with pytest.raises(ValueError):
        maximum_matching(path_graph(3), Matching.from_pairs(3, [(0, 2)]))


def test_path_lengths_increase():
    g = long_path_chain(301, seed=1)
    m, stats = maximum_matching(g, debug=True)
    assert m.size == 150
    lens = stats.path_lengths
    assert lens == sorted(set(lens))
    assert all(k % 2 == 1 for k in lens)


@pytest.mark.parametrize("depth", [2, 4, 8])
def test_gadget_solves(depth):
    g = nested_blossom_gadget(depth, seed=depth)
    m, _ = maximum_matching(g, debug=True)
    assert 2 * m.size == g.n  # the gadget has a perfect matching
    assert certify(g, m)


def test_bipartite_and_gnm_debug():
    for seed in range(5):
        for g in (random_gnm(200, 500, seed), random_bipartite(200, 400, seed)):
            m, stats = maximum_matching(g, debug=True)
            assert stats.phases <= phase_bound(g.n)


def test_trace_has_both_stages():
    g = build_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)])
    _, stats = maximum_matching(g, trace=True)
    assert {r["stage"] for r in stats.trace} == {1, 2}
    assert all({"phase", "step"} <= r.keys() for r in stats.trace)


def test_summary_mentions_phases():
    _, stats = maximum_matching(path_graph(6))
    assert stats.summary().startswith(f"phases={stats.phases} matched=3")


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=10, max_m=25))
def test_matches_brute_force(g):
    m, _ = maximum_matching(g, debug=True)
    assert m.size == brute_max_matching(g)[0]
