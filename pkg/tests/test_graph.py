import numpy as np
import pytest

from sapmatch import GraphError, Matching, NotAugmentingError, Path, augment_along, build_graph, validate_matching

from conftest import path_graph


def test_build_and_adjacency():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    assert (g.n, g.m) == (4, 3)
    assert sorted(g.neighbors(1)) == [(0, 0), (2, 1)]
    assert g.degree(0) == 1 and g.degree(2) == 2
    assert g.has_edge(2, 1) and not g.has_edge(0, 3)
    assert g.endpoints(2) == (2, 3)


def test_parallel_edges_kept():
    g = build_graph(2, [(0, 1), (1, 0)])
    assert g.m == 2 and g.degree(0) == 2


@pytest.mark.parametrize("n, edges", [(3, [(0, 0)]), (3, [(0, 3)]), (2, [(-1, 0)]), (-1, [])])
def test_build_rejects(n, edges):
    with pytest.raises(GraphError):
        build_graph(n, edges)


def test_build_rejects_bad_shape():
    with pytest.raises(GraphError):
        build_graph(3, np.zeros((2, 3), dtype=np.int64))


def test_matching_basics():
    m = Matching.from_pairs(5, [(3, 1), (0, 4)])
    assert m.size == len(m) == 2
    assert m.pairs() == [(0, 4), (1, 3)]
    assert m.is_free(2) and not m.is_free(1)
    assert m.copy() == m and m.copy() is not m
    with pytest.raises(ValueError):
        Matching.from_pairs(3, [(0, 1), (1, 2)])


def test_validate_matching():
    g = path_graph(4)
    assert validate_matching(g, Matching.from_pairs(4, [(0, 1), (2, 3)]))
    assert not validate_matching(g, Matching.from_pairs(4, [(0, 2)]))  # not an edge
    assert not validate_matching(g, Matching([1, 0, 3, 1]))  # not involutive
    assert not validate_matching(g, Matching([1, 0, 2, -1]))  # self-mate
    assert not validate_matching(g, Matching.empty(3))  # wrong length


def test_path_checks_and_augment():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    p = Path((0, 1, 2, 3), (0, 1, 2))
    assert p.follows(g) and p.is_simple() and p.is_augmenting(m)
    assert p.reversed().vertices == (3, 2, 1, 0)
    assert augment_along(m, p) == Matching.from_pairs(4, [(0, 1), (2, 3)])
    with pytest.raises(NotAugmentingError):
        augment_along(m, Path((0, 1), (0,)))
    assert not Path((0, 1), (2,)).follows(g)
    with pytest.raises(ValueError):
        Path((0, 1), ())
