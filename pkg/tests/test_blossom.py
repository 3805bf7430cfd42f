import numpy as np
import pytest

from sapmatch import BaseTracker, BlossomError, BlossomStore
from sapmatch.oracle import brute_saps


def test_base_tracker_merges():
    t = BaseTracker(6)
    assert [t.find_base(v) for v in range(6)] == list(range(6))
    t.merge_into([0, 1, 2], 1)
    assert {t.find_base(v) for v in (0, 1, 2)} == {1}
    t.merge_into([1, 3, 4], 4)
    assert {t.find_base(v) for v in (0, 1, 2, 3, 4)} == {4}
    assert t.find_base(5) == 5
    with pytest.raises(BlossomError):
        t.merge_into([5], 0)
    with pytest.raises(KeyError):
        t.find_base(6)


def _triangle_store():
    # triangle 0,1,2 with base 0; edges 0:(0,1) 1:(1,2) 2:(2,0); 1-2 matched
    s = BlossomStore(5)
    b = s.record_blossom([0, 1, 2], [(0, 0, 1), (1, 1, 2), (2, 2, 0)], base=0)
    return s, b


def test_record_and_inspect():
    s, b = _triangle_store()
    assert b.id == 5 and b.base == 0
    assert b.children == [0, 1, 2]
    assert sorted(b.leaves()) == [0, 1, 2]
    assert b.subtree_size() == 4
    assert s.contains(b.id, 2) and not s.contains(b.id, 3)
    assert s.node(1).parent == b.id


@pytest.mark.parametrize("v, want", [(0, (0,)), (1, (1, 2, 0)), (2, (2, 1, 0))])
def test_extract_path_triangle(v, want):
    s, b = _triangle_store()
    p = b.extract_path(v)
    assert p.vertices == want
    assert len(p) % 2 == 0


def test_nested_extract():
    # inner triangle B1 = {0,1,2} base 0 sits second in an outer ring
    # 3, B1, 4 with base 3: edges 3:(3,1), 4:(0,4) matched, 5:(4,3)
    s, b1 = _triangle_store()
    b2 = s.record_blossom([3, b1.id, 4], [(3, 3, 1), (4, 0, 4), (5, 4, 3)], base=3)
    # inside B1 down to its base 0, out along the matched 0-4, then 4-3
    assert b2.extract_path(2).vertices == (2, 1, 0, 4, 3)
    assert b2.extract_path(0).vertices == (0, 4, 3)
    # from 4 the other way round: matched 4-0, through B1 to 1, then 1-3
    assert b2.extract_path(4).vertices == (4, 0, 2, 1, 3)
    assert b2.extract_path(3).vertices == (3,)
    assert sorted(b2.leaves()) == [0, 1, 2, 3, 4]


@pytest.mark.parametrize(
    "children, edges, base",
    [
        ([0, 1], [(0, 0, 1), (1, 1, 0)], 0),  # even ring
        ([0, 1, 2], [(0, 0, 1), (1, 1, 2)], 0),  # missing edge
        ([0, 1, 2], [(0, 0, 1), (1, 1, 2), (2, 2, 0)], 1),  # base not in child 0
        ([0, 1, 2], [(0, 0, 2), (1, 1, 2), (2, 2, 0)], 0),  # edge joins wrong children
        ([0, 1, 1], [(0, 0, 1), (1, 1, 1), (2, 1, 0)], 0),  # repeated child
    ],
)
def test_record_rejects(children, edges, base):
    s = BlossomStore(5)
    with pytest.raises(BlossomError):
        s.record_blossom(children, edges, base)


def test_child_cannot_join_twice():
    s, _ = _triangle_store()
    with pytest.raises(BlossomError):
        s.record_blossom([1, 3, 4], [(0, 1, 3), (1, 3, 4), (2, 4, 1)], base=1)
