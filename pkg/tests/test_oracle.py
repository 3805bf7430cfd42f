"""Oracles first: frozen answers on named graphs, then the certificate checker."""
import numpy as np
import pytest

from sapmatch import Matching, Path, build_graph
from sapmatch.oracle import (
    Certificate,
    CertificateError,
    OracleSizeError,
    brute_max_matching,
    brute_saps,
    check_certificate,
    check_duals,
    verify_sap_set_maximal,
)

from conftest import complete, cycle, path_graph, petersen


@pytest.mark.parametrize(
    "g, size",
    [
        (complete(4), 2),
        (cycle(7), 3),
        (build_graph(6, []), 0),
        (build_graph(0, []), 0),
        (petersen(), 5),
        (cycle(5), 2),
        (cycle(6), 3),
        (path_graph(4), 2),
        (complete(7), 3),
        # star: only one edge can be used
        (build_graph(5, [(0, i) for i in range(1, 5)]), 1),
    ],
)
def test_brute_max_matching_frozen(g, size):
    k, witness = brute_max_matching(g)
    assert k == size
    assert witness.size == size
    assert all(g.has_edge(u, v) for u, v in witness.pairs())


def test_brute_max_matching_size_guard():
    with pytest.raises(OracleSizeError):
        brute_max_matching(build_graph(21, []))


def test_brute_saps_empty_matching_has_length_one():
    g = cycle(5)
    length, saps = brute_saps(g, Matching.empty(5))
    assert length == 1
    assert saps == {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}


def test_brute_saps_p4_middle_matched():
    res = brute_saps(path_graph(4), Matching.from_pairs(4, [(1, 2)]))
    assert res == (3, {(0, 1, 2, 3)})


def test_brute_saps_perfect_matching_is_none():
    assert brute_saps(path_graph(4), Matching.from_pairs(4, [(0, 1), (2, 3)])) is None


def test_brute_saps_blossom_instance():
    # triangle 0,1,2 with 1-2 matched, tails 0-3 (free 3) and 2-4 matched, 4-5 free 5
    g = build_graph(6, [(0, 1), (1, 2), (2, 0), (0, 3), (2, 4), (4, 5)])
    m = Matching.from_pairs(6, [(1, 2)])
    length, saps = brute_saps(g, m)
    assert length == 1
    m = Matching.from_pairs(6, [(1, 2), (0, 3)])
    length, saps = brute_saps(g, m)
    assert (length, saps) == (1, {(4, 5)})


def test_brute_saps_guard():
    with pytest.raises(OracleSizeError):
        brute_saps(build_graph(15, []), Matching.empty(15))


def _two_free_edges():
    return build_graph(4, [(0, 1), (2, 3)])


def test_verify_sap_set_maximal():
    g = _two_free_edges()
    m = Matching.empty(4)
    both = [Path((0, 1), (0,)), Path((2, 3), (1,))]
    assert verify_sap_set_maximal(g, m, both)
    # leaving out a disjoint sap is not maximal
    assert not verify_sap_set_maximal(g, m, both[:1])
    # maximum matching: only the empty set is maximal
    done = Matching.from_pairs(4, [(0, 1), (2, 3)])
    assert verify_sap_set_maximal(g, done, [])
    assert not verify_sap_set_maximal(g, m, [])


def test_verify_sap_set_single_sap_blocks_the_rest():
    g = path_graph(3)
    assert verify_sap_set_maximal(g, Matching.empty(3), [Path((0, 1), (0,))])


def test_verify_rejects_non_shortest():
    g = path_graph(4)
    m = Matching.from_pairs(4, [(1, 2)])
    assert verify_sap_set_maximal(g, m, [Path((0, 1, 2, 3), (0, 1, 2))])
    g2 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    # with 0-3 available the length-3 path is no longer shortest
    assert not verify_sap_set_maximal(g2, m, [Path((0, 1, 2, 3), (0, 1, 2))])


# ---------------------------------------------------------------------------
# certificates


def _triangle_cert():
    # triangle 0,1,2 plus isolated 3; 1-2 matched, blossom {0,1,2} base 0
    g = build_graph(4, [(0, 1), (1, 2), (0, 2)])
    mate = [-1, 2, 1, -1]
    y = [-2, 0, 0, -2]
    cert = Certificate.from_sets(y, [({0, 1, 2}, 0, 2)], mate)
    return g, cert


def test_certificate_triangle_accepts():
    g, cert = _triangle_cert()
    assert check_certificate(g, cert)


def test_certificate_perturbed_y_rejected():
    g, cert = _triangle_cert()
    cert.y[1] += 1
    assert not check_certificate(g, cert)


def test_certificate_negative_z_rejected():
    g, cert = _triangle_cert()
    cert.z[0] = -2
    assert not check_certificate(g, cert)
    assert any("negative z" in p for p in check_duals(g, cert))


def test_certificate_free_duals_too_large_rejected():
    g = build_graph(2, [])
    cert = Certificate.from_sets([0, 0], [], [-1, -1])
    # y(f1) + y(f2) = 0 is not below 2 - n = 0
    assert not check_certificate(g, cert)
    cert.y[:] = -1
    assert check_certificate(g, cert)


def test_certificate_wrong_base_rejected():
    g, cert = _triangle_cert()
    cert.blossom_base[0] = 1
    assert not check_certificate(g, cert)


def test_certificate_non_laminar_raises():
    with pytest.raises(CertificateError):
        Certificate.from_sets([0] * 5, [({0, 1, 2}, 0, 0), ({2, 3, 4}, 2, 0)], [-1] * 5)


def test_certificate_parent_cycle_raises():
    g, cert = _triangle_cert()
    cert.blossom_parent = np.array([0])
    with pytest.raises(CertificateError):
        check_certificate(g, cert)
