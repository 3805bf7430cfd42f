import numpy as np
import pytest
from hypothesis import strategies as st

from sapmatch import Matching, build_graph

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_graph(rng, n_max=12, m_max=30, n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    cap = min(m_max, n * (n - 1) // 2)
    m = int(rng.integers(0, cap + 1))
    e = rng.integers(0, max(n, 1), size=(m, 2))
    e = e[e[:, 0] != e[:, 1]]
    return build_graph(n, e)


def random_matching(g, rng, keep=0.6):
    """Greedy matching over a shuffled random subset of the edges."""
    mate = np.full(g.n, -1, dtype=np.int64)
    for e in rng.permutation(g.m):
        if rng.random() > keep:
            continue
        u, v = int(g.eu[e]), int(g.ev[e])
        if mate[u] < 0 and mate[v] < 0:
            mate[u], mate[v] = v, u
    return Matching(mate)


@st.composite
def graphs(draw, max_n=10, max_m=25):
    n = draw(st.integers(1, max_n))
    if n == 1:
        return build_graph(1, [])
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    return build_graph(n, draw(st.lists(pair, max_size=max_m)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
