from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from holeminer.graph import DirectedGraph, from_edges
from holeminer.synthetic import random_digraph

CORPUS_SIZES = range(5, 16)
CORPUS_PROBS = (0.05, 0.1, 0.2, 0.3)
CORPUS_SEEDS = range(5)


def chain_graph() -> DirectedGraph:
    return from_edges([("a", "b"), ("b", "c")])


def cycles_graph() -> DirectedGraph:
    return from_edges([("x", "y"), ("y", "x"), ("u", "v"), ("v", "u")])


@pytest.fixture
def g_chain():
    return chain_graph()


@pytest.fixture
def g_cycles():
    return cycles_graph()


def corpus():
    """220 seeded random digraphs, 5-15 nodes, four edge densities."""
    out = []
    for n in CORPUS_SIZES:
        for p in CORPUS_PROBS:
            for seed in CORPUS_SEEDS:
                out.append((f"n{n}-p{p}-s{seed}", random_digraph(n, p, seed=1000 * n + int(p * 100) * 10 + seed)))
    return out


# -- independent oracles ----------------------------------------------------
# Plain set arithmetic over explicit edge lists; nothing shared with the
# library's traversal or bitmask code.

def _edge_pairs(g: DirectedGraph):
    return [(u, v) for u, v, _ in g.edges()]


def oracle_connected(g: DirectedGraph, members) -> bool:
    members = set(members)
    if len(members) <= 1:
        return True
    und = {v: set() for v in members}
    for u, v in _edge_pairs(g):
        if u in members and v in members:
            und[u].add(v)
            und[v].add(u)
    start = next(iter(members))
    seen = {start}
    todo = [start]
    while todo:
        for w in und[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen == members


def oracle_patterns(g: DirectedGraph, n: int, volcano: bool = False) -> dict[int, frozenset]:
    """Enumerate all subsets up to size n; keep connected sets with no escaping (or entering) edge."""
    pairs = _edge_pairs(g)
    out = {}
    for i in range(1, n + 1):
        hits = set()
        for combo in itertools.combinations(range(g.node_count), i):
            s = set(combo)
            if volcano:
                crossing = any(v in s and u not in s for u, v in pairs)
            else:
                crossing = any(u in s and v not in s for u, v in pairs)
            if not crossing and oracle_connected(g, s):
                hits.add(combo)
        out[i] = frozenset(hits)
    return out


def oracle_reachability(g: DirectedGraph) -> np.ndarray:
    """Warshall transitive closure with the diagonal set."""
    n = g.node_count
    r = np.eye(n, dtype=bool)
    for u, v in _edge_pairs(g):
        r[u, v] = True
    for k in range(n):
        r |= r[:, [k]] & r[[k], :]
    return r


def oracle_closure(g: DirectedGraph, v: int) -> tuple[int, ...]:
    return tuple(int(x) for x in np.nonzero(oracle_reachability(g)[v])[0])


@st.composite
def digraphs(draw, max_nodes: int = 10):
    n = draw(st.integers(min_value=0, max_value=max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return DirectedGraph([f"v{k}" for k in range(n)], [(u, v, 1.0) for u, v in sorted(chosen)])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERIA_LOG", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
