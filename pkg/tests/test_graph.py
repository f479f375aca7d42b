import pytest
from hypothesis import given, settings

from holeminer.graph import (
    DirectedGraph,
    EdgeListParseError,
    GraphError,
    closure,
    closure_bounded,
    dump_edge_list,
    in_degree,
    induced_subgraph,
    is_weakly_connected,
    load_edge_list,
    out_degree,
    reverse,
    weak_components,
)

from conftest import digraphs, oracle_closure, oracle_connected


def test_load_simple():
    g, report = load_edge_list(["a b", "b c"])
    assert (g.node_count, g.edge_count) == (3, 2)
    assert out_degree(g, g.node_id("a")) == 1
    assert report.warnings() == []


def test_load_drops_self_loops():
    g, report = load_edge_list(["a a", "a b"])
    assert (g.node_count, g.edge_count) == (2, 1)
    assert report.self_loops_dropped == 1


def test_load_collapses_duplicates_keeping_first_weight():
    g, report = load_edge_list(["a b 2.5", "a b 7", "# comment", "", "b a"])
    assert g.edge_count == 2
    assert g.succ[g.node_id("a")] == ((g.node_id("b"), 2.5),)
    assert report.duplicates_collapsed == 1
    assert report.comment_lines == 1


@pytest.mark.parametrize(
    "lines, lineno",
    [
        (["a b 0"], 1),
        (["a b", "a b -1"], 2),
        (["a b", "", "c d x"], 3),
        (["a"], 1),
        (["a b 1 2"], 1),
        (["a b nan"], 1),
    ],
)
def test_load_rejects_malformed(lines, lineno):
    with pytest.raises(EdgeListParseError) as err:
        load_edge_list(lines)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_load_node_directive_keeps_isolated_nodes():
    g, _ = load_edge_list(["@v lonely other", "a b", "\tb\t c "])
    assert g.node_count == 5
    assert g.labels[:2] == ("lonely", "other")
    assert weak_components(g) == [(0,), (1,), (2, 3, 4)]


def test_dump_round_trip():
    g, _ = load_edge_list(["@v iso", "a b 2.5", "b c", "c a"])
    again, _ = load_edge_list(dump_edge_list(g).splitlines())
    assert again == g


def test_degrees(g_chain):
    a, b, c = (g_chain.node_id(x) for x in "abc")
    assert out_degree(g_chain, c) == 0
    assert out_degree(g_chain, a) == 1
    assert in_degree(g_chain, b) == 1
    with pytest.raises(GraphError):
        out_degree(g_chain, 3)
    with pytest.raises(GraphError):
        in_degree(g_chain, -1)


def test_reverse(g_chain):
    r = reverse(g_chain)
    assert sorted((r.labels[u], r.labels[v]) for u, v, _ in r.edges()) == [("b", "a"), ("c", "b")]
    assert reverse(r) == g_chain
    empty = DirectedGraph([])
    assert reverse(empty) == empty


def test_induced_subgraph(g_chain):
    ids = g_chain.ids
    sub = induced_subgraph(g_chain, ids("bc"))
    assert sub.labels == ("b", "c") and sub.edges() == [(0, 1, 1.0)]
    sub = induced_subgraph(g_chain, ids("ac"))
    assert sub.node_count == 2 and sub.edge_count == 0
    assert induced_subgraph(g_chain, range(3)) == g_chain
    with pytest.raises(GraphError):
        induced_subgraph(g_chain, [0, 9])


def test_weak_connectivity(g_chain):
    ids = g_chain.ids
    assert is_weakly_connected(g_chain, ids("bc"))
    assert not is_weakly_connected(g_chain, ids("ac"))
    for v in range(3):
        assert is_weakly_connected(g_chain, [v])
    with pytest.raises(GraphError):
        is_weakly_connected(g_chain, [])


def test_weak_components(g_chain, g_cycles):
    ids = g_cycles.ids
    assert weak_components(g_cycles) == [ids("xy"), ids("uv")]
    assert weak_components(g_chain) == [(0, 1, 2)]
    assert weak_components(DirectedGraph(["p", "q", "r"])) == [(0,), (1,), (2,)]
    assert weak_components(DirectedGraph([])) == []


def test_closure_examples(g_chain, g_cycles):
    a, c = g_chain.node_id("a"), g_chain.node_id("c")
    # expected values come from the Warshall oracle
    assert closure(g_chain, a) == oracle_closure(g_chain, a) == g_chain.ids("abc")
    assert closure(g_chain, c) == (c,)
    x = g_cycles.node_id("x")
    assert closure(g_cycles, x) == oracle_closure(g_cycles, x) == g_cycles.ids("xy")


def test_closure_bounded(g_chain):
    a, c = g_chain.node_id("a"), g_chain.node_id("c")
    members, exceeded = closure_bounded(g_chain, a, 2)
    assert exceeded and len(members) == 3
    assert closure_bounded(g_chain, a, 3) == (g_chain.ids("abc"), False)
    assert closure_bounded(g_chain, c, 1) == ((c,), False)
    with pytest.raises(GraphError):
        closure_bounded(g_chain, a, 0)


def test_closure_bounded_partial_has_cap_plus_one_nodes():
    g, _ = load_edge_list([f"n{k} n{k + 1}" for k in range(50)])
    members, exceeded = closure_bounded(g, 0, 10)
    assert exceeded and len(members) == 11


def test_graph_constructor_rejects_bad_edges():
    with pytest.raises(GraphError):
        DirectedGraph(["a"], [(0, 0, 1.0)])
    with pytest.raises(GraphError):
        DirectedGraph(["a", "b"], [(0, 1, 1.0), (0, 1, 2.0)])
    with pytest.raises(GraphError):
        DirectedGraph(["a", "b"], [(0, 1, 0.0)])
    with pytest.raises(GraphError):
        DirectedGraph(["a", "a"])


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_adjacency_duality(g):
    for v in range(g.node_count):
        assert out_degree(g, v) == len(g.succ[v])
        assert out_degree(g, v) == sum(1 for u in range(g.node_count) if v in dict(g.pred[u]))
        for s, w in g.succ[v]:
            assert (v, w) in g.pred[s]
    assert sum(map(len, g.succ)) == sum(map(len, g.pred)) == g.edge_count
    for rows in (g.succ, g.pred):
        for row in rows:
            assert [x for x, _ in row] == sorted(x for x, _ in row)


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_reverse_swaps_degrees(g):
    r = reverse(g)
    assert reverse(r) == g
    for v in range(g.node_count):
        assert out_degree(g, v) == in_degree(r, v)
        assert in_degree(g, v) == out_degree(r, v)


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_closure_matches_oracle_and_is_idempotent(g):
    for v in range(g.node_count):
        cv = closure(g, v)
        assert v in cv
        assert cv == oracle_closure(g, v)
        for u in cv:
            assert set(closure(g, u)) <= set(cv)
        assert closure_bounded(g, v, max(1, g.node_count)) == (cv, False)


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_weak_components_partition(g):
    comps = weak_components(g)
    flat = [v for c in comps for v in c]
    assert sorted(flat) == list(range(g.node_count))
    assert [c[0] for c in comps] == sorted(c[0] for c in comps)
    for c in comps:
        assert oracle_connected(g, c)
        assert is_weakly_connected(g, c)
    for c1 in comps:
        for c2 in comps:
            if c1 < c2:
                assert not oracle_connected(g, set(c1) | set(c2))
