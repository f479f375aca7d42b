"""Immutable directed graph with the structural queries the miners rely on.

Nodes are dense integer ids; external labels are interned at construction.
Adjacency lists are kept sorted by neighbour id so every traversal, and
therefore every output, is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

NodeSet = tuple[int, ...]

NODE_DIRECTIVE = "@v"


class GraphError(ValueError):
    """Raised for invalid node ids or contract violations."""


class EdgeListParseError(ValueError):
    def __init__(self, lineno: int, message: str, source: str | None = None):
        where = f"{source}:{lineno}" if source else f"line {lineno}"
        super().__init__(f"{where}: {message}")
        self.lineno = lineno
        self.source = source


def node_set(members: Iterable[int]) -> NodeSet:
    """Canonical form of a node collection: sorted, deduplicated tuple."""
    return tuple(sorted(set(members)))


@dataclass
class LoadReport:
    self_loops_dropped: int = 0
    duplicates_collapsed: int = 0
    comment_lines: int = 0

    def warnings(self) -> list[str]:
        out = []
        if self.self_loops_dropped:
            out.append(f"dropped {self.self_loops_dropped} self-loop line(s)")
        if self.duplicates_collapsed:
            out.append(f"collapsed {self.duplicates_collapsed} duplicate edge line(s)")
        return out


class DirectedGraph:
    """Weighted digraph with forward and reverse adjacency.

    ``succ[v]`` and ``pred[v]`` hold ``(neighbour, weight)`` pairs sorted by
    neighbour id. Instances are never mutated after ``__init__``.
    """

    __slots__ = ("labels", "succ", "pred", "_index", "_edge_count")

    def __init__(self, labels: Sequence[str], edges: Iterable[tuple[int, int, float]] = ()):
        labels = tuple(str(lbl) for lbl in labels)
        index = {lbl: i for i, lbl in enumerate(labels)}
        if len(index) != len(labels):
            raise GraphError("node labels must be unique")
        n = len(labels)
        fwd: list[dict[int, float]] = [{} for _ in range(n)]
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not w > 0:
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            if v in fwd[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            fwd[u][v] = float(w)
        rev: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        succ = []
        for u in range(n):
            row = tuple(sorted(fwd[u].items()))
            succ.append(row)
            for v, w in row:
                rev[v].append((u, w))
        self.labels = labels
        self.succ: tuple[tuple[tuple[int, float], ...], ...] = tuple(succ)
        # rev rows are filled in ascending u, so already sorted
        self.pred: tuple[tuple[tuple[int, float], ...], ...] = tuple(tuple(r) for r in rev)
        self._index = index
        self._edge_count = sum(len(r) for r in succ)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"DirectedGraph(nodes={self.node_count}, edges={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.labels == other.labels and self.succ == other.succ

    def __hash__(self) -> int:
        return hash((self.labels, self.succ))

    def node_id(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown node label {label!r}") from None

    def ids(self, labels: Iterable[str]) -> NodeSet:
        return node_set(self.node_id(lbl) for lbl in labels)

    def label_set(self, members: Iterable[int]) -> list[str]:
        return sorted(self.labels[v] for v in members)

    def edges(self) -> list[tuple[int, int, float]]:
        return [(u, v, w) for u in range(self.node_count) for v, w in self.succ[u]]

    def successors(self, v: int) -> list[int]:
        self._check(v)
        return [s for s, _ in self.succ[v]]

    def predecessors(self, v: int) -> list[int]:
        self._check(v)
        return [p for p, _ in self.pred[v]]

    def _check(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.node_count):
            raise GraphError(f"node id {v!r} out of range 0..{self.node_count - 1}")


def from_edges(edges: Iterable[tuple], nodes: Iterable[str] = ()) -> DirectedGraph:
    """Build a graph from labelled edges ``(src, dst)`` or ``(src, dst, w)``.

    Labels get ids in order of first appearance, ``nodes`` first. Intended for
    clean input; use :func:`load_edge_list` for files that need sanitising.
    """
    index: dict[str, int] = {}

    def intern(lbl) -> int:
        lbl = str(lbl)
        if lbl not in index:
            index[lbl] = len(index)
        return index[lbl]

    for lbl in nodes:
        intern(lbl)
    triples = []
    for e in edges:
        w = float(e[2]) if len(e) > 2 else 1.0
        triples.append((intern(e[0]), intern(e[1]), w))
    return DirectedGraph(list(index), triples)


def load_edge_list(lines: Iterable[str], source: str | None = None) -> tuple[DirectedGraph, LoadReport]:
    """Parse the edge-list text format.

    Each non-blank line that does not start with ``#`` is ``src dst [weight]``.
    A line ``@v label [label ...]`` declares nodes without edges, which is the
    only way to represent isolated nodes. Self-loops are dropped and repeated
    ``(src, dst)`` pairs keep the first weight; both are counted in the report.
    """
    report = LoadReport()
    index: dict[str, int] = {}
    edges: dict[tuple[int, int], float] = {}

    def intern(lbl: str) -> int:
        if lbl not in index:
            index[lbl] = len(index)
        return index[lbl]

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            report.comment_lines += 1
            continue
        tokens = line.split()
        if tokens[0] == NODE_DIRECTIVE:
            if len(tokens) < 2:
                raise EdgeListParseError(lineno, "node declaration without a label", source)
            for lbl in tokens[1:]:
                intern(lbl)
            continue
        if len(tokens) not in (2, 3):
            raise EdgeListParseError(lineno, f"expected 'src dst [weight]', got {len(tokens)} tokens", source)
        weight = 1.0
        if len(tokens) == 3:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise EdgeListParseError(lineno, f"non-numeric weight {tokens[2]!r}", source) from None
            if not weight > 0 or weight == float("inf"):
                raise EdgeListParseError(lineno, f"weight must be positive and finite, got {tokens[2]!r}", source)
        u, v = intern(tokens[0]), intern(tokens[1])
        if u == v:
            report.self_loops_dropped += 1
            continue
        if (u, v) in edges:
            report.duplicates_collapsed += 1
            continue
        edges[(u, v)] = weight
    graph = DirectedGraph(list(index), [(u, v, w) for (u, v), w in edges.items()])
    return graph, report


def read_edge_list(path) -> tuple[DirectedGraph, LoadReport]:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, source=str(path))


def dump_edge_list(g: DirectedGraph) -> str:
    """Serialise ``g`` so that :func:`load_edge_list` reproduces it exactly.

    Every node is declared up front, which keeps isolated nodes and id order.
    """
    out = []
    for lbl in g.labels:
        out.append(f"{NODE_DIRECTIVE} {lbl}")
    for u, v, w in g.edges():
        if w == 1.0:
            out.append(f"{g.labels[u]} {g.labels[v]}")
        else:
            out.append(f"{g.labels[u]} {g.labels[v]} {w!r}")
    return "\n".join(out) + ("\n" if out else "")


def out_degree(g: DirectedGraph, v: int) -> int:
    g._check(v)
    return len(g.succ[v])


def in_degree(g: DirectedGraph, v: int) -> int:
    g._check(v)
    return len(g.pred[v])


def reverse(g: DirectedGraph) -> DirectedGraph:
    return DirectedGraph(g.labels, [(v, u, w) for u, v, w in g.edges()])


def _checked_set(g: DirectedGraph, s: Iterable[int]) -> NodeSet:
    members = node_set(s)
    for v in members:
        g._check(v)
    return members


def induced_subgraph(g: DirectedGraph, s: Iterable[int]) -> DirectedGraph:
    """Subgraph on ``s``; node ``s[k]`` becomes id ``k``, labels preserved."""
    members = _checked_set(g, s)
    local = {v: k for k, v in enumerate(members)}
    edges = [(local[u], local[v], w) for u in members for v, w in g.succ[u] if v in local]
    return DirectedGraph([g.labels[v] for v in members], edges)


def is_weakly_connected(g: DirectedGraph, s: Iterable[int]) -> bool:
    members = _checked_set(g, s)
    if not members:
        raise GraphError("weak connectivity is undefined for an empty node set")
    inside = set(members)
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        u = stack.pop()
        for nbrs in (g.succ[u], g.pred[u]):
            for v, _ in nbrs:
                if v in inside and v not in seen:
                    seen.add(v)
                    stack.append(v)
    return len(seen) == len(inside)


def weak_components(g: DirectedGraph, within: Iterable[int] | None = None) -> list[NodeSet]:
    """Maximal weakly connected node sets, ordered by smallest member.

    With ``within`` the components are those of the induced subgraph on it.
    """
    if within is None:
        allowed = None
        order: Iterable[int] = range(g.node_count)
    else:
        order = _checked_set(g, within)
        allowed = set(order)
    seen: set[int] = set()
    comps = []
    for root in order:
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for nbrs in (g.succ[u], g.pred[u]):
                for v, _ in nbrs:
                    if v not in seen and (allowed is None or v in allowed):
                        seen.add(v)
                        comp.append(v)
                        stack.append(v)
        comps.append(node_set(comp))
    return comps


def closure(g: DirectedGraph, v: int) -> NodeSet:
    """``v`` together with every node reachable from it."""
    members, _ = closure_bounded(g, v, g.node_count or 1)
    return members


def closure_bounded(g: DirectedGraph, v: int, cap: int) -> tuple[NodeSet, bool]:
    """Forward traversal from ``v`` that stops after collecting ``cap + 1`` nodes.

    Returns ``(nodes, exceeded)``. When ``exceeded`` is false ``nodes`` is the
    exact closure; otherwise it is a partial closure of size ``cap + 1``.
    """
    if cap < 1:
        raise GraphError(f"cap must be >= 1, got {cap}")
    g._check(v)
    seen = {v}
    frontier = deque([v])
    while frontier:
        u = frontier.popleft()
        for s, _ in g.succ[u]:
            if s not in seen:
                seen.add(s)
                if len(seen) > cap:
                    return node_set(seen), True
                frontier.append(s)
    return node_set(seen), False
