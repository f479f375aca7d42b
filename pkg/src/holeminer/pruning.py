"""Size-independent pruning of the blackhole search space.

For a target size ``i`` the node set is narrowed in three stages:

* potential list: nodes with out-degree below ``i``;
* candidate list: the largest successor-closed subset of the potential
  list, obtained by deleting nodes with an escaping successor and cascading
  the deletion through predecessors;
* final list: candidates whose closure is smaller than ``i``. A closure of
  exactly ``i`` nodes is itself an ``i``-node blackhole and is emitted.

Membership is carried as ``list[bool]`` indexed by node id.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .graph import DirectedGraph, GraphError, NodeSet, closure_bounded, weak_components

Flags = list[bool]


@dataclass
class FunnelStats:
    size: int
    potential: int = 0
    candidate: int = 0
    final: int = 0
    removed_escaping_successor: int = 0
    removed_cascade: int = 0
    removed_closure_too_large: int = 0
    removed_closure_emitted: int = 0
    emitted: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class PruneState:
    size: int
    potential: Flags
    candidate: Flags
    final: Flags
    carried_from_prev: Flags
    emitted: list[NodeSet] = field(default_factory=list)
    stats: FunnelStats | None = None

    def final_nodes(self) -> NodeSet:
        return tuple(v for v, alive in enumerate(self.final) if alive)

    def candidate_nodes(self) -> NodeSet:
        return tuple(v for v, alive in enumerate(self.candidate) if alive)


def _remove_with_predecessors(g: DirectedGraph, alive: Flags, v: int) -> int:
    """Delete ``v`` and, transitively, every live predecessor. Returns the count."""
    alive[v] = False
    removed = 1
    stack = [v]
    while stack:
        u = stack.pop()
        for p, _ in g.pred[u]:
            if alive[p]:
                alive[p] = False
                removed += 1
                stack.append(p)
    return removed


def potential_list(g: DirectedGraph, i: int) -> Flags:
    if i < 1:
        raise GraphError(f"pattern size must be >= 1, got {i}")
    return [len(g.succ[v]) < i for v in range(g.node_count)]


def candidate_list(g: DirectedGraph, i: int, potential: Flags, carried: Flags | None = None,
                   stats: FunnelStats | None = None) -> Flags:
    """Reduce ``potential`` to its successor-closed core.

    Nodes flagged in ``carried`` (the previous size's candidates) are not
    examined; they cannot have an escaping successor.
    """
    alive = list(potential)
    skip = carried or [False] * g.node_count
    direct = cascade = 0
    for v in range(g.node_count):
        if not alive[v] or skip[v]:
            continue
        if any(not alive[s] for s, _ in g.succ[v]):
            n = _remove_with_predecessors(g, alive, v)
            direct += 1
            cascade += n - 1
    if stats is not None:
        stats.removed_escaping_successor += direct
        stats.removed_cascade += cascade
    return alive


def final_list(g: DirectedGraph, i: int, candidate: Flags,
               stats: FunnelStats | None = None) -> tuple[Flags, list[NodeSet]]:
    """Apply the closure-size rules to a successor-closed candidate list.

    Returns the surviving flags and the size-``i`` closures found, in
    discovery order and without duplicates.
    """
    alive = list(candidate)
    emitted: list[NodeSet] = []
    seen: set[NodeSet] = set()
    too_large = emitted_removed = 0
    for v in range(g.node_count):
        if not alive[v]:
            continue
        members, exceeded = closure_bounded(g, v, i)
        if exceeded:
            too_large += _remove_with_predecessors(g, alive, v)
        elif len(members) == i:
            if members not in seen:
                seen.add(members)
                emitted.append(members)
            emitted_removed += _remove_with_predecessors(g, alive, v)
    if stats is not None:
        stats.removed_closure_too_large += too_large
        stats.removed_closure_emitted += emitted_removed
        stats.emitted += len(emitted)
    return alive, emitted


def prune(g: DirectedGraph, i: int, carried: Flags | None = None) -> PruneState:
    """Run the full potential -> candidate -> final pipeline for size ``i``."""
    stats = FunnelStats(size=i)
    potential = potential_list(g, i)
    carried = list(carried) if carried is not None else [False] * g.node_count
    candidate = candidate_list(g, i, potential, carried, stats)
    final, emitted = final_list(g, i, candidate, stats)
    stats.potential = sum(potential)
    stats.candidate = sum(candidate)
    stats.final = sum(final)
    return PruneState(i, potential, candidate, final, carried, emitted, stats)


def prune_sequence(g: DirectedGraph, n: int):
    """Yield the prune state for sizes ``1..n``, carrying candidates forward."""
    carried = None
    for i in range(1, n + 1):
        state = prune(g, i, carried)
        carried = state.candidate
        yield state


@dataclass
class PruneReport:
    size: int
    potential: int
    candidate: int
    final: int
    final_nodes: int
    final_edges: int
    final_components: int
    emitted: int

    def as_dict(self) -> dict:
        return asdict(self)


def prune_stats(g: DirectedGraph, i: int) -> PruneReport:
    """Funnel sizes for size ``i`` plus the shape of the graph left to search."""
    if i < 1:
        raise GraphError(f"pattern size must be >= 1, got {i}")
    state = None
    for state in prune_sequence(g, i):
        pass
    if state is None:  # pragma: no cover - i >= 1 always yields
        raise AssertionError
    survivors = state.final_nodes()
    alive = set(survivors)
    edges = sum(1 for u in survivors for v, _ in g.succ[u] if v in alive)
    comps = weak_components(g, within=survivors) if survivors else []
    st = state.stats
    return PruneReport(i, st.potential, st.candidate, st.final, len(survivors), edges, len(comps), st.emitted)
