"""End-to-end blackhole/volcano miners.

Three algorithms produce the same 1..n-node pattern sets:

* ``brute``: every i-subset of the node set is checked;
* ``iblackhole``: the pruning funnel shrinks the search to the final list,
  and size-i closures found while pruning are reported directly;
* ``iblackhole-dc``: as above, but the final list is split into weak
  components that are searched independently (optionally in parallel).

The inner search works on bitmasks over a local numbering of the scope.
"""

from __future__ import annotations

import enum
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .graph import DirectedGraph, NodeSet, node_set, weak_components
from .patterns import PatternKind, dualize
from .pruning import FunnelStats, prune_sequence

DEFAULT_GUARD_LIMIT = 10**9
GUARD_ENV = "HOLEMINER_GUARD_LIMIT"


class Algorithm(str, enum.Enum):
    BRUTE_FORCE = "brute"
    IBLACKHOLE = "iblackhole"
    IBLACKHOLE_DC = "iblackhole-dc"


class Search(str, enum.Enum):
    # every i-combination of the scope, as in the exhaustive algorithm
    COMBINATIONS = "combinations"
    # only weakly connected i-sets, grown through undirected adjacency
    CONNECTED = "connected"


class SearchSpaceTooLarge(RuntimeError):
    def __init__(self, predicted: int, limit: int, where: str = ""):
        msg = f"search space too large: {predicted} candidate sets exceeds guard limit {limit}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)
        self.predicted = predicted
        self.limit = limit


def default_guard_limit() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw:
        try:
            value = int(float(raw))
        except ValueError:
            raise ValueError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{GUARD_ENV} must be >= 1, got {raw!r}")
        return value
    return DEFAULT_GUARD_LIMIT


@dataclass
class MiningConfig:
    max_size: int
    algorithm: Algorithm = Algorithm.IBLACKHOLE_DC
    kind: PatternKind = PatternKind.BLACKHOLE
    parallel: bool = False
    guard_limit: int | None = None
    search: Search = Search.COMBINATIONS
    workers: int | None = None

    def __post_init__(self) -> None:
        if self.max_size < 1:
            raise ValueError(f"max_size must be >= 1, got {self.max_size}")
        self.algorithm = Algorithm(self.algorithm)
        self.kind = PatternKind(self.kind)
        self.search = Search(self.search)


@dataclass
class PatternResult:
    algorithm: Algorithm
    kind: PatternKind
    max_size: int
    labels: tuple[str, ...]
    patterns_by_size: dict[int, list[NodeSet]] = field(default_factory=dict)
    timings_ms: dict[int, float] = field(default_factory=dict)
    funnel: dict[int, FunnelStats] | None = None

    def pattern_sets(self) -> dict[int, frozenset[NodeSet]]:
        return {i: frozenset(sets) for i, sets in self.patterns_by_size.items()}

    def all_patterns(self) -> list[NodeSet]:
        return [s for i in sorted(self.patterns_by_size) for s in self.patterns_by_size[i]]

    def counts(self) -> dict[int, int]:
        return {i: len(sets) for i, sets in sorted(self.patterns_by_size.items())}

    def labelled(self) -> dict[int, list[list[str]]]:
        """Patterns as sorted label lists, sizes ascending, sets sorted."""
        out = {}
        for i in sorted(self.patterns_by_size):
            out[i] = sorted(sorted(self.labels[v] for v in s) for s in self.patterns_by_size[i])
        return out

    def total_ms(self) -> float:
        return sum(self.timings_ms.values())


# -- bitmask search ---------------------------------------------------------

@dataclass
class _Scope:
    """A node subset renumbered 0..m-1 with successor/neighbour bitmasks.

    Bit ``m`` is a sentinel set in ``succ[k]`` when node ``k`` has a
    successor outside the scope, so such nodes always fail the out-check.
    """

    members: NodeSet
    succ: list[int]
    und: list[int]

    @property
    def size(self) -> int:
        return len(self.members)


def _build_scope(g: DirectedGraph, members: Sequence[int]) -> _Scope:
    members = tuple(members)
    local = {v: k for k, v in enumerate(members)}
    sentinel = 1 << len(members)
    succ = [0] * len(members)
    und = [0] * len(members)
    for k, v in enumerate(members):
        for s, _ in g.succ[v]:
            j = local.get(s)
            if j is None:
                succ[k] |= sentinel
            else:
                succ[k] |= 1 << j
                und[k] |= 1 << j
        for p, _ in g.pred[v]:
            j = local.get(p)
            if j is not None:
                und[k] |= 1 << j
    return _Scope(members, succ, und)


def _connected(mask: int, und: list[int], start: int) -> bool:
    seen = 1 << start
    frontier = seen
    while frontier:
        reach = 0
        while frontier:
            low = frontier & -frontier
            reach |= und[low.bit_length() - 1]
            frontier ^= low
        frontier = reach & mask & ~seen
        seen |= frontier
    return seen == mask


def _combination_search(succ: list[int], und: list[int], size: int) -> Iterator[tuple[int, ...]]:
    bits = [1 << k for k in range(len(succ))]
    for combo in combinations(range(len(succ)), size):
        mask = 0
        out = 0
        for k in combo:
            mask |= bits[k]
            out |= succ[k]
        if out & ~mask:
            continue
        if size > 1 and not _connected(mask, und, combo[0]):
            continue
        yield combo


def _connected_search(succ: list[int], und: list[int], size: int) -> Iterator[tuple[int, ...]]:
    """Enumerate each weakly connected ``size``-set once, keep blackholes.

    Standard extension scheme: every set is rooted at its smallest member and
    grown only with nodes that are not already adjacent to the partial set.
    """
    m = len(succ)
    full = (1 << m) - 1
    sentinel = 1 << m
    # a node with an escaping successor cannot be in any pattern of the scope
    usable = full
    for k in range(m):
        if succ[k] & sentinel:
            usable &= ~(1 << k)
    nbrs = [und[k] & usable for k in range(m)]

    def extend(sub: int, closed: int, ext: int, above: int, count: int):
        if count == size:
            out = 0
            s = sub
            while s:
                low = s & -s
                out |= succ[low.bit_length() - 1]
                s ^= low
            if not out & ~sub:
                yield sub
            return
        while ext:
            low = ext & -ext
            ext ^= low
            w = low.bit_length() - 1
            fresh = nbrs[w] & ~closed & above
            yield from extend(sub | low, closed | nbrs[w], ext | fresh, above, count + 1)

    for v in range(m):
        if not usable >> v & 1:
            continue
        above = full & ~((1 << (v + 1)) - 1)
        for sub in extend(1 << v, nbrs[v] | (1 << v), nbrs[v] & above, above, 1):
            yield tuple(k for k in range(m) if sub >> k & 1)


def _search_scope(scope: _Scope, size: int, search: Search) -> list[NodeSet]:
    if scope.size < size:
        return []
    if search is Search.CONNECTED:
        found = _connected_search(scope.succ, scope.und, size)
    else:
        found = _combination_search(scope.succ, scope.und, size)
    return [tuple(scope.members[k] for k in combo) for combo in found]


def _check_guard(count: int, limit: int, where: str) -> None:
    if count > limit:
        raise SearchSpaceTooLarge(count, limit, where)


def _scope_worker(args) -> list[NodeSet]:
    scope, size, search = args
    return _search_scope(scope, size, search)


def _finish(found: dict[int, set[NodeSet]]) -> dict[int, list[NodeSet]]:
    return {i: sorted(found[i]) for i in sorted(found)}


# -- algorithms -------------------------------------------------------------

def mine_brute_force(g: DirectedGraph, n: int, scope: Iterable[int] | None = None,
                     guard_limit: int | None = None) -> PatternResult:
    """Check every i-subset of ``scope`` (default: all nodes) for i = 1..n."""
    if n < 1:
        raise ValueError(f"max size must be >= 1, got {n}")
    limit = default_guard_limit() if guard_limit is None else guard_limit
    members = tuple(range(g.node_count)) if scope is None else node_set(scope)
    for v in members:
        g._check(v)
    predicted = sum(math.comb(len(members), i) for i in range(1, n + 1))
    _check_guard(predicted, limit, f"brute force over {len(members)} nodes up to size {n}")
    sc = _build_scope(g, members)
    result = PatternResult(Algorithm.BRUTE_FORCE, PatternKind.BLACKHOLE, n, g.labels)
    found: dict[int, set[NodeSet]] = {}
    for i in range(1, n + 1):
        t0 = time.perf_counter()
        found[i] = set(_search_scope(sc, i, Search.COMBINATIONS))
        result.timings_ms[i] = (time.perf_counter() - t0) * 1000.0
    result.patterns_by_size = _finish(found)
    return result


def _mine_pruned(g: DirectedGraph, n: int, divide: bool, guard_limit: int | None,
                 search: Search, parallel: bool, workers: int | None) -> PatternResult:
    if n < 1:
        raise ValueError(f"max size must be >= 1, got {n}")
    limit = default_guard_limit() if guard_limit is None else guard_limit
    search = Search(search)
    algo = Algorithm.IBLACKHOLE_DC if divide else Algorithm.IBLACKHOLE
    result = PatternResult(algo, PatternKind.BLACKHOLE, n, g.labels, funnel={})
    found: dict[int, set[NodeSet]] = {}
    pool = ProcessPoolExecutor(max_workers=workers) if (parallel and divide) else None
    try:
        t0 = time.perf_counter()
        for state in prune_sequence(g, n):
            i = state.size
            hits = set(state.emitted)
            survivors = state.final_nodes()
            if not divide:
                if search is Search.COMBINATIONS:
                    _check_guard(math.comb(len(survivors), i), limit,
                                 f"final list of {len(survivors)} nodes at size {i}")
                hits.update(_search_scope(_build_scope(g, survivors), i, search))
            else:
                jobs = []
                for comp in weak_components(g, within=survivors) if survivors else []:
                    if len(comp) < i:
                        continue
                    if search is Search.COMBINATIONS:
                        _check_guard(math.comb(len(comp), i), limit,
                                     f"component of {len(comp)} nodes at size {i}")
                    jobs.append((_build_scope(g, comp), i, search))
                if pool is not None and len(jobs) > 1:
                    for part in pool.map(_scope_worker, jobs):
                        hits.update(part)
                else:
                    for job in jobs:
                        hits.update(_scope_worker(job))
            found[i] = hits
            result.funnel[i] = state.stats
            t1 = time.perf_counter()
            result.timings_ms[i] = (t1 - t0) * 1000.0
            t0 = t1
    finally:
        if pool is not None:
            pool.shutdown()
    result.patterns_by_size = _finish(found)
    return result


def mine_iblackhole(g: DirectedGraph, n: int, guard_limit: int | None = None,
                    search: Search = Search.COMBINATIONS) -> PatternResult:
    """Prune for each size, then search the whole final list at once."""
    return _mine_pruned(g, n, False, guard_limit, search, False, None)


def mine_iblackhole_dc(g: DirectedGraph, n: int, guard_limit: int | None = None,
                       search: Search = Search.COMBINATIONS, parallel: bool = False,
                       workers: int | None = None) -> PatternResult:
    """Prune for each size, then search each weak component of the final list."""
    return _mine_pruned(g, n, True, guard_limit, search, parallel, workers)


def mine(g: DirectedGraph, cfg: MiningConfig) -> PatternResult:
    """Dispatch on ``cfg.algorithm``; volcanoes are mined on the reversed graph.

    Node ids and labels are shared between a graph and its reverse, so the
    returned sets refer to the original graph directly.
    """
    _, target = dualize(cfg.kind, g)
    if cfg.algorithm is Algorithm.BRUTE_FORCE:
        result = mine_brute_force(target, cfg.max_size, guard_limit=cfg.guard_limit)
    elif cfg.algorithm is Algorithm.IBLACKHOLE:
        result = mine_iblackhole(target, cfg.max_size, cfg.guard_limit, cfg.search)
    else:
        result = mine_iblackhole_dc(target, cfg.max_size, cfg.guard_limit, cfg.search,
                                    cfg.parallel, cfg.workers)
    result.kind = cfg.kind
    return result
