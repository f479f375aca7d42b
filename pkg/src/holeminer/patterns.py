"""Blackhole/volcano predicates and the reversal duality between them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

from .graph import DirectedGraph, GraphError, NodeSet, _checked_set, is_weakly_connected, reverse


class PatternKind(str, enum.Enum):
    BLACKHOLE = "blackhole"
    VOLCANO = "volcano"


@dataclass(frozen=True)
class WeightSummary:
    in_weight: float
    out_weight: float


def _nonempty(g: DirectedGraph, members: Iterable[int]) -> NodeSet:
    s = _checked_set(g, members)
    if not s:
        raise GraphError("pattern predicates need a non-empty node set")
    return s


def boundary_weights(g: DirectedGraph, members: Iterable[int]) -> WeightSummary:
    """Total weight entering and leaving ``members`` across its boundary."""
    s = _nonempty(g, members)
    inside = set(s)
    w_in = 0.0
    w_out = 0.0
    for v in s:
        for u, w in g.pred[v]:
            if u not in inside:
                w_in += w
        for u, w in g.succ[v]:
            if u not in inside:
                w_out += w
    return WeightSummary(w_in, w_out)


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.inf if num > 0 else math.nan
    return num / den


def satisfies_ratio(g: DirectedGraph, members: Iterable[int], kind: PatternKind, theta: float) -> bool:
    """General weighted definition: connectivity plus boundary ratio above ``theta``.

    A zero denominator counts as an infinite ratio when the numerator is
    positive; ``0/0`` never satisfies the predicate.
    """
    if not theta > 0:
        raise GraphError(f"theta must be positive, got {theta}")
    s = _nonempty(g, members)
    if len(s) > 1 and not is_weakly_connected(g, s):
        return False
    bw = boundary_weights(g, s)
    if PatternKind(kind) is PatternKind.BLACKHOLE:
        r = _ratio(bw.in_weight, bw.out_weight)
    else:
        r = _ratio(bw.out_weight, bw.in_weight)
    return r > theta  # nan compares False


def is_simplified_blackhole(g: DirectedGraph, members: Iterable[int]) -> bool:
    """Weakly connected (or singleton) with no edge leaving the set."""
    s = _nonempty(g, members)
    inside = set(s)
    for v in s:
        for u, _ in g.succ[v]:
            if u not in inside:
                return False
    return len(s) == 1 or is_weakly_connected(g, s)


def is_simplified_volcano(g: DirectedGraph, members: Iterable[int]) -> bool:
    """Direct volcano check (no edge entering the set), evaluated without reversal.

    Kept separate from the reversal route so the two can be checked against
    each other.
    """
    s = _nonempty(g, members)
    inside = set(s)
    for v in s:
        for u, _ in g.pred[v]:
            if u not in inside:
                return False
    return len(s) == 1 or is_weakly_connected(g, s)


def dualize(kind: PatternKind, g: DirectedGraph) -> tuple[PatternKind, DirectedGraph]:
    """Map a mining problem to an equivalent blackhole problem.

    Volcanoes of ``g`` are exactly the blackholes of ``reverse(g)``.
    """
    if PatternKind(kind) is PatternKind.VOLCANO:
        return PatternKind.BLACKHOLE, reverse(g)
    return PatternKind.BLACKHOLE, g
