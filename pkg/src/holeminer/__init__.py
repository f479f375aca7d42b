"""Blackhole and volcano pattern mining for directed graphs."""

from .graph import (
    DirectedGraph,
    GraphError,
    LoadReport,
    NodeSet,
    closure,
    closure_bounded,
    from_edges,
    in_degree,
    induced_subgraph,
    is_weakly_connected,
    load_edge_list,
    node_set,
    out_degree,
    read_edge_list,
    reverse,
    weak_components,
)
from .miners import (
    Algorithm,
    MiningConfig,
    PatternResult,
    Search,
    SearchSpaceTooLarge,
    mine,
    mine_brute_force,
    mine_iblackhole,
    mine_iblackhole_dc,
)
from .patterns import (
    PatternKind,
    WeightSummary,
    boundary_weights,
    dualize,
    is_simplified_blackhole,
    is_simplified_volcano,
    satisfies_ratio,
)

__version__ = "0.1.0"
