"""Seeded random digraphs for tests and benchmarks."""

from __future__ import annotations

import random

from .graph import DirectedGraph


def random_digraph(n: int, p: float, seed: int, prefix: str = "n") -> DirectedGraph:
    """Erdos-Renyi digraph: each ordered pair ``(u, v)``, ``u != v``, with probability ``p``."""
    rng = random.Random(seed)
    edges = [(u, v, 1.0) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return DirectedGraph([f"{prefix}{k}" for k in range(n)], edges)


def sparse_digraph(n: int, mean_out_degree: float, seed: int, prefix: str = "n") -> DirectedGraph:
    """Erdos-Renyi digraph tuned to the requested mean out-degree."""
    p = mean_out_degree / (n - 1) if n > 1 else 0.0
    return random_digraph(n, p, seed, prefix)
