"""Instance families for tests, acceptance runs and benchmarking.

``small_multigraphs`` enumerates every multigraph up to isomorphism on a few
nodes, without isolated nodes, with a bounded number of edges.  The random
generators are seeded numpy streams so that every family is reproducible.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .instance import CHANNEL, MIGRATION, Instance


def _canon(n: int, mult: dict, labels=None) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(
            sorted((min(perm[u], perm[v]), max(perm[u], perm[v]), c) for (u, v), c in mult.items())
        )
        if labels is not None:
            relabeled = [0] * n
            for i in range(n):
                relabeled[perm[i]] = labels[i]
            key = (tuple(relabeled), key)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def small_multigraphs(max_nodes: int = 4, max_edges: int = 8, simple_upto: int = 5):
    """Edge lists ``(n, ((u, v), ...))`` of all small multigraphs up to isomorphism.

    Multigraphs on up to ``max_nodes`` nodes and simple graphs on up to
    ``simple_upto`` nodes, each with 1..max_edges edges and no isolated node.
    """
    out, seen = [], set()
    for n in range(2, max(max_nodes, simple_upto) + 1):
        pairs = list(itertools.combinations(range(n), 2))
        cap = max_edges if n <= max_nodes else 1
        for mults in itertools.product(range(cap + 1), repeat=len(pairs)):
            total = sum(mults)
            if total == 0 or total > max_edges:
                continue
            touched = {x for p, c in zip(pairs, mults) if c for x in p}
            if len(touched) != n:
                continue
            mult = {p: c for p, c in zip(pairs, mults) if c}
            key = (n, _canon(n, mult))
            if key in seen:
                continue
            seen.add(key)
            edges = tuple(p for p, c in zip(pairs, mults) for _ in range(c))
            out.append((n, edges))
    return tuple(out)


def labeled_variants(n: int, edges, values):
    """Capacity vectors over ``values`` for one graph, up to isomorphism."""
    mult: dict = {}
    for p in edges:
        mult[p] = mult.get(p, 0) + 1
    seen = set()
    for caps in itertools.product(values, repeat=n):
        key = _canon(n, mult, caps)
        if key in seen:
            continue
        seen.add(key)
        yield caps


def channel_instance(n: int, edges, caps, channels: int) -> Instance:
    if isinstance(caps, int):
        caps = [caps] * n
    return Instance.from_edges(CHANNEL, list(caps), edges, channels=channels)


def migration_instance(n: int, edges, caps) -> Instance:
    if isinstance(caps, int):
        caps = [caps] * n
    return Instance.from_edges(MIGRATION, list(caps), edges)


def random_multigraph(rng: np.random.Generator, n: int, m: int, simple: bool = False):
    """``m`` uniformly random non-loop edges on ``n`` nodes (fewer if simple saturates)."""
    if simple:
        pairs = list(itertools.combinations(range(n), 2))
        m = min(m, len(pairs))
        pick = rng.choice(len(pairs), size=m, replace=False)
        return [pairs[i] for i in sorted(pick)]
    edges = []
    while len(edges) < m:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            edges.append((u, v))
    return edges


def random_channel_instances(seed: int, count: int, max_nodes=10, max_edges=50, max_k=5):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, max_nodes + 1))
        m = int(rng.integers(0, max_edges + 1))
        k = int(rng.integers(1, max_k + 1))
        yield channel_instance(n, random_multigraph(rng, n, m), k, k), k


def random_simple_graph(rng: np.random.Generator, n: int, p: float):
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def random_migration_instances(seed: int, count: int, caps=(1, 2, 3), max_nodes=12, max_edges=60):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, max_nodes + 1))
        m = int(rng.integers(1, max_edges + 1))
        c = [int(x) for x in rng.choice(caps, size=n)]
        yield migration_instance(n, random_multigraph(rng, n, m), c)
