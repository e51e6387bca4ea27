"""Greedy channel assignment for homogeneous networks (every C_v = k)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .instance import CHANNEL, Instance, InstanceError

ORDERS = ("input", "random")
VARIANTS = ("deterministic", "randomized", "derandomized")


@dataclass(frozen=True)
class GreedyConfig:
    edge_order: str = "input"
    variant: str = "deterministic"
    seed: int | None = None

    def __post_init__(self):
        if self.edge_order not in ORDERS:
            raise ValueError(f"edge_order must be one of {ORDERS}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        needs_seed = self.edge_order == "random" or self.variant == "randomized"
        if needs_seed and self.seed is None:
            raise ValueError("a seed is required for random edge order or the randomized variant")


def check_homogeneous(inst: Instance, k: int) -> None:
    if inst.kind != CHANNEL:
        raise InstanceError("channel assignment needs a channel instance")
    if k < 1:
        raise InstanceError("k must be at least 1")
    if k > inst.channels:
        raise InstanceError(f"k={k} exceeds the channel budget C_G={inst.channels}")
    bad = [nid for nid, c in zip(inst.node_ids, inst.capacities) if c != k]
    if bad:
        raise InstanceError(f"instance is not homogeneous with C_v={k}: nodes {', '.join(bad[:5])}")


def edge_order(inst: Instance, cfg: GreedyConfig) -> list[int]:
    order = list(range(inst.n_edges))
    if cfg.edge_order == "random":
        np.random.default_rng(cfg.seed).shuffle(order)
    return order


def greedy_colors(inst: Instance, k: int, order=None, counts=None, colors=None) -> list[int]:
    """Color edges one at a time with the color least used around them.

    ``counts[v][c]`` is the number of already colored edges at ``v`` with
    color ``c`` (0-based); ties go to the lowest color.  ``counts`` and
    ``colors`` may be pre-seeded so that callers can run the greedy over a
    subset of edges on top of a partial coloring.
    """
    if counts is None:
        counts = [[0] * k for _ in range(inst.n_nodes)]
    if colors is None:
        colors = [0] * inst.n_edges
    for e in range(inst.n_edges) if order is None else order:
        u, v = inst.ends[e]
        cu, cv = counts[u], counts[v]
        best = min(range(k), key=lambda c: cu[c] + cv[c])
        cu[best] += 1
        cv[best] += 1
        colors[e] = best + 1
    return colors


def _node_expectation(cnt, r: int, k: int) -> Fraction:
    s = sum(cnt)
    return sum(n * n for n in cnt) + Fraction(2 * r * s + r * (k - 1) + r * r, k)


def expected_conflicts(counts, uncolored, k: int) -> Fraction:
    """Expected total conflicts if every uncolored edge picks a uniform color.

    At a node with colored class sizes ``n_i`` (summing to ``s``) and ``r``
    uncolored incident edges, E[sum_i (n_i + X_i)^2] equals
    ``sum n_i^2 + 2rs/k + r(1 - 1/k) + r^2/k``.  This is the potential the
    derandomized greedy drives down one edge at a time.
    """
    return sum((_node_expectation(cnt, r, k) for cnt, r in zip(counts, uncolored)), Fraction(0))


def derandomized_colors(inst: Instance, k: int, order=None) -> list[int]:
    counts = [[0] * k for _ in range(inst.n_nodes)]
    uncolored = inst.degrees
    colors = [0] * inst.n_edges
    for e in range(inst.n_edges) if order is None else order:
        u, v = inst.ends[e]
        uncolored[u] -= 1
        uncolored[v] -= 1
        best, best_val = 0, None
        for c in range(k):
            # only the terms of u and v depend on the choice
            counts[u][c] += 1
            counts[v][c] += 1
            val = _node_expectation(counts[u], uncolored[u], k) + _node_expectation(
                counts[v], uncolored[v], k
            )
            counts[u][c] -= 1
            counts[v][c] -= 1
            if best_val is None or val < best_val:
                best, best_val = c, val
        counts[u][best] += 1
        counts[v][best] += 1
        colors[e] = best + 1
    return colors


def greedy_assign(inst: Instance, k: int, cfg: GreedyConfig = GreedyConfig()) -> dict[str, int]:
    """Greedy assignment using colors ``1..k`` only, whatever ``C_G`` is."""
    check_homogeneous(inst, k)
    order = edge_order(inst, cfg)
    if cfg.variant == "randomized":
        rng = np.random.default_rng(cfg.seed)
        colors = [int(c) for c in rng.integers(1, k + 1, size=inst.n_edges)]
    elif cfg.variant == "derandomized":
        colors = derandomized_colors(inst, k, order)
    else:
        colors = greedy_colors(inst, k, order)
    return dict(zip(inst.edge_ids, colors))


def derandomized_assign(inst: Instance, k: int) -> dict[str, int]:
    return greedy_assign(inst, k, GreedyConfig(variant="derandomized"))
