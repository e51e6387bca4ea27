"""Extended greedy for networks where every node has either 1 or k cards.

A node with a single card puts all its edges on one channel, so a connected
group of such nodes (a cluster) shares one color.  Each cluster picks the
color least used at its k-card neighbours, then the edges between k-card
nodes are colored by the plain greedy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .greedy import greedy_colors
from .instance import CHANNEL, Instance, InstanceError


@dataclass(frozen=True)
class ClusterDecomposition:
    clusters: list[list[int]]
    internal: list[list[int]]
    boundary: list[list[int]]
    rest: list[int]

    def cluster_of(self) -> dict[int, int]:
        return {v: i for i, members in enumerate(self.clusters) for v in members}


def _check(inst: Instance, k: int | None = None) -> int:
    if inst.kind != CHANNEL:
        raise InstanceError("channel assignment needs a channel instance")
    values = set(inst.capacities)
    big = values - {1}
    if len(big) > 1:
        raise InstanceError(f"capacities must take the values 1 and k only, got {sorted(values)}")
    if k is None:
        k = next(iter(big), 1)
    if big and big != {k}:
        raise InstanceError(f"capacities other than 1 must equal k={k}")
    if k < 1 or k > inst.channels:
        raise InstanceError(f"k={k} must lie in 1..C_G={inst.channels}")
    return k


def find_clusters(inst: Instance) -> ClusterDecomposition:
    """Connected groups of 1-card nodes with their internal and boundary edges.

    Clusters are listed by smallest member index; members and edges ascend.
    """
    _check(inst)
    single = [c == 1 for c in inst.capacities]
    label = [-1] * inst.n_nodes
    clusters: list[list[int]] = []
    for s in range(inst.n_nodes):
        if not single[s] or label[s] >= 0:
            continue
        label[s] = len(clusters)
        members, stack = [s], [s]
        while stack:
            x = stack.pop()
            for e in inst.incident(x):
                y = inst.other(e, x)
                if single[y] and label[y] < 0:
                    label[y] = label[s]
                    members.append(y)
                    stack.append(y)
        clusters.append(sorted(members))
    internal: list[list[int]] = [[] for _ in clusters]
    boundary: list[list[int]] = [[] for _ in clusters]
    rest = []
    for e, (u, v) in enumerate(inst.ends):
        if single[u] and single[v]:
            internal[label[u]].append(e)
        elif single[u] or single[v]:
            boundary[label[u] if single[u] else label[v]].append(e)
        else:
            rest.append(e)
    return ClusterDecomposition(clusters, internal, boundary, rest)


def extended_greedy_colors(inst: Instance, k: int | None = None) -> list[int]:
    k = _check(inst, k)
    dec = find_clusters(inst)
    single = [c == 1 for c in inst.capacities]
    counts = [[0] * k for _ in range(inst.n_nodes)]
    colors = [0] * inst.n_edges
    for inner, border in zip(dec.internal, dec.boundary):
        outside = [v if single[u] else u for u, v in (inst.ends[e] for e in border)]
        # an empty boundary scores every color 0, so the lowest one wins
        best = min(range(k), key=lambda c: sum(counts[x][c] for x in outside))
        for e in inner + border:
            colors[e] = best + 1
            for x in inst.ends[e]:
                counts[x][best] += 1
    return greedy_colors(inst, k, dec.rest, counts, colors)


def extended_greedy(inst: Instance, k: int | None = None) -> dict[str, int]:
    return dict(zip(inst.edge_ids, extended_greedy_colors(inst, k)))


def conflicts_at(inst: Instance, colors, nodes) -> int:
    """Sum of squared class sizes over ``nodes`` only."""
    total = 0
    for v in nodes:
        sizes: dict[int, int] = {}
        for e in inst.incident(v):
            sizes[colors[e]] = sizes.get(colors[e], 0) + 1
        total += sum(s * s for s in sizes.values())
    return total
