"""Optimal migration schedules when every transfer capacity is even.

The transfer graph is padded until each node has degree exactly
``c_v * D`` (``D`` the degree bound), a closed Euler trail orients it into a
bipartite out/in graph, and ``D`` rounds are peeled off as subgraphs in
which every side has degree exactly ``c_v / 2``.  Each round moves at most
``c_v`` items at ``v``, so the schedule meets the degree bound exactly.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .balanced import ContractError
from .bounds import lb1
from .instance import MIGRATION, Instance, InstanceError

LOOP, PAIRING = "loop", "pairing"


@dataclass
class PaddedGraph:
    """Real edges ``0..m-1`` followed by dummies; loops count 2 toward degree."""

    base: Instance
    delta: int
    ends: list[tuple[int, int]]
    dummies: list[tuple[str, int, int, str]] = field(default_factory=list)

    @property
    def targets(self) -> list[int]:
        return [c * self.delta for c in self.base.capacities]

    def degrees(self) -> list[int]:
        deg = [0] * self.base.n_nodes
        for u, v in self.ends:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_dummy(self, j: int) -> bool:
        return j >= self.base.n_edges


@dataclass
class OrientedBipartite:
    """Arc ``j`` runs from ``tails[j]``'s out-copy to ``heads[j]``'s in-copy."""

    n_nodes: int
    tails: list[int]
    heads: list[int]

    def out_degrees(self, alive=None) -> list[int]:
        deg = [0] * self.n_nodes
        for j in range(len(self.tails)) if alive is None else alive:
            deg[self.tails[j]] += 1
        return deg

    def in_degrees(self, alive=None) -> list[int]:
        deg = [0] * self.n_nodes
        for j in range(len(self.heads)) if alive is None else alive:
            deg[self.heads[j]] += 1
        return deg


@dataclass
class EvenPlan:
    padded: PaddedGraph
    trail: list[tuple[int, int, int]]
    bipartite: OrientedBipartite
    matchings: list[list[int]]
    rounds: list[list[str]]


def check_even(inst: Instance) -> None:
    if inst.kind != MIGRATION:
        raise InstanceError("migration scheduling needs a migration instance")
    odd = [nid for nid, c in zip(inst.node_ids, inst.capacities) if c % 2]
    if odd:
        raise InstanceError(f"capacities must all be even; odd at {', '.join(odd[:5])}")


def pad_graph(inst: Instance) -> PaddedGraph:
    check_even(inst)
    g = PaddedGraph(inst, lb1(inst), list(inst.ends))
    deg = g.degrees()
    odd = []
    for v, target in enumerate(g.targets):
        while deg[v] < target - 1:
            g.dummies.append((f"~loop{len(g.dummies) + 1}", v, v, LOOP))
            g.ends.append((v, v))
            deg[v] += 2
        if deg[v] < target:
            odd.append(v)
    # targets and degree sums are both even, so odd nodes come in pairs
    assert len(odd) % 2 == 0
    for u, v in zip(odd[::2], odd[1::2]):
        g.dummies.append((f"~pair{len(g.dummies) + 1}", u, v, PAIRING))
        g.ends.append((u, v))
    if g.degrees() != g.targets:
        raise ContractError("padding missed a degree target")
    return g


def euler_cycle(g: PaddedGraph) -> list[tuple[int, int, int]]:
    """Closed trails covering every edge once, as ``(edge, from, to)`` triples.

    Hierholzer's algorithm per connected component, started at the smallest
    node with an edge; components follow each other in that order.
    """
    n = g.base.n_nodes
    inc: list[list[int]] = [[] for _ in range(n)]
    for j, (u, v) in enumerate(g.ends):
        inc[u].append(j)
        if v != u:
            inc[v].append(j)
    ptr = [0] * n
    done = [False] * len(g.ends)
    trail: list[tuple[int, int, int]] = []
    for s in range(n):
        if ptr[s] == len(inc[s]) or all(done[j] for j in inc[s]):
            continue
        stack: list[tuple[int, int, int]] = [(-1, -1, s)]
        piece = []
        while stack:
            x = stack[-1][2]
            while ptr[x] < len(inc[x]) and done[inc[x][ptr[x]]]:
                ptr[x] += 1
            if ptr[x] == len(inc[x]):
                piece.append(stack.pop())
                continue
            j = inc[x][ptr[x]]
            done[j] = True
            u, v = g.ends[j]
            stack.append((j, x, v if x == u else u))
        trail.extend(reversed(piece[:-1]))
    if len(trail) != len(g.ends):
        raise ContractError("euler trail does not cover the padded graph")
    return trail


def orient_to_bipartite(g: PaddedGraph, trail) -> OrientedBipartite:
    tails = [0] * len(g.ends)
    heads = [0] * len(g.ends)
    for j, x, y in trail:
        tails[j], heads[j] = x, y
    h = OrientedBipartite(g.base.n_nodes, tails, heads)
    half = [t // 2 for t in g.targets]
    if h.out_degrees() != half or h.in_degrees() != half:
        raise ContractError("orientation is not balanced")
    return h


def extract_cv2_matching(h: OrientedBipartite, alive: list[int], quota: list[int]) -> list[int]:
    """Arcs among ``alive`` giving every out- and in-copy exactly ``quota[v]`` arcs.

    Unit arcs between the same pair are merged into one capacity, a max
    flow is computed, and the flow on each pair is mapped back to the
    lowest-numbered arcs of that pair.
    """
    n = h.n_nodes
    if sum(quota) == 0:
        return []
    pool: dict[tuple[int, int], list[int]] = defaultdict(list)
    for j in sorted(alive):
        pool[(h.tails[j], h.heads[j])].append(j)
    src, sink = 2 * n, 2 * n + 1
    rows, cols, caps = [], [], []
    for v in range(n):
        rows += [src, n + v]
        cols += [v, sink]
        caps += [quota[v], quota[v]]
    for (u, v), arcs in pool.items():
        rows.append(u)
        cols.append(n + v)
        caps.append(len(arcs))
    graph = csr_matrix(
        (np.asarray(caps, dtype=np.int32), (rows, cols)), shape=(2 * n + 2, 2 * n + 2)
    )
    res = maximum_flow(graph, src, sink)
    if res.flow_value != sum(quota):
        raise ContractError(f"max flow {res.flow_value} below quota {sum(quota)}")
    flow = res.flow.tocoo()
    chosen = []
    for a, b, f in zip(flow.row, flow.col, flow.data):
        if f > 0 and a < n and n <= b < 2 * n:
            chosen += pool[(int(a), int(b - n))][: int(f)]
    return sorted(chosen)


def plan_even(inst: Instance) -> EvenPlan:
    g = pad_graph(inst)
    trail = euler_cycle(g)
    h = orient_to_bipartite(g, trail)
    quota = [c // 2 for c in inst.capacities]
    alive = set(range(len(g.ends)))
    matchings = []
    for _ in range(g.delta):
        m = extract_cv2_matching(h, sorted(alive), quota)
        alive.difference_update(m)
        matchings.append(m)
    if alive:
        raise ContractError("arcs left after peeling every round")
    rounds = [[inst.edge_ids[j] for j in m if not g.is_dummy(j)] for m in matchings]
    return EvenPlan(g, trail, h, matchings, [r for r in rounds if r])


def schedule_even(inst: Instance) -> list[list[str]]:
    return plan_even(inst).rounds


def explain_even(plan: EvenPlan) -> list[str]:
    g, inst = plan.padded, plan.padded.base
    name = inst.node_ids

    def label(j):
        return g.dummies[j - inst.n_edges][0] if g.is_dummy(j) else inst.edge_ids[j]

    lines = [f"degree bound {g.delta}; targets " + " ".join(
        f"{name[v]}:{t}" for v, t in enumerate(g.targets))]
    for eid, u, v, kind in g.dummies:
        lines.append(f"dummy {eid} {kind} {name[u]} {name[v]}")
    lines.append("trail " + " ".join(f"{label(j)}:{name[x]}>{name[y]}" for j, x, y in plan.trail))
    for i, m in enumerate(plan.matchings, 1):
        lines.append(f"matching {i} " + " ".join(
            f"{label(j)}:{name[plan.bipartite.tails[j]]}>{name[plan.bipartite.heads[j]]}" for j in m))
    return lines
