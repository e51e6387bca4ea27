"""Conflict accounting and solution validators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .instance import Instance, InstanceError, assignment_to_colors


@dataclass(frozen=True)
class ConflictReport:
    total: int
    per_vertex: dict[str, int]
    per_edge: dict[str, int]
    excess: int


def class_sizes(inst: Instance, colors: Sequence[int]) -> list[Counter]:
    """Per node, a Counter color -> number of incident edges with that color."""
    sizes = [Counter() for _ in range(inst.n_nodes)]
    for (u, v), c in zip(inst.ends, colors):
        sizes[u][c] += 1
        sizes[v][c] += 1
    return sizes


def conflicts_from_colors(inst: Instance, colors: Sequence[int]) -> int:
    """Sum over nodes of squared color-class sizes."""
    return sum(n * n for cnt in class_sizes(inst, colors) for n in cnt.values())


def conflict_report(inst: Instance, assignment: Mapping[str, int]) -> ConflictReport:
    """Conflict totals computed both per node and per edge.

    The per-edge value of an edge is the number of same-colored edges at
    each endpoint, the edge itself included.  Summed over edges this counts
    every conflicting pair twice and equals the per-node sum of squares;
    the two routes are computed independently and cross-checked.
    """
    colors = assignment_to_colors(inst, assignment)
    sizes = class_sizes(inst, colors)
    per_vertex = {
        nid: sum(n * n for n in sizes[i].values()) for i, nid in enumerate(inst.node_ids)
    }
    per_edge = {}
    for j, eid in enumerate(inst.edge_ids):
        u, v = inst.ends[j]
        c = colors[j]
        at_u = sum(1 for f in inst.incident(u) if colors[f] == c)
        at_v = sum(1 for f in inst.incident(v) if colors[f] == c)
        per_edge[eid] = at_u + at_v
    total = sum(per_vertex.values())
    if total != sum(per_edge.values()):
        raise AssertionError("per-vertex and per-edge conflict totals disagree")
    return ConflictReport(total, per_vertex, per_edge, total - 2 * inst.n_edges)


def validate_colors(inst: Instance, colors: Sequence[int]) -> list[str]:
    violations = []
    if len(colors) != inst.n_edges:
        return [f"assignment has {len(colors)} colors for {inst.n_edges} edges"]
    for j, c in enumerate(colors):
        if c < 1 or (inst.channels is not None and c > inst.channels):
            violations.append(f"edge {inst.edge_ids[j]}: color {c} outside [1, {inst.channels}]")
    for i, cnt in enumerate(class_sizes(inst, colors)):
        if len(cnt) > inst.capacities[i]:
            violations.append(
                f"node {inst.node_ids[i]}: {len(cnt)} distinct colors exceed C_v={inst.capacities[i]}"
            )
    used = len(set(colors))
    if inst.channels is not None and used > inst.channels:
        violations.append(f"{used} distinct colors exceed C_G={inst.channels}")
    return violations


def validate_assignment(inst: Instance, assignment: Mapping[str, int]) -> list[str]:
    """Every violated card or channel limit; an empty list means feasible."""
    unknown = [eid for eid in assignment if eid not in inst._edge_index]
    missing = [eid for eid in inst.edge_ids if eid not in assignment]
    violations = [f"edge {eid}: not in instance" for eid in unknown]
    violations += [f"edge {eid}: uncolored" for eid in missing]
    if missing:
        return violations
    return violations + validate_colors(inst, assignment_to_colors(inst, assignment))


def validate_schedule(inst: Instance, rounds: Sequence[Sequence[str]]) -> list[str]:
    """Check the rounds partition the edges and respect every c_v."""
    violations = []
    seen: dict[str, int] = {}
    for r, edges in enumerate(rounds, start=1):
        load = Counter()
        for eid in edges:
            if eid not in inst._edge_index:
                violations.append(f"round {r}: edge {eid} not in instance")
                continue
            if eid in seen:
                violations.append(f"edge {eid} scheduled in rounds {seen[eid]} and {r}")
            else:
                seen[eid] = r
            u, v = inst.ends[inst.edge_index(eid)]
            load[u] += 1
            load[v] += 1
        for i, n in sorted(load.items()):
            if n > inst.capacities[i]:
                violations.append(
                    f"round {r}: node {inst.node_ids[i]} runs {n} transfers > c_v={inst.capacities[i]}"
                )
    for eid in inst.edge_ids:
        if eid not in seen:
            violations.append(f"edge {eid} never scheduled")
    return violations


def schedule_from_colors_ok(inst: Instance, colors: Sequence[int]) -> bool:
    """Fast check that no node carries more than c_v edges of one color."""
    return all(
        max(cnt.values(), default=0) <= inst.capacities[i]
        for i, cnt in enumerate(class_sizes(inst, colors))
    )


def require_valid(violations: list[str], what: str) -> None:
    if violations:
        raise InstanceError(f"invalid {what}: " + "; ".join(violations[:10]))
