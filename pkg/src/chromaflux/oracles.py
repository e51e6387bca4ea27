"""Exhaustive reference solvers for tiny instances."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .instance import CHANNEL, MIGRATION, Instance, InstanceError


class TooLarge(Exception):
    """The instance or the search exceeded the oracle limits."""


@dataclass(frozen=True)
class OracleLimits:
    max_edges: int = 10
    max_colors: int = 4
    max_rounds_depth: int = 12
    time_budget: float = 60.0


def _check(inst: Instance, limits: OracleLimits):
    if inst.n_edges > limits.max_edges:
        raise TooLarge(f"{inst.n_edges} edges exceed the oracle limit of {limits.max_edges}")


def min_conflicts_exact(
    inst: Instance, k: int | None = None, limits: OracleLimits = OracleLimits()
) -> tuple[int, dict[str, int]]:
    """Minimum total conflicts over all feasible assignments.

    The palette has ``k`` colors (default ``C_G``); each node may use at most
    ``C_v`` distinct ones.  Colors are introduced in increasing order, which
    removes palette symmetry without losing optima; among optimal
    assignments the lexicographically least color vector is returned.
    """
    if inst.kind != CHANNEL:
        raise InstanceError("conflict oracle needs a channel instance")
    _check(inst, limits)
    q = inst.channels if k is None else k
    if q > limits.max_colors:
        raise TooLarge(f"{q} colors exceed the oracle limit of {limits.max_colors}")
    n, m = inst.n_nodes, inst.n_edges
    ends, caps = inst.ends, inst.capacities
    counts = [[0] * (q + 1) for _ in range(n)]
    distinct = [0] * n
    colors = [0] * m
    best = [math.inf, None]
    deadline = time.monotonic() + limits.time_budget

    def rec(j: int, cost: int, top: int):
        # every remaining edge adds at least 2
        if cost + 2 * (m - j) >= best[0]:
            return
        if j == m:
            best[0], best[1] = cost, list(colors)
            return
        if time.monotonic() > deadline:
            raise TooLarge("oracle time budget exhausted")
        u, v = ends[j]
        for c in range(1, min(top + 1, q) + 1):
            new_u, new_v = counts[u][c] == 0, counts[v][c] == 0
            if (new_u and distinct[u] == caps[u]) or (new_v and distinct[v] == caps[v]):
                continue
            add = 2 * counts[u][c] + 1 + 2 * counts[v][c] + 1
            counts[u][c] += 1
            counts[v][c] += 1
            distinct[u] += new_u
            distinct[v] += new_v
            colors[j] = c
            rec(j + 1, cost + add, max(top, c))
            counts[u][c] -= 1
            counts[v][c] -= 1
            distinct[u] -= new_u
            distinct[v] -= new_v

    rec(0, 0, 0)
    if best[1] is None:
        if m == 0:
            return 0, {}
        raise InstanceError("no feasible assignment exists")
    return best[0], dict(zip(inst.edge_ids, best[1]))


def min_rounds_exact(
    inst: Instance, limits: OracleLimits = OracleLimits()
) -> tuple[int, list[list[str]]]:
    """Fewest rounds, by iterative deepening from the degree bound."""
    if inst.kind != MIGRATION:
        raise InstanceError("round oracle needs a migration instance")
    _check(inst, limits)
    m = inst.n_edges
    if m == 0:
        return 0, []
    ends, caps = inst.ends, inst.capacities
    deadline = time.monotonic() + limits.time_budget
    lower = max(math.ceil(d / c) for d, c in zip(inst.degrees, caps))

    for r in range(lower, limits.max_rounds_depth + 1):
        load = [[0] * r for _ in range(inst.n_nodes)]
        cls = [0] * m

        def rec(j: int, top: int) -> bool:
            if j == m:
                return True
            if time.monotonic() > deadline:
                raise TooLarge("oracle time budget exhausted")
            u, v = ends[j]
            for c in range(min(top + 1, r - 1) + 1):
                if load[u][c] < caps[u] and load[v][c] < caps[v]:
                    load[u][c] += 1
                    load[v][c] += 1
                    cls[j] = c
                    if rec(j + 1, max(top, c)):
                        return True
                    load[u][c] -= 1
                    load[v][c] -= 1
            return False

        if rec(0, -1):
            rounds: list[list[str]] = [[] for _ in range(r)]
            for eid, c in zip(inst.edge_ids, cls):
                rounds[c].append(eid)
            return r, rounds
    raise TooLarge(f"no schedule within {limits.max_rounds_depth} rounds")
