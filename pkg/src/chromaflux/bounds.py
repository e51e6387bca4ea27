"""Lower bounds for both problems."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .instance import CHANNEL, MIGRATION, Instance, InstanceError

LB2_EXACT_MAX_NODES = 18


@dataclass(frozen=True)
class BoundsReport:
    lb1: int
    lb2: int
    lb2_exact: bool
    lb2_ratio: Fraction
    homogeneous_lb: Fraction | None = None
    balanced_local_lb: int | None = None


def balanced_local(d: int, k: int) -> int:
    """Fewest conflicts one node of degree ``d`` can have with ``k`` colors."""
    m, alpha = divmod(d, k)
    return alpha * (m + 1) ** 2 + (k - alpha) * m * m


def homogeneous_lower_bound(inst: Instance, k: int) -> tuple[Fraction, int]:
    """``(sum d_v^2 / k, sum of per-node balanced optima)``.

    Both bound the conflicts of every assignment with at most ``k`` colors
    per node; the second is never smaller than the first.
    """
    if inst.kind != CHANNEL:
        raise InstanceError("homogeneous lower bound needs a channel instance")
    if k < 1:
        raise InstanceError("k must be at least 1")
    degs = inst.degrees
    return Fraction(sum(d * d for d in degs), k), sum(balanced_local(d, k) for d in degs)


def conflict_lower_bound(inst: Instance) -> int:
    """Sum over nodes of the best split of ``d_v`` edges over ``C_v`` channels."""
    if inst.kind != CHANNEL:
        raise InstanceError("conflict lower bound needs a channel instance")
    return sum(balanced_local(d, c) for d, c in zip(inst.degrees, inst.capacities))


def lb1(inst: Instance) -> int:
    return max((math.ceil(d / c) for d, c in zip(inst.degrees, inst.capacities)), default=0)


def subset_ratio(inst: Instance, nodes) -> Fraction:
    """|E(S)| / floor(sum_{v in S} c_v / 2), or 0 when the set holds no edge."""
    s = set(nodes)
    inside = sum(1 for u, v in inst.ends if u in s and v in s)
    if inside == 0:
        return Fraction(0)
    return Fraction(inside, sum(inst.capacities[v] for v in s) // 2)


def _lb2_exact(inst: Instance) -> Fraction:
    n = inst.n_nodes
    masks = np.arange(1 << n, dtype=np.int64)
    bits = [((masks >> i) & 1).astype(np.int64) for i in range(n)]
    cap = np.zeros(1 << n, dtype=np.int64)
    for i, c in enumerate(inst.capacities):
        cap += c * bits[i]
    inside = np.zeros(1 << n, dtype=np.int64)
    for (u, v), mult in Counter(tuple(sorted(e)) for e in inst.ends).items():
        inside += mult * (bits[u] & bits[v])
    half = cap // 2
    ok = inside > 0
    if not ok.any():
        return Fraction(0)
    # exact rational max via cross-multiplication on candidates
    num, den = inside[ok], half[ok]
    best = int(np.argmax(num / den))
    cand = Fraction(int(num[best]), int(den[best]))
    ratios = num * int(cand.denominator) - den * int(cand.numerator)
    for j in np.flatnonzero(ratios > 0):
        f = Fraction(int(num[j]), int(den[j]))
        cand = max(cand, f)
    return cand


def _components(nodes: set[int], inst: Instance) -> list[set[int]]:
    seen, comps = set(), []
    for s in sorted(nodes):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for e in inst.incident(x):
                y = inst.other(e, x)
                if y in nodes and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _lb2_peeling(inst: Instance) -> Fraction:
    """Max ratio over V and every connected piece met while peeling.

    Repeatedly removes the node with the smallest inside-degree to capacity
    ratio.  Each evaluated set is a genuine subset, so the value is a valid
    (possibly weak) lower bound.
    """
    alive = set(range(inst.n_nodes))
    best = subset_ratio(inst, alive)
    deg = Counter()
    for u, v in inst.ends:
        deg[u] += 1
        deg[v] += 1
    while len(alive) > 1:
        for comp in _components(alive, inst):
            best = max(best, subset_ratio(inst, comp))
        x = min(alive, key=lambda v: (Fraction(deg[v], inst.capacities[v]), v))
        alive.discard(x)
        for e in inst.incident(x):
            y = inst.other(e, x)
            if y in alive:
                deg[y] -= 1
    return best


def lb2(inst: Instance, exact_threshold: int = LB2_EXACT_MAX_NODES) -> tuple[Fraction, bool]:
    """``(max subset ratio, exact?)``; exact by enumeration up to the threshold."""
    if inst.n_edges == 0:
        return Fraction(0), True
    if inst.n_nodes <= exact_threshold:
        return _lb2_exact(inst), True
    return _lb2_peeling(inst), False


def migration_lower_bounds(
    inst: Instance, exact_threshold: int = LB2_EXACT_MAX_NODES
) -> BoundsReport:
    if inst.kind != MIGRATION:
        raise InstanceError("migration lower bounds need a migration instance")
    ratio, exact = lb2(inst, exact_threshold)
    return BoundsReport(lb1(inst), math.ceil(ratio), exact, ratio)
