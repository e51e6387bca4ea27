"""Near-optimal migration schedules for arbitrary transfer capacities.

A color class is a set of transfers in which node ``v`` takes part at most
``c_v`` times, i.e. one round.  Starting from a greedy partial coloring with
``q`` colors, phase 1 colors edges through alternating-trail flips until the
uncolored edges form a simple graph with small components, adding a color
only when a lower-bound witness shows the palette is nearly exhausted.
Phase 2 splits every node into ``c_v`` copies, colors the remaining simple
graph properly and merges the copies back.

Alternating trails are edge-distinct walks and may revisit nodes.  Flipping
a maximal ab-trail whose start is missing ``b`` never overloads a node: an
internal visit swaps one ``a`` for one ``b``, and a walk that got stuck at
its end has already used up every edge of the color that node gains.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .balanced import ContractError
from .bounds import lb1
from .instance import MIGRATION, Instance, InstanceError
from .vizing import vizing_colors


@dataclass
class MigrationColoring:
    """Partial coloring with ``q`` colors; ``counts[v][c]`` for ``c`` in 1..q."""

    inst: Instance
    q: int
    colors: list[int] = field(init=False)
    counts: list[list[int]] = field(init=False)

    def __post_init__(self):
        self.colors = [0] * self.inst.n_edges
        self.counts = [[0] * (self.q + 1) for _ in range(self.inst.n_nodes)]

    def add_color(self) -> int:
        self.q += 1
        for row in self.counts:
            row.append(0)
        return self.q

    def set_color(self, e: int, c: int) -> None:
        old = self.colors[e]
        for x in self.inst.ends[e]:
            if old:
                self.counts[x][old] -= 1
            if c:
                self.counts[x][c] += 1
        self.colors[e] = c

    def fits(self, e: int, c: int) -> bool:
        caps = self.inst.capacities
        return all(self.counts[x][c] < caps[x] for x in self.inst.ends[e])

    def missing(self, v: int) -> list[int]:
        cap, row = self.inst.capacities[v], self.counts[v]
        return [c for c in range(1, self.q + 1) if row[c] < cap]

    def strongly_missing(self, v: int) -> list[int]:
        cap, row = self.inst.capacities[v], self.counts[v]
        return [c for c in range(1, self.q + 1) if row[c] < cap - 1]

    def lightly_missing(self, v: int) -> list[int]:
        cap, row = self.inst.capacities[v], self.counts[v]
        return [c for c in range(1, self.q + 1) if row[c] == cap - 1]

    def overloaded(self) -> list[int]:
        caps = self.inst.capacities
        return [v for v, row in enumerate(self.counts) if max(row[1:], default=0) > caps[v]]

    def check_recount(self) -> bool:
        fresh = [[0] * (self.q + 1) for _ in range(self.inst.n_nodes)]
        for (u, v), c in zip(self.inst.ends, self.colors):
            if c:
                fresh[u][c] += 1
                fresh[v][c] += 1
        return fresh == self.counts

    def uncolored(self) -> list[int]:
        return [e for e, c in enumerate(self.colors) if c == 0]

    def snapshot(self):
        return self.q, list(self.colors), [list(r) for r in self.counts]

    def restore(self, snap) -> None:
        self.q, colors, counts = snap
        self.colors, self.counts = list(colors), [list(r) for r in counts]


@dataclass
class PathStep:
    """One growth step: trail ``edges`` from ``x`` leaving on ``b``; ``anchor = (x, y)``."""

    anchor: int
    x: int
    y: int
    a: int
    b: int
    edges: list[int]


@dataclass
class Orbit:
    kind: str
    nodes: set[int]
    edges: list[int]
    seed: tuple[int, int] | None = None
    paths: list[PathStep] = field(default_factory=list)
    reserved: set[int] = field(default_factory=set)

    def used_colors(self, col: MigrationColoring) -> set[int]:
        return {col.colors[e] for e in self.edges if col.colors[e]} | self.reserved

    def free_colors(self, col: MigrationColoring) -> list[int]:
        used = self.used_colors(col)
        return [c for c in range(1, col.q + 1) if c not in used]


@dataclass(frozen=True)
class Witness:
    kind: str
    q: int
    size: int
    bound: Fraction
    holds: bool


@dataclass
class GeneralTrace:
    lines: list[str] = field(default_factory=list)
    events: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    witnesses: list[Witness] = field(default_factory=list)
    size_violations: int = 0

    def log(self, kind: str, text: str) -> None:
        self.events[kind] += 1
        self.lines.append(f"{kind} {text}")

    @property
    def fallbacks(self) -> int:
        return self.events.get("fallback", 0)

    @property
    def witness_violations(self) -> int:
        return sum(not w.holds for w in self.witnesses)


class _Stuck(Exception):
    pass


def initial_partial_coloring(inst: Instance, q: int) -> MigrationColoring:
    """Each edge, in order, takes the lowest color with room at both ends, if any."""
    if q < 1:
        raise InstanceError("palette must hold at least one color")
    col = MigrationColoring(inst, q)
    for e in range(inst.n_edges):
        c = next((c for c in range(1, q + 1) if col.fits(e, c)), 0)
        if c:
            col.set_color(e, c)
    return col


def initial_palette(delta: int) -> int:
    if delta < 1:
        return 1
    eps = 1 / math.sqrt(delta)
    return max(math.floor((1 + eps) * delta) - 1, delta)


def alternating_trail(col: MigrationColoring, start: int, first: int, second: int) -> list[int]:
    """Maximal edge-distinct trail from ``start`` with colors first, second, first, ...

    At every node the lowest unvisited incident edge of the needed color is taken.
    """
    inst, colors = col.inst, col.colors
    trail, seen = [], set()
    x, need = start, first
    while True:
        e = next((f for f in inst.incident(x) if colors[f] == need and f not in seen), None)
        if e is None:
            return trail
        seen.add(e)
        trail.append(e)
        x = inst.other(e, x)
        need = second if need == first else first


def trail_end(inst: Instance, start: int, edges) -> int:
    x = start
    for e in edges:
        x = inst.other(e, x)
    return x


def flip(col: MigrationColoring, edges, a: int, b: int) -> None:
    for e in edges:
        col.set_color(e, b if col.colors[e] == a else a)


def _free_color_for(col: MigrationColoring, x: int, y: int, a: int) -> None:
    """Make ``a`` missing at ``y`` by flipping an (a, b)-trail out of ``y``; ``x`` keeps ``a`` missing."""
    inst = col.inst
    cap = inst.capacities
    if col.counts[y][a] < cap[y]:
        return
    b = next((c for c in col.missing(y) if c != a), None)
    if b is None:
        raise _Stuck(f"node {inst.node_ids[y]} misses no color")
    trail = alternating_trail(col, y, a, b)
    flip(col, trail, a, b)
    if col.counts[y][a] >= cap[y]:
        raise _Stuck("trail flip did not free the color")


def resolve_balancing_orbit(col: MigrationColoring, e: int, strong_end: int, a: int) -> None:
    """Color uncolored ``e`` with ``a``, strongly missing at ``strong_end``.

    If the other end is saturated in ``a`` a trail flip from it frees ``a``
    there; the strong end can absorb one extra ``a`` from the trail's end and
    still miss ``a``.
    """
    x, y = col.inst.ends[e]
    if strong_end == y:
        x, y = y, x
    _free_color_for(col, x, y, a)
    if not col.fits(e, a):
        raise _Stuck("balancing color did not fit")
    col.set_color(e, a)


def resolve_color_orbit(col: MigrationColoring, path_nodes: list[int], path_edges: list[int], a: int) -> int:
    """Color one edge of an uncolored path whose two ends both miss ``a``.

    Works from the far end: make ``a`` missing at the node before it by a
    trail flip.  Only one trail end can absorb the gained ``a``; if that was
    the far end the path is shortened by one and the step repeats.
    Returns the edge that was colored.
    """
    nodes, edges = list(path_nodes), list(path_edges)
    cap = col.inst.capacities
    while edges:
        near, far, e = nodes[-2], nodes[-1], edges[-1]
        if col.fits(e, a):
            col.set_color(e, a)
            return e
        _free_color_for(col, far, near, a)
        if col.counts[far][a] < cap[far]:
            col.set_color(e, a)
            return e
        nodes.pop()
        edges.pop()
    raise _Stuck("color orbit collapsed without coloring")


def _uncolored_component(col: MigrationColoring, start: int, within=None) -> tuple[list[int], dict]:
    """Nodes reachable from ``start`` over uncolored edges, with BFS parents ``node -> (parent, edge)``."""
    inst = col.inst
    parent = {start: None}
    queue = [start]
    for x in queue:
        for e in inst.incident(x):
            if col.colors[e]:
                continue
            y = inst.other(e, x)
            if y not in parent and (within is None or y in within):
                parent[y] = (x, e)
                queue.append(y)
    return queue, parent


def _path_to(parent: dict, target: int) -> tuple[list[int], list[int]]:
    nodes, edges = [target], []
    while parent[nodes[-1]] is not None:
        x, e = parent[nodes[-1]]
        nodes.append(x)
        edges.append(e)
    nodes.reverse()
    edges.reverse()
    return nodes, edges


def _balancing_candidates(col: MigrationColoring, comp: list[int]):
    inst, members = col.inst, set(comp)
    for v in comp:
        for a in col.strongly_missing(v):
            for e in inst.incident(v):
                if not col.colors[e] and inst.other(e, v) in members:
                    yield v, e, a


def try_balancing_or_color(col: MigrationColoring, comp: list[int], trace: GeneralTrace) -> bool:
    """Apply one balancing or color-orbit step inside ``comp`` if its conditions hold.

    A candidate whose trail flip cannot free the color (only possible while
    the palette is below the degree bound) is undone and the next one tried.
    """
    inst = col.inst
    members = set(comp)
    for v, e, a in _balancing_candidates(col, comp):
        snap = col.snapshot()
        try:
            resolve_balancing_orbit(col, e, v, a)
        except _Stuck as exc:
            col.restore(snap)
            trace.log("unresolved", f"balancing at {inst.node_ids[v]}: {exc}")
            continue
        trace.log("balancing", f"edge={inst.edge_ids[e]} color={a} node={inst.node_ids[v]}")
        return True
    holders: dict[int, list[int]] = defaultdict(list)
    for v in comp:
        for c in col.missing(v):
            holders[c].append(v)
    for c in sorted(holders):
        for u, v in itertools.combinations(holders[c], 2):
            _, par = _uncolored_component(col, u, members)
            nodes, edges = _path_to(par, v)
            snap = col.snapshot()
            try:
                e = resolve_color_orbit(col, nodes, edges, c)
            except _Stuck as exc:
                col.restore(snap)
                trace.log("unresolved", f"color orbit on {c}: {exc}")
                continue
            trace.log("color-orbit", f"edge={inst.edge_ids[e]} color={c} length={len(edges)}")
            return True
    return False


def _parallel_groups(inst: Instance) -> dict[tuple[int, int], list[int]]:
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for e, (u, v) in enumerate(inst.ends):
        groups[(min(u, v), max(u, v))].append(e)
    return groups


def _key(inst: Instance, e: int) -> tuple[int, int]:
    u, v = inst.ends[e]
    return (min(u, v), max(u, v))


def bad_edges(col: MigrationColoring, groups) -> list[int]:
    out = []
    for edges in groups.values():
        free = [e for e in edges if not col.colors[e]]
        if len(free) > 1:
            out.extend(free)
    return sorted(out)


def _is_lean(col: MigrationColoring, e: int, groups) -> bool:
    return bool(col.colors[e]) and all(col.colors[f] for f in groups[_key(col.inst, e)])


def resolve_weak_edge_orbit(col: MigrationColoring, orbit: Orbit, lean: int, groups) -> int:
    """Uncolor a lean trail edge and color a seed edge instead.

    The trail prefix before the lean edge is flipped, which frees the trail's
    second color at its anchor edge; the anchor takes that color.  When the
    anchor was itself a colored trail edge, the color it gave up is pushed
    down its own trail the same way until a seed edge is colored.
    Returns the seed edge that was colored.
    """
    if not _is_lean(col, lean, groups):
        raise ValueError("edge is not lean")
    owner = {}
    for i, p in enumerate(orbit.paths):
        for e in p.edges:
            owner[e] = i
    i = owner.get(lean)
    if i is None:
        raise ValueError("lean edge is not on a trail of the orbit")
    step = orbit.paths[i]
    pos = step.edges.index(lean)
    col.set_color(lean, 0)
    flip(col, step.edges[:pos], step.a, step.b)
    cur, color = step.anchor, step.b
    while True:
        was = col.colors[cur]
        col.set_color(cur, color)
        if col.overloaded():
            raise _Stuck("anchor recolor overloads a node")
        if not was:
            return cur
        j = owner.get(cur)
        if j is None:
            raise _Stuck("colored anchor outside the orbit trails")
        step = orbit.paths[j]
        pos = step.edges.index(cur)
        flip(col, step.edges[:pos], step.a, step.b)
        cur, color = step.anchor, step.b


def _internal_edges(inst: Instance, nodes) -> list[int]:
    return [e for e, (u, v) in enumerate(inst.ends) if u in nodes and v in nodes]


def is_full(col: MigrationColoring, c: int, nodes) -> bool:
    """``c`` is full on ``nodes`` when its edges inside fill half the joint capacity."""
    inside = sum(1 for e in _internal_edges(col.inst, nodes) if col.colors[e] == c)
    return inside >= sum(col.inst.capacities[v] for v in nodes) // 2


def classify_witness(col: MigrationColoring, orbit: Orbit, delta: int) -> Witness | None:
    """A witness for a hard orbit whose growth failed, with its palette bound checked."""
    inst, nodes = col.inst, orbit.nodes
    free = set(orbit.free_colors(col))
    size = len(nodes)
    caps = [inst.capacities[v] for v in nodes]
    if any(not (set(col.missing(v)) & free) for v in sorted(nodes)):
        bound = delta + Fraction(2 * size - 4, min(caps))
        return Witness("delta", col.q, size, bound, col.q <= bound)
    if all(is_full(col, c, nodes) for c in free):
        inside = len(_internal_edges(inst, nodes))
        gamma = Fraction(inside, sum(caps) // 2)
        bound = gamma + 2 * size - 4 - Fraction(2, max(caps))
        return Witness("gamma", col.q, size, bound, col.q <= bound)
    return None


def grow_orbit(col: MigrationColoring, orbit: Orbit) -> PathStep | None:
    """First trail that reaches a node outside the orbit, cut just after it.

    Anchors are orbit edges in orbit order, both orientations; ``a`` is a
    free color missing at ``x`` and ``b`` one missing at ``y``.
    """
    inst = col.inst
    free = orbit.free_colors(col)
    for e in orbit.edges:
        for x, y in (inst.ends[e], inst.ends[e][::-1]):
            for a in (c for c in col.missing(x) if c in free):
                for b in (c for c in col.missing(y) if c in free and c != a):
                    trail = alternating_trail(col, x, b, a)
                    z = x
                    for k, f in enumerate(trail):
                        z = inst.other(f, z)
                        if z not in orbit.nodes:
                            return PathStep(e, x, y, a, b, trail[: k + 1])
    return None


def _bump(col: MigrationColoring, seed: tuple[int, int], groups, trace: GeneralTrace, cause: str) -> None:
    c = col.add_color()
    done = []
    for e in groups[_key(col.inst, seed[0])]:
        if not col.colors[e] and col.fits(e, c):
            col.set_color(e, c)
            done.append(col.inst.edge_ids[e])
    trace.log("palette", f"q={col.q} cause={cause} colored={','.join(done)}")


def _fallback(col: MigrationColoring, seed, groups, trace: GeneralTrace, strict: bool, why: str) -> None:
    trace.log("fallback", why)
    if strict:
        raise ContractError(f"fallback in strict mode: {why}")
    _bump(col, seed, groups, trace, "fallback")


def _seed_step(col: MigrationColoring, seed: tuple[int, int], groups, delta: int,
               trace: GeneralTrace, strict: bool) -> None:
    """Run the orbit procedure from one bad pair until some progress is made."""
    inst = col.inst
    x0, y0 = inst.ends[seed[0]]
    orbit = Orbit("edge", {x0, y0}, list(seed), seed)
    while True:
        comp, parent = _uncolored_component(col, x0, orbit.nodes)
        snap = col.snapshot()
        try:
            if try_balancing_or_color(col, comp, trace):
                return
            lean = next((f for p in orbit.paths for f in p.edges if _is_lean(col, f, groups)), None)
            if lean is not None:
                e = resolve_weak_edge_orbit(col, orbit, lean, groups)
                trace.log("weak-edge", f"uncolored={inst.edge_ids[lean]} colored={inst.edge_ids[e]}")
                return
        except _Stuck as exc:
            col.restore(snap)
            _fallback(col, seed, groups, trace, strict, str(exc))
            return
        if col.overloaded():
            raise ContractError("resolution overloaded a node")
        orbit.kind = "hard"
        step = grow_orbit(col, orbit)
        if step is not None:
            orbit.paths.append(step)
            orbit.edges.extend(step.edges)
            orbit.reserved.update((step.a, step.b))
            added = {v for f in step.edges for v in inst.ends[f]} - orbit.nodes
            orbit.nodes |= added
            trace.log("grow", f"size={len(orbit.nodes)} anchor={inst.edge_ids[step.anchor]} "
                              f"colors={step.a},{step.b} trail={len(step.edges)}")
            continue
        w = classify_witness(col, orbit, delta)
        if w is None:
            _fallback(col, seed, groups, trace, strict, f"orbit of size {len(orbit.nodes)} neither grows nor witnesses")
            return
        trace.witnesses.append(w)
        trace.log("witness", f"kind={w.kind} q={w.q} size={w.size} bound={float(w.bound):.3f} "
                             f"{'ok' if w.holds else 'VIOLATED'}")
        if strict and not w.holds:
            raise ContractError(f"{w.kind} witness bound violated: q={w.q} > {w.bound}")
        _bump(col, seed, groups, trace, f"{w.kind}-witness")
        return


def eliminate_bad_edges(col: MigrationColoring, delta: int, trace: GeneralTrace, strict: bool = False) -> None:
    groups = _parallel_groups(col.inst)
    while True:
        bad = bad_edges(col, groups)
        if not bad:
            return
        first = bad[0]
        partner = next(f for f in groups[_key(col.inst, first)] if f != first and not col.colors[f])
        before = sum(1 for c in col.colors if c), len(bad)
        _seed_step(col, (first, partner), groups, delta, trace, strict)
        after = sum(1 for c in col.colors if c), len(bad_edges(col, groups))
        if 2 * after[0] - after[1] <= 2 * before[0] - before[1]:
            raise ContractError("orbit step made no progress")


def size_bound(q: int, delta: int) -> Fraction:
    return Fraction(q + 2, q - delta + 2)


def reduce_components(col: MigrationColoring, delta: int, trace: GeneralTrace, strict: bool = False) -> None:
    """Shrink uncolored components until none holds a balancing or color orbit."""
    inst = col.inst
    while True:
        progressed = False
        seen: set[int] = set()
        for s in range(inst.n_nodes):
            if s in seen or all(col.colors[e] for e in inst.incident(s)):
                continue
            comp, parent = _uncolored_component(col, s)
            seen.update(comp)
            snap = col.snapshot()
            try:
                if try_balancing_or_color(col, comp, trace):
                    progressed = True
                    break
            except _Stuck as exc:
                col.restore(snap)
                trace.log("fallback", str(exc))
                if strict:
                    raise ContractError(f"fallback in strict mode: {exc}") from None
        if not progressed:
            break
    for s in range(inst.n_nodes):
        if all(col.colors[e] for e in inst.incident(s)):
            continue
        comp, _ = _uncolored_component(col, s)
        if s != min(comp):
            continue
        if len(comp) > size_bound(col.q, delta):
            trace.size_violations += 1
            trace.log("size", f"component of {len(comp)} exceeds {size_bound(col.q, delta)}")


def color_G0(col: MigrationColoring, trace: GeneralTrace) -> int:
    """Color the simple uncolored remainder with fresh colors; returns how many were added.

    Every node is split into ``c_v`` copies that take its uncolored edges in
    turn, the split graph is properly colored and the copies are merged, so
    each fresh color appears at most ``c_v`` times at ``v``.
    """
    inst = col.inst
    rest = col.uncolored()
    if not rest:
        return 0
    keys = [_key(inst, e) for e in rest]
    if len(set(keys)) != len(keys):
        raise ContractError("uncolored remainder is not simple")
    turn = [0] * inst.n_nodes
    offset = [0, *itertools.accumulate(inst.capacities)]
    split = []
    for e in rest:
        pair = []
        for x in inst.ends[e]:
            pair.append(offset[x] + turn[x] % inst.capacities[x])
            turn[x] += 1
        split.append(tuple(pair))
    vcol = vizing_colors(sum(inst.capacities), split)
    base = col.q
    for _ in range(max(vcol)):
        col.add_color()
    for e, c in zip(rest, vcol):
        col.set_color(e, base + c)
    if col.overloaded():
        raise ContractError("merging split copies overloaded a node")
    trace.log("phase2", f"edges={len(rest)} fresh={max(vcol)}")
    return max(vcol)


@dataclass
class GeneralResult:
    coloring: MigrationColoring
    rounds: list[list[str]]
    q0: int
    trace: GeneralTrace


def schedule_general(
    inst: Instance, strict: bool = False, trace: GeneralTrace | None = None, palette: int | None = None
) -> GeneralResult:
    """Schedule every transfer; ``palette`` overrides the starting number of colors."""
    if inst.kind != MIGRATION:
        raise InstanceError("migration scheduling needs a migration instance")
    trace = GeneralTrace() if trace is None else trace
    delta = lb1(inst)
    q0 = initial_palette(delta) if palette is None else palette
    col = initial_partial_coloring(inst, q0)
    trace.log("init", f"delta={delta} q={q0} colored={inst.n_edges - len(col.uncolored())}/{inst.n_edges}")
    eliminate_bad_edges(col, delta, trace, strict)
    reduce_components(col, delta, trace, strict)
    color_G0(col, trace)
    if col.uncolored() or col.overloaded() or not col.check_recount():
        raise ContractError("final coloring is incomplete or invalid")
    rounds: list[list[str]] = [[] for _ in range(col.q)]
    for eid, c in zip(inst.edge_ids, col.colors):
        rounds[c - 1].append(eid)
    rounds = [r for r in rounds if r]
    trace.log("done", f"q={col.q} rounds={len(rounds)}")
    return GeneralResult(col, rounds, q0, trace)
