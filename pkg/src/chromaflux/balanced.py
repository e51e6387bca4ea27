"""Balanced soft edge coloring for homogeneous networks.

Edges are inserted one at a time while every node keeps a *balanced*
coloring: with ``m_v = d_v // k`` and ``alpha_v = d_v % k`` (``d_v`` the full
degree), no color class at ``v`` exceeds ``m_v + 1`` and at most
``min(alpha_v + 1, k - 1)`` classes reach that size.  A balanced coloring is
within 2|V| conflicts of optimal, and for ``k = Delta + 1`` it is a proper
edge coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .greedy import check_homogeneous
from .instance import Instance

SEARCH_BUDGET = 5_000


class ContractError(AssertionError):
    """An algorithmic invariant failed; this is a bug, never bad input."""


@dataclass
class AbPath:
    start: int
    end: int
    a: int
    b: int
    edges: list[int]


@dataclass
class BalancedState:
    """Partial coloring with per-node class sizes; colors are 1..k, 0 = uncolored."""

    inst: Instance
    k: int
    colors: list[int] = field(init=False)
    counts: list[list[int]] = field(init=False)
    m: list[int] = field(init=False)
    alpha: list[int] = field(init=False)
    used: set[int] = field(default_factory=set)
    flips: int = 0
    rounds: int = 0
    retries: int = 0

    def __post_init__(self):
        self.colors = [0] * self.inst.n_edges
        self.counts = [[0] * (self.k + 1) for _ in range(self.inst.n_nodes)]
        degs = self.inst.degrees
        self.m = [d // self.k for d in degs]
        self.alpha = [d % self.k for d in degs]

    def set_color(self, e: int, c: int) -> None:
        old = self.colors[e]
        for x in self.inst.ends[e]:
            self.counts[x][old] -= old != 0
            self.counts[x][c] += c != 0
        self.colors[e] = c

    def strong(self, v: int) -> int:
        top = self.m[v] + 1
        return sum(1 for c in range(1, self.k + 1) if self.counts[v][c] == top)

    def strong_limit(self, v: int) -> int:
        return min(self.alpha[v] + 1, self.k - 1)

    def missing(self, v: int) -> list[int]:
        """Colors that may be added at ``v`` without breaking balance.

        When the strong-class count equals both ``k - 1`` and
        ``alpha_v + 1`` the ``k - 1`` rule (weak or very weak) applies.
        """
        s, m = self.strong(v), self.m[v]
        cnt = self.counts[v]
        if s < self.strong_limit(v) or s == self.k - 1:
            return [c for c in range(1, self.k + 1) if cnt[c] <= m]
        return [c for c in range(1, self.k + 1) if cnt[c] < m]

    def is_balanced(self, v: int) -> bool:
        return self.strong(v) <= self.strong_limit(v) and max(self.counts[v][1:]) <= self.m[v] + 1

    def balanced(self) -> bool:
        return all(self.is_balanced(v) for v in range(self.inst.n_nodes))

    def check_recount(self) -> bool:
        fresh = [[0] * (self.k + 1) for _ in range(self.inst.n_nodes)]
        for (u, v), c in zip(self.inst.ends, self.colors):
            if c:
                fresh[u][c] += 1
                fresh[v][c] += 1
        return fresh == self.counts


def missing_colors(state: BalancedState, v: int) -> set[int]:
    return set(state.missing(v))


def _valid_end(state: BalancedState, t: int, gain: int, lose: int) -> bool:
    miss = state.missing(t)
    return gain in miss and lose not in miss


def _walk(state: BalancedState, start: int, a: int, b: int, forbidden, avoid_last=frozenset()):
    """Guided walk: follow the lowest unvisited edge of the needed color.

    Every prefix whose end is a legal terminal is a candidate ab-path.
    Returns ``(free, blocked)`` as :func:`_search` does.
    """
    inst, colors = state.inst, state.colors
    trail: list[int] = []
    visited: set[int] = set()
    blocked = None
    x, need = start, a
    while True:
        e = next((f for f in inst.incident(x) if colors[f] == need and f not in visited), None)
        if e is None:
            return None, blocked
        visited.add(e)
        trail.append(e)
        x = inst.other(e, x)
        gain, lose = (b, a) if need == a else (a, b)
        if x != start and _valid_end(state, x, gain, lose):
            if x != forbidden:
                return AbPath(start, x, a, b, list(trail)), blocked
            if blocked is None and e not in avoid_last:
                blocked = AbPath(start, x, a, b, list(trail))
        need = b if need == a else a


def _search(state: BalancedState, start: int, a: int, b: int, forbidden, avoid_last=frozenset()):
    """Depth-first search over edge-distinct ab-trails leaving ``start`` on color a.

    Returns ``(free, blocked)``: the first trail whose end is a legal
    terminal other than ``forbidden``, and the first legal trail ending at
    ``forbidden`` whose last edge is not in ``avoid_last``.  The guided walk
    is tried first; backtracking is bounded by ``SEARCH_BUDGET`` steps.
    """
    free, blocked = _walk(state, start, a, b, forbidden, avoid_last)
    if free is not None:
        return free, blocked
    inst, colors = state.inst, state.colors
    trail: list[int] = []
    on_trail: set[int] = set()
    budget = SEARCH_BUDGET
    # frames: (vertex, color needed next, position in incidence list)
    stack = [[start, a, 0]]
    while stack:
        frame = stack[-1]
        v, need, pos = frame
        inc = inst.incident(v)
        advanced = False
        while pos < len(inc):
            e = inc[pos]
            pos += 1
            if colors[e] != need or e in on_trail:
                continue
            frame[2] = pos
            budget -= 1
            if budget < 0:
                return None, blocked
            t = inst.other(e, v)
            trail.append(e)
            on_trail.add(e)
            gain, lose = (b, a) if need == a else (a, b)
            if t != start and _valid_end(state, t, gain, lose):
                if t != forbidden:
                    return AbPath(start, t, a, b, list(trail)), blocked
                if blocked is None and e not in avoid_last:
                    blocked = AbPath(start, t, a, b, list(trail))
            stack.append([t, b if need == a else a, 0])
            advanced = True
            break
        if not advanced:
            frame[2] = pos
            stack.pop()
            if trail and len(stack) < len(trail) + 1:
                on_trail.discard(trail.pop())
    return None, blocked


def find_ab_path(state: BalancedState, start: int, a: int, b: int, forbidden_end=None):
    """An ab-path from ``start`` (first edge colored ``a``), avoiding ``forbidden_end``.

    ``start`` must be missing ``b`` and not missing ``a``.
    """
    if not _valid_end(state, start, b, a):
        raise ValueError(f"node index {start} must be missing color {b} and not {a}")
    free, _ = _search(state, start, a, b, forbidden_end)
    return free


def flip_path(state: BalancedState, p: AbPath) -> None:
    for e in p.edges:
        c = state.colors[e]
        state.set_color(e, p.b if c == p.a else p.a)
    state.flips += 1
    for x in (p.start, p.end):
        if not state.is_balanced(x):
            raise ContractError(f"flip unbalanced node {state.inst.node_ids[x]}")


def _color_from(state: BalancedState, e: int, v: int, w: int) -> None:
    inst = state.inst
    cur, prev_cw = e, None
    state.used = set()
    for _ in range(inst.degrees[v] + 1):
        state.rounds += 1
        cv_set = state.missing(v)
        cw_set = [c for c in state.missing(w) if c != prev_cw]
        if not cv_set or not cw_set:
            raise ContractError(
                f"no missing color at {inst.node_ids[v if not cv_set else w]} "
                f"while coloring edge {inst.edge_ids[e]}"
            )
        shared = [c for c in cv_set if c in cw_set]
        if shared:
            # any shared color keeps balance; the emptiest one costs least
            best = min(shared, key=lambda c: (state.counts[v][c] + state.counts[w][c], c))
            state.set_color(cur, best)
            return
        step3 = None
        for cv in cv_set:
            for cw in cw_set:
                free, to_v = _search(state, w, cv, cw, v, state.used)
                if free is not None:
                    flip_path(state, free)
                    if cv not in state.missing(w) or cv not in state.missing(v):
                        raise ContractError("flip did not free the color at both ends")
                    state.set_color(cur, cv)
                    return
                if to_v is None:
                    continue
                # a last edge parallel to cur would hand the same far end back
                moves = inst.other(to_v.edges[-1], v) != w
                if step3 is None or (moves and not step3[0]):
                    step3 = (moves, cw, to_v)
        if step3 is None:
            raise ContractError(f"no ab-path from {inst.node_ids[w]}")
        _, cw, to_v = step3
        last = to_v.edges[-1]
        state.set_color(last, 0)
        state.set_color(cur, cw)
        state.used.add(cur)
        prev_cw, cur, w = cw, last, inst.other(last, v)
    raise ContractError(f"edge {inst.edge_ids[e]} not colored within d_v rounds")


def balanced_color_edge(state: BalancedState, e: int) -> None:
    """Color uncolored edge ``e = (v, w)`` keeping the coloring balanced.

    Each round looks for a color missing at both ``v`` and the current far
    end.  Failing that, an ab-path from the far end is flipped to free a
    color missing at ``v``; if every such path runs into ``v``, the last
    edge of one of them is uncolored, takes over as the edge to color,
    and the round repeats there.  Should that get stuck, the edge is
    retried from its other endpoint.
    """
    if state.colors[e]:
        raise ValueError("edge is already colored")
    v, w = state.inst.ends[e]
    saved = (list(state.colors), [list(c) for c in state.counts])
    try:
        _color_from(state, e, v, w)
    except ContractError as first:
        state.colors, state.counts = list(saved[0]), [list(c) for c in saved[1]]
        state.retries += 1
        try:
            _color_from(state, e, w, v)
        except ContractError:
            raise first from None


def balanced_state(inst: Instance, k: int, order=None) -> BalancedState:
    check_homogeneous(inst, k)
    state = BalancedState(inst, k)
    for e in range(inst.n_edges) if order is None else order:
        balanced_color_edge(state, e)
    return state


def balanced_assign(inst: Instance, k: int) -> dict[str, int]:
    state = balanced_state(inst, k)
    return dict(zip(inst.edge_ids, state.colors))


def balance_audit(state: BalancedState) -> list[str]:
    """One line per node: degree, m, alpha, strong classes vs limit, largest class."""
    lines = []
    for v, nid in enumerate(state.inst.node_ids):
        top = max(state.counts[v][1:])
        lines.append(
            f"node {nid} d={state.inst.degrees[v]} m={state.m[v]} alpha={state.alpha[v]} "
            f"strong={state.strong(v)}/{state.strong_limit(v)} max_class={top} "
            f"{'ok' if state.is_balanced(v) else 'UNBALANCED'}"
        )
    return lines
