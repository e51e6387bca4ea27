"""Proper edge coloring of simple graphs with at most Delta + 1 colors.

Misra and Gries' constructive form of Vizing's theorem: to color ``(u, v)``
build a maximal fan at ``u``, invert a cd-path from ``u`` and rotate a sub-fan.
"""

from __future__ import annotations


def _free(at: dict, palette: int) -> int:
    return next(c for c in range(1, palette + 1) if c not in at)


def vizing_colors(n_nodes: int, edges) -> list[int]:
    """Colors ``1..Delta+1`` for the simple graph ``edges`` on nodes ``0..n-1``."""
    edges = [(int(u), int(v)) for u, v in edges]
    keys = set()
    deg = [0] * n_nodes
    for u, v in edges:
        if u == v:
            raise ValueError("loops cannot be properly edge colored")
        key = (min(u, v), max(u, v))
        if key in keys:
            raise ValueError(f"parallel edge between {u} and {v}; graph must be simple")
        keys.add(key)
        deg[u] += 1
        deg[v] += 1
    palette = max(deg, default=0) + 1
    # at[x][c] = neighbor joined to x by the edge colored c
    at: list[dict[int, int]] = [{} for _ in range(n_nodes)]
    color: dict[tuple[int, int], int] = {}
    nbrs: list[list[int]] = [[] for _ in range(n_nodes)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)

    def get(x, y):
        return color.get((min(x, y), max(x, y)), 0)

    def put(x, y, c):
        old = get(x, y)
        if old:
            del at[x][old]
            del at[y][old]
        if c:
            assert c not in at[x] and c not in at[y], "coloring would not be proper"
            at[x][c] = y
            at[y][c] = x
            color[(min(x, y), max(x, y))] = c
        else:
            color.pop((min(x, y), max(x, y)), None)

    for u, v in edges:
        fan = [v]
        in_fan = {v}
        grew = True
        while grew:
            grew = False
            last = at[fan[-1]]
            for x in nbrs[u]:
                c = get(u, x)
                if x not in in_fan and c and c not in last:
                    fan.append(x)
                    in_fan.add(x)
                    grew = True
                    break
        c, d = _free(at[u], palette), _free(at[fan[-1]], palette)
        # invert the cd-path leaving u on a d edge
        path, x, want = [], u, d
        while want in at[x]:
            y = at[x][want]
            path.append((x, y, want))
            x, want = y, (c if want == d else d)
        for x, y, _ in path:
            put(x, y, 0)
        for x, y, old in path:
            put(x, y, c if old == d else d)
        # shortest prefix that is still a fan and ends at a node free of d
        stop = None
        for i, w in enumerate(fan):
            if i and get(u, w) in at[fan[i - 1]]:
                break
            if d not in at[w]:
                stop = i
                break
        assert stop is not None, "no rotatable sub-fan"
        shifted = [get(u, fan[i + 1]) for i in range(stop)]
        for i in range(1, stop + 1):
            put(u, fan[i], 0)
        for i in range(stop):
            put(u, fan[i], shifted[i])
        put(u, fan[stop], d)
    return [get(u, v) for u, v in edges]


def is_proper(n_nodes: int, edges, colors) -> bool:
    seen = set()
    for (u, v), c in zip(edges, colors):
        if c < 1 or (u, c) in seen or (v, c) in seen:
            return False
        seen.add((u, c))
        seen.add((v, c))
    return True
