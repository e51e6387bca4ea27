"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import os

from .instance import CHANNEL, KINDS, Instance, InstanceError, parse_instance, read_instance


def _from_networkx(g, kind: str | None) -> Instance:
    if kind not in KINDS:
        raise InstanceError(f"a graph object needs kind= one of {KINDS}")
    caps = {}
    for nid, data in g.nodes(data=True):
        if "capacity" not in data:
            raise InstanceError(f"node {nid!r} has no 'capacity' attribute")
        caps[str(nid)] = data["capacity"]
    multi = g.is_multigraph()
    edges = []
    for item in g.edges(keys=True, data=True) if multi else g.edges(data=True):
        u, v, data = item[0], item[1], item[-1]
        eid = data.get("id", len(edges) + 1)
        edges.append((str(eid), str(u), str(v)))
    channels = g.graph.get("channels") if kind == CHANNEL else None
    return Instance.from_edges(kind, caps, edges, channels=channels)


def check_instance(X, kind: str | None = None) -> Instance:
    """Coerce ``X`` to an :class:`Instance` and check its problem kind.

    Accepts an Instance, instance text, a path to an instance file, or a
    networkx (multi)graph whose nodes carry ``capacity`` (channel graphs
    also need ``graph['channels']``).
    """
    if isinstance(X, Instance):
        inst = X
    elif isinstance(X, os.PathLike):
        inst = read_instance(X)
    elif isinstance(X, str):
        inst = parse_instance(X) if "\n" in X or X.lstrip().startswith("problem") else read_instance(X)
    elif hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_multigraph"):
        inst = _from_networkx(X, kind)
    else:
        raise InstanceError(f"cannot read an instance from {type(X).__name__}")
    if kind is not None and inst.kind != kind:
        raise InstanceError(f"expected a {kind} instance, got {inst.kind}")
    return inst


def check_k(inst: Instance, k: int | None) -> int:
    """The channel count to use: ``k`` if given, else the common ``C_v``."""
    if k is None:
        k = inst.uniform_capacity
        if k is None:
            raise InstanceError("capacities differ; pass k explicitly")
    if int(k) != k or k < 1:
        raise InstanceError(f"k must be a positive integer, got {k!r}")
    return int(k)
