"""Problem instances and the line-oriented file formats.

An instance is a labeled multigraph whose nodes carry a capacity: the number
of wireless cards ``C_v`` for channel assignment, or the number of
simultaneous transfers ``c_v`` for data migration.  Node and edge ids are the
strings found in the file; algorithms work on dense integer indices and the
boundary helpers translate back to ids.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

CHANNEL = "channel"
MIGRATION = "migration"
KINDS = (CHANNEL, MIGRATION)


class InstanceError(ValueError):
    """Raised for malformed or semantically invalid input.

    ``line`` is the 1-based line number for syntax errors, ``None`` for
    errors that concern the instance as a whole.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Instance:
    """Immutable validated problem instance.

    Edges keep file order; that order is the default processing order of
    every algorithm, so it is part of the instance identity.
    """

    kind: str
    node_ids: tuple[str, ...]
    capacities: tuple[int, ...]
    edge_ids: tuple[str, ...]
    ends: tuple[tuple[int, int], ...]
    channels: int | None = None
    _node_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)
    _incidence: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown problem kind {self.kind!r}")
        if len(self.node_ids) != len(self.capacities):
            raise InstanceError("node ids and capacities differ in length")
        if len(self.edge_ids) != len(self.ends):
            raise InstanceError("edge ids and endpoints differ in length")
        node_index = {}
        for i, nid in enumerate(self.node_ids):
            if nid in node_index:
                raise InstanceError(f"duplicate node id {nid!r}")
            node_index[nid] = i
        for nid, cap in zip(self.node_ids, self.capacities):
            if int(cap) != cap or cap < 1:
                raise InstanceError(f"node {nid!r}: capacity must be a positive integer, got {cap}")
        n = len(self.node_ids)
        edge_index = {}
        incidence: list[list[int]] = [[] for _ in range(n)]
        for j, (eid, (u, v)) in enumerate(zip(self.edge_ids, self.ends)):
            if eid in edge_index:
                raise InstanceError(f"duplicate edge id {eid!r}")
            edge_index[eid] = j
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError(f"edge {eid!r} references an undeclared node")
            if u == v:
                raise InstanceError(f"edge {eid!r} is a self-loop at {self.node_ids[u]!r}")
            incidence[u].append(j)
            incidence[v].append(j)
        if self.kind == CHANNEL:
            if self.channels is None or self.channels < 1:
                raise InstanceError("channel instance needs a positive channel budget C_G")
            if self.capacities and self.channels < max(self.capacities):
                raise InstanceError(
                    f"channel budget C_G={self.channels} is below max C_v={max(self.capacities)}"
                )
        elif self.channels is not None:
            raise InstanceError("migration instances take no channel budget")
        object.__setattr__(self, "_node_index", node_index)
        object.__setattr__(self, "_edge_index", edge_index)
        object.__setattr__(self, "_incidence", tuple(tuple(x) for x in incidence))

    @classmethod
    def from_edges(
        cls,
        kind: str,
        capacities: Mapping[str, int] | Sequence[int],
        edges: Iterable[tuple],
        channels: int | None = None,
    ) -> "Instance":
        """Build an instance from python data.

        ``capacities`` is either a mapping node-id -> capacity or a sequence
        (node ids become ``"0", "1", ...``).  ``edges`` holds ``(u, v)`` or
        ``(edge_id, u, v)`` tuples; bare pairs get ids ``"1", "2", ...``.
        """
        if isinstance(capacities, Mapping):
            node_ids = tuple(str(x) for x in capacities)
            caps = tuple(int(c) for c in capacities.values())
        else:
            node_ids = tuple(str(i) for i in range(len(capacities)))
            caps = tuple(int(c) for c in capacities)
        index = {nid: i for i, nid in enumerate(node_ids)}
        eids, ends = [], []
        for j, item in enumerate(edges):
            if len(item) == 2:
                eid, (u, v) = str(j + 1), item
            else:
                eid, u, v = item
            try:
                ends.append((index[str(u)], index[str(v)]))
            except KeyError as exc:
                raise InstanceError(f"edge {eid!r} references undeclared node {exc.args[0]!r}")
            eids.append(str(eid))
        return cls(kind, node_ids, caps, tuple(eids), tuple(ends), channels)

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edge_ids)

    @property
    def degrees(self) -> list[int]:
        return [len(x) for x in self._incidence]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def uniform_capacity(self) -> int | None:
        """The homogeneous card/transfer count, or None if capacities differ."""
        caps = set(self.capacities)
        return caps.pop() if len(caps) == 1 else None

    def incident(self, v: int) -> tuple[int, ...]:
        """Edge indices incident to node index ``v`` in file order."""
        return self._incidence[v]

    def other(self, e: int, v: int) -> int:
        a, b = self.ends[e]
        return b if a == v else a

    def node_index(self, nid: str) -> int:
        return self._node_index[nid]

    def edge_index(self, eid: str) -> int:
        return self._edge_index[eid]

    def with_kind(self, kind: str, channels: int | None = None) -> "Instance":
        return Instance(kind, self.node_ids, self.capacities, self.edge_ids, self.ends, channels)

    def digest(self) -> str:
        """Short content hash of the serialized instance."""
        return hashlib.sha256(format_instance(self).encode()).hexdigest()[:12]


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceError(f"{what} must be an integer, got {tok!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    """Parse instance-file contents into a validated :class:`Instance`."""
    kind = None
    channels = None
    nodes: dict[str, int] = {}
    order: dict[str, int] = {}
    eids: list[str] = []
    ends: list[tuple[int, int]] = []
    seen_edges: set[str] = set()
    for lineno, toks in _tokens(text):
        head = toks[0]
        if kind is None:
            if head != "problem" or len(toks) != 2:
                raise InstanceError("first line must be 'problem channel' or 'problem migration'", lineno)
            if toks[1] not in KINDS:
                raise InstanceError(f"unknown problem kind {toks[1]!r}", lineno)
            kind = toks[1]
        elif head == "channels":
            if kind != CHANNEL:
                raise InstanceError("'channels' is only valid for channel instances", lineno)
            if len(toks) != 2:
                raise InstanceError("expected 'channels <C_G>'", lineno)
            if channels is not None:
                raise InstanceError("duplicate 'channels' line", lineno)
            channels = _int(toks[1], lineno, "channel budget")
        elif head == "node":
            if len(toks) != 3:
                raise InstanceError("expected 'node <id> <capacity>'", lineno)
            if ends:
                raise InstanceError("node declarations must precede edges", lineno)
            if toks[1] in nodes:
                raise InstanceError(f"duplicate node id {toks[1]!r}", lineno)
            cap = _int(toks[2], lineno, "capacity")
            if cap < 1:
                raise InstanceError(f"capacity must be positive, got {cap}", lineno)
            nodes[toks[1]] = cap
            order[toks[1]] = len(order)
        elif head == "edge":
            if len(toks) != 4:
                raise InstanceError("expected 'edge <id> <u> <v>'", lineno)
            eid, u, v = toks[1:]
            if eid in seen_edges:
                raise InstanceError(f"duplicate edge id {eid!r}", lineno)
            for x in (u, v):
                if x not in nodes:
                    raise InstanceError(f"edge {eid!r} references undeclared node {x!r}", lineno)
            if u == v:
                raise InstanceError(f"edge {eid!r} is a self-loop at {u!r}", lineno)
            seen_edges.add(eid)
            eids.append(eid)
            ends.append((order[u], order[v]))
        else:
            raise InstanceError(f"unknown directive {head!r}", lineno)
    if kind is None:
        raise InstanceError("empty instance: missing 'problem' line")
    if kind == CHANNEL and channels is None:
        raise InstanceError("channel instance lacks a 'channels <C_G>' line")
    return Instance(kind, tuple(nodes), tuple(nodes.values()), tuple(eids), tuple(ends), channels)


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(inst: Instance) -> str:
    lines = [f"problem {inst.kind}"]
    if inst.kind == CHANNEL:
        lines.append(f"channels {inst.channels}")
    lines += [f"node {nid} {cap}" for nid, cap in zip(inst.node_ids, inst.capacities)]
    lines += [
        f"edge {eid} {inst.node_ids[u]} {inst.node_ids[v]}"
        for eid, (u, v) in zip(inst.edge_ids, inst.ends)
    ]
    return "\n".join(lines) + "\n"


# Solutions cross the module boundary keyed by edge id:
#   assignment: dict edge-id -> color (1-based)
#   schedule:   list of rounds, each a list of edge ids


def colors_to_assignment(inst: Instance, colors: Sequence[int]) -> dict[str, int]:
    return {eid: int(c) for eid, c in zip(inst.edge_ids, colors)}


def assignment_to_colors(inst: Instance, assignment: Mapping[str, int]) -> list[int]:
    missing = [eid for eid in inst.edge_ids if eid not in assignment]
    if missing:
        raise InstanceError(f"assignment leaves edges uncolored: {', '.join(missing[:5])}")
    return [int(assignment[eid]) for eid in inst.edge_ids]


def classes_to_schedule(inst: Instance, colors: Sequence[int]) -> list[list[str]]:
    """Turn a color per edge into rounds; empty color classes are dropped."""
    by_color: dict[int, list[str]] = {}
    for eid, c in zip(inst.edge_ids, colors):
        by_color.setdefault(c, []).append(eid)
    return [by_color[c] for c in sorted(by_color)]


def format_assignment(assignment: Mapping[str, int]) -> str:
    return "".join(f"color {eid} {c}\n" for eid, c in assignment.items())


def parse_assignment(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for lineno, toks in _tokens(text):
        if toks[0] != "color" or len(toks) != 3:
            raise InstanceError("expected 'color <eid> <int>'", lineno)
        if toks[1] in out:
            raise InstanceError(f"edge {toks[1]!r} colored twice", lineno)
        out[toks[1]] = _int(toks[2], lineno, "color")
    return out


def format_schedule(rounds: Sequence[Sequence[str]]) -> str:
    return "".join(
        "round " + " ".join([str(r)] + list(edges)) + "\n" for r, edges in enumerate(rounds, start=1)
    )


def parse_schedule(text: str) -> list[list[str]]:
    rounds: list[list[str]] = []
    for lineno, toks in _tokens(text):
        if toks[0] != "round" or len(toks) < 2:
            raise InstanceError("expected 'round <r> <eid> ...'", lineno)
        r = _int(toks[1], lineno, "round number")
        if r != len(rounds) + 1:
            raise InstanceError(f"round numbers must be contiguous from 1, got {r}", lineno)
        rounds.append(toks[2:])
    return rounds


def looks_like_schedule(text: str) -> bool:
    for _, toks in _tokens(text):
        return toks[0] == "round"
    return False
