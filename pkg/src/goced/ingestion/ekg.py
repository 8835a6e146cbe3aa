"""Event knowledge graph dumps (``nodes.csv`` + ``edges.csv``) and their lifting."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Union

from ..errors import InputSyntaxError, SchemaError
from ..model import E2OKind, E2OLink, Endurant, EndurantCategory, Event, GocedGraph, TimeInterval, parse_time
from ._build import GraphBuilder
from .table import read_csv

NODE_COLUMNS = ("id", "label", "type", "timestamp")
EDGE_COLUMNS = ("source", "target", "label", "qualifier")

E2O_LABELS = frozenset({"E2O", "CORR", "OBSERVES"})
O2O_LABELS = frozenset({"O2O", "REL"})


@dataclass(frozen=True)
class EkgNode:
    id: str
    label: str
    type: str
    timestamp: Optional[datetime] = None


@dataclass(frozen=True)
class EkgEdge:
    source: str
    target: str
    label: str
    qualifier: str = ""

    @property
    def is_e2o(self) -> bool:
        return self.label.upper() in E2O_LABELS


@dataclass
class EkgDump:
    nodes: list[EkgNode] = field(default_factory=list)
    edges: list[EkgEdge] = field(default_factory=list)

    def check(self) -> None:
        """Raise SchemaError unless node ids are unique and every edge fits its label."""
        kinds: dict[str, str] = {}
        for n in self.nodes:
            if not n.id:
                raise SchemaError("nodes", "empty node id")
            if n.id in kinds:
                raise SchemaError("nodes", f"duplicate node id {n.id!r}")
            if n.label not in ("Event", "Object"):
                raise SchemaError(f"nodes[{n.id}]", f"label must be Event or Object, not {n.label!r}")
            if n.label == "Event" and n.timestamp is None:
                raise SchemaError(f"nodes[{n.id}]", "event node without timestamp")
            kinds[n.id] = n.label
        for i, e in enumerate(self.edges):
            where = f"edges[{i}]"
            for end in (e.source, e.target):
                if end not in kinds:
                    raise SchemaError(where, f"unknown node {end!r}")
            ends = sorted((kinds[e.source], kinds[e.target]))
            if e.label.upper() in E2O_LABELS:
                if ends != ["Event", "Object"]:
                    raise SchemaError(where, "E2O edge must join an event and an object")
            elif e.label.upper() in O2O_LABELS:
                if ends != ["Object", "Object"]:
                    raise SchemaError(where, "O2O edge must join two objects")
                if e.source == e.target:
                    raise SchemaError(where, "O2O edge from an object to itself")
            else:
                raise SchemaError(where, f"unknown edge label {e.label!r}")


def parse_ekg(nodes: Union[bytes, str], edges: Union[bytes, str]) -> EkgDump:
    dump = EkgDump()
    for row in read_csv(nodes, NODE_COLUMNS):
        ts = None
        if row["timestamp"]:
            try:
                ts = parse_time(row["timestamp"])
            except InputSyntaxError as exc:
                raise InputSyntaxError(str(exc), f"nodes.csv line {row['_line']}") from None
        dump.nodes.append(EkgNode(row["id"], row["label"], row["type"], ts))
    for row in read_csv(edges, EDGE_COLUMNS):
        dump.edges.append(EkgEdge(row["source"], row["target"], row["label"], row["qualifier"]))
    dump.check()
    return dump


def ekg_to_goced(dump: EkgDump, min_mediation: int = 2) -> GocedGraph:
    """Object nodes become Object endurants, event nodes atomic point events,
    E2O edges Participated links and each O2O edge an atemporal relator."""
    dump.check()
    graph = GocedGraph(min_mediation)
    b = GraphBuilder(graph, {n.id for n in dump.nodes})
    for n in dump.nodes:
        if n.label == "Object":
            graph.insert(Endurant(n.id, b.object_type(n.type or "Object"), EndurantCategory.OBJECT))
    for n in dump.nodes:
        if n.label == "Event":
            graph.insert(
                Event(n.id, b.event_type(n.type or "Event"), TimeInterval(n.timestamp, n.timestamp))
            )
    for e in dump.edges:
        if e.is_e2o:
            ev, obj = (e.source, e.target) if e.source in graph.events else (e.target, e.source)
            graph.insert(E2OLink(ev, obj, E2OKind.PARTICIPATED))
        else:
            name = e.qualifier or e.label
            rid = b.fresh_id(f"{name}({e.source},{e.target})")
            graph.insert(
                Endurant(
                    rid,
                    b.relator_type(name),
                    EndurantCategory.RELATOR,
                    mediates=frozenset({e.source, e.target}),
                )
            )
    return graph
