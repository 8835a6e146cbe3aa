"""Derived temporal relations: Allen relations, directly-follows, dependence closure,
point-in-time snapshots of endurants."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping, Union

from . import _digraph
from .errors import (
    AmbiguousValue,
    CyclicDependence,
    DegenerateInterval,
    InvariantViolation,
    NotAnObject,
    NotAQuality,
    OpenInterval,
)
from .model import (
    E2EKind,
    EndurantCategory,
    GocedGraph,
    Qvas,
    Scalar,
    TimeInterval,
    to_time,
)


class AllenRelation(str, Enum):
    BEFORE = "Before"
    AFTER = "After"
    MEETS = "Meets"
    MET_BY = "MetBy"
    OVERLAPS = "Overlaps"
    OVERLAPPED_BY = "OverlappedBy"
    STARTS = "Starts"
    STARTED_BY = "StartedBy"
    DURING = "During"
    CONTAINS = "Contains"
    FINISHES = "Finishes"
    FINISHED_BY = "FinishedBy"
    EQUALS = "Equals"

    @property
    def converse(self) -> AllenRelation:
        return _CONVERSE[self]


_CONVERSE = {}
for _a, _b in [
    ("BEFORE", "AFTER"),
    ("MEETS", "MET_BY"),
    ("OVERLAPS", "OVERLAPPED_BY"),
    ("STARTS", "STARTED_BY"),
    ("DURING", "CONTAINS"),
    ("FINISHES", "FINISHED_BY"),
    ("EQUALS", "EQUALS"),
]:
    _CONVERSE[AllenRelation[_a]] = AllenRelation[_b]
    _CONVERSE[AllenRelation[_b]] = AllenRelation[_a]

POINT_POLICIES = ("coarse", "reject")


def allen_relation(a: TimeInterval, b: TimeInterval, point_policy: str = "coarse") -> AllenRelation:
    """Relation of ``a`` to ``b``.

    Both intervals must be closed.  Under ``point_policy="coarse"`` a point
    interval (begin == end) against anything yields Before/After/Equals, or
    Starts/Finishes/During when the point is ``a`` and touches or lies inside
    ``b`` (the converses when the point is ``b``).  ``"reject"`` raises
    DegenerateInterval for points instead.
    """
    if point_policy not in POINT_POLICIES:
        raise ValueError(f"unknown point policy {point_policy!r}")
    for iv in (a, b):
        if iv.end is None:
            raise OpenInterval(f"interval starting at {iv.begin!r} has no end")
        if iv.end < iv.begin:
            raise InvariantViolation(f"interval [{iv.begin!r}, {iv.end!r}] ends before it begins")
    a_point, b_point = a.begin == a.end, b.begin == b.end
    if a_point or b_point:
        if point_policy == "reject":
            raise DegenerateInterval("point intervals have no proper Allen relation")
        if a_point:
            return _point_vs(a.begin, b)
        return _point_vs(b.begin, a).converse
    return _proper(a.begin, a.end, b.begin, b.end)


def _point_vs(p: Any, iv: TimeInterval) -> AllenRelation:
    if p < iv.begin:
        return AllenRelation.BEFORE
    if p > iv.end:
        return AllenRelation.AFTER
    if iv.begin == iv.end:
        return AllenRelation.EQUALS
    if p == iv.begin:
        return AllenRelation.STARTS
    if p == iv.end:
        return AllenRelation.FINISHES
    return AllenRelation.DURING


def _proper(a0, a1, b0, b1) -> AllenRelation:
    if a1 < b0:
        return AllenRelation.BEFORE
    if b1 < a0:
        return AllenRelation.AFTER
    if a1 == b0:
        return AllenRelation.MEETS
    if b1 == a0:
        return AllenRelation.MET_BY
    if a0 == b0:
        if a1 == b1:
            return AllenRelation.EQUALS
        return AllenRelation.STARTS if a1 < b1 else AllenRelation.STARTED_BY
    if a1 == b1:
        return AllenRelation.FINISHES if a0 > b0 else AllenRelation.FINISHED_BY
    if b0 < a0 and a1 < b1:
        return AllenRelation.DURING
    if a0 < b0 and b1 < a1:
        return AllenRelation.CONTAINS
    return AllenRelation.OVERLAPS if a0 < b0 else AllenRelation.OVERLAPPED_BY


def event_allen(graph: GocedGraph, e1: str, e2: str, point_policy: str = "coarse") -> AllenRelation:
    return allen_relation(graph.event(e1).interval, graph.event(e2).interval, point_policy)


def object_events(graph: GocedGraph, obj: str) -> list[str]:
    """Events touching ``obj`` through any E2O link, ordered by (begin, end, id)."""
    ids = graph.events_of(obj)
    return sorted(ids, key=lambda i: (graph.events[i].begin, graph.events[i].end, i))


def directly_follows(graph: GocedGraph, obj: str, strict: bool = False) -> list[tuple[str, str]]:
    """Consecutive event pairs on ``obj``'s timeline, ordered by (begin, end, id).

    With ``strict``, a pair is kept only when its first event ends no later
    than the second begins.
    """
    if graph.endurant(obj).category is not EndurantCategory.OBJECT:
        raise NotAnObject(f"{obj!r} is not an object")
    seq = object_events(graph, obj)
    ev = graph.events
    return [(e, f) for e, f in zip(seq, seq[1:]) if not strict or ev[e].end <= ev[f].begin]


def hd_closure(graph: GocedGraph) -> frozenset:
    """All (depender, dependee) pairs implied by historical dependence links.

    Raises CyclicDependence if any event would transitively depend on itself.
    """
    edges = [
        (link.source, link.target)
        for link in graph.e2e
        if link.kind is E2EKind.HISTORICALLY_DEPENDS_ON
    ]
    adj = _digraph.adjacency(edges)
    cycles = _digraph.cyclic_components(adj)
    if cycles:
        raise CyclicDependence(cycles[0])
    return frozenset(_digraph.dag_closure(adj))


@dataclass(frozen=True)
class Snapshot:
    endurant: str
    at: datetime
    values: Mapping[str, Scalar] = field(default_factory=dict)


def quality_name(graph: GocedGraph, quality: str) -> str:
    q = graph.endurants[quality]
    return graph.endurant_types[q.type_ref].name


def snapshot(graph: GocedGraph, endurant: str, at: Union[str, datetime]) -> Snapshot:
    """Attribute values of ``endurant`` holding at instant ``at``.

    A value attribution covering ``at`` wins over the quality's static value;
    qualities with neither are left out.
    """
    graph.endurant(endurant)
    at = to_time(at) if isinstance(at, (str, datetime)) else at
    values: dict[str, Scalar] = {}
    owner: dict[str, str] = {}
    for qid in sorted(graph.qualities_of(endurant)):
        name = quality_name(graph, qid)
        if name in owner:
            raise AmbiguousValue(name, [owner[name], qid])
        owner[name] = qid
        covering = sorted(
            v for v in graph.qvas_of(qid) if graph.qvass[v].validity.contains(at)
        )
        if len(covering) > 1:
            raise AmbiguousValue(qid, covering)
        if covering:
            values[name] = graph.qvass[covering[0]].value
        elif graph.endurants[qid].static_value is not None:
            values[name] = graph.endurants[qid].static_value
    return Snapshot(endurant, at, MappingProxyType(values))


def qvas_history(graph: GocedGraph, quality: str) -> list[Qvas]:
    q = graph.endurant(quality)
    if q.category is not EndurantCategory.QUALITY:
        raise NotAQuality(f"{quality!r} is not a quality")
    return sorted(
        (graph.qvass[i] for i in graph.qvas_of(quality)),
        key=lambda v: (v.validity.begin, v.id),
    )
