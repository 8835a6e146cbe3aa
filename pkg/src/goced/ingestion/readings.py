"""Explicit readings of co-participation as relators.

An event table only says that objects occurred together in events.  Whether
two "assign" events set up two independent relationships or grow a single
shared one is a modeling decision; these functions make either decision
explicit by adding Relator endurants and their lifecycle links to a copy of
the graph.
"""

from __future__ import annotations

from typing import Optional

from ..errors import InvariantViolation
from ..model import E2OKind, E2OLink, Endurant, EndurantCategory, GocedGraph, SortalCategory, TimeInterval
from ..temporal import object_events
from ._build import GraphBuilder

SEPARATE = "separate"
JOINT = "joint"


def _anchored_events(graph: GocedGraph, anchor: str, event_type: Optional[str]) -> list[str]:
    events = object_events(graph, anchor)
    if event_type is not None:
        events = [e for e in events if graph.event_types[graph.events[e].type_ref].name == event_type]
    return events


def _co_objects(graph: GocedGraph, event: str) -> list[str]:
    return sorted(
        {
            l.endurant
            for l in graph.e2o
            if l.event == event and graph.endurants[l.endurant].category is EndurantCategory.OBJECT
        }
    )


def reify_coparticipation(
    graph: GocedGraph,
    anchor: str,
    mode: str,
    *,
    event_type: Optional[str] = None,
    relator_type: str = "Relation",
    end_previous: bool = True,
) -> GocedGraph:
    """Return a copy of ``graph`` with relators for ``anchor``'s co-participations.

    ``mode="separate"``: each event touching ``anchor`` creates its own relator
    mediating the objects of that event, named ``<relator_type><n>``; with
    ``end_previous`` the event also terminates the relator made before it.

    ``mode="joint"``: one relator named ``<relator_type>`` mediates ``anchor``
    and every object it co-occurs with; the first event creates it and later
    events participate in it.
    """
    if mode not in (SEPARATE, JOINT):
        raise ValueError(f"mode must be {SEPARATE!r} or {JOINT!r}")
    events = _anchored_events(graph, anchor, event_type)
    out = graph.copy()
    b = GraphBuilder(out)
    rtype = b.endurant_type(f"RelatorType/{relator_type}", relator_type, SortalCategory.UNSPECIFIED)
    ev = out.events

    if mode == JOINT:
        members = sorted({o for e in events for o in _co_objects(graph, e)} | {anchor})
        if not events or len(members) < 2:
            raise InvariantViolation(f"{anchor!r} shares no events with other objects")
        rid = b.fresh_id(relator_type)
        out.insert(
            Endurant(
                rid,
                rtype,
                EndurantCategory.RELATOR,
                existence=TimeInterval(ev[events[0]].begin),
                mediates=frozenset(members),
            )
        )
        out.insert(E2OLink(events[0], rid, E2OKind.CREATED))
        for e in events[1:]:
            out.insert(E2OLink(e, rid, E2OKind.PARTICIPATED))
        return out

    made: list[tuple[str, str, frozenset]] = []
    for e in events:
        members = frozenset(_co_objects(graph, e)) | {anchor}
        if len(members) >= 2:
            made.append((b.fresh_id(f"{relator_type}{len(made) + 1}"), e, members))
    for i, (rid, e, members) in enumerate(made):
        ender = made[i + 1][1] if end_previous and i + 1 < len(made) else None
        existence = TimeInterval(ev[e].begin, ev[ender].end if ender else None)
        out.insert(Endurant(rid, rtype, EndurantCategory.RELATOR, existence=existence, mediates=members))
        out.insert(E2OLink(e, rid, E2OKind.CREATED))
        if ender:
            out.insert(E2OLink(ender, rid, E2OKind.TERMINATED))
    return out
