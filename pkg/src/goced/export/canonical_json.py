"""Canonical JSON form of a graph: fixed field order, sorted records, no spare whitespace."""

from __future__ import annotations

import json
from typing import Any, Union

from ..errors import GocedError, InputSyntaxError, SchemaError
from ..model import (
    E2EKind,
    E2ELink,
    E2OKind,
    E2OLink,
    Endurant,
    EndurantCategory,
    EndurantType,
    Event,
    EventType,
    GocedGraph,
    Qvas,
    QvasEventLink,
    QvasLinkKind,
    SortalCategory,
    TimeInterval,
    dependency_order,
    format_time,
    parse_time,
)

_LINK_ORDER = {"e2o": 0, "e2e": 1, "qvas": 2}


def _time(t):
    return None if t is None else format_time(t)


def _interval(iv):
    return None if iv is None else {"begin": _time(iv.begin), "end": _time(iv.end)}


def _link_record(link) -> dict:
    if isinstance(link, E2OLink):
        return {"link": "e2o", "kind": link.kind.value, "event": link.event, "endurant": link.endurant}
    if isinstance(link, E2ELink):
        return {"link": "e2e", "kind": link.kind.value, "source": link.source, "target": link.target}
    return {"link": "qvas", "kind": link.kind.value, "event": link.event, "qvas": link.qvas}


def _link_key(rec: dict):
    return (_LINK_ORDER[rec["link"]], rec["kind"], *[v for k, v in rec.items() if k not in ("link", "kind")])


def to_document(graph: GocedGraph) -> dict:
    return {
        "endurantTypes": [
            {"id": t.id, "name": t.name, "sortal": t.sortal.value}
            for t in sorted(graph.endurant_types.values(), key=lambda t: t.id)
        ],
        "eventTypes": [
            {"id": t.id, "name": t.name} for t in sorted(graph.event_types.values(), key=lambda t: t.id)
        ],
        "endurants": [
            {
                "id": e.id,
                "type": e.type_ref,
                "category": e.category.value,
                "label": e.label,
                "existence": _interval(e.existence),
                "inheresIn": e.inheres_in,
                "mediates": sorted(e.mediates),
                "staticValue": e.static_value,
            }
            for e in sorted(graph.endurants.values(), key=lambda e: e.id)
        ],
        "events": [
            {
                "id": ev.id,
                "type": ev.type_ref,
                "begin": _time(ev.begin),
                "end": _time(ev.end),
                "attributes": {k: ev.attributes[k] for k in sorted(ev.attributes)},
            }
            for ev in sorted(graph.events.values(), key=lambda e: e.id)
        ],
        "qvas": [
            {
                "id": q.id,
                "quality": q.quality_ref,
                "value": q.value,
                "begin": _time(q.validity.begin),
                "end": _time(q.validity.end),
            }
            for q in sorted(graph.qvass.values(), key=lambda q: q.id)
        ],
        "links": sorted((_link_record(l) for l in graph.links()), key=_link_key),
    }


def to_canonical_json(graph: GocedGraph) -> bytes:
    return json.dumps(to_document(graph), ensure_ascii=False, separators=(",", ":"), allow_nan=False).encode(
        "utf-8"
    )


def _field(rec: dict, key: str, path: str) -> Any:
    if key not in rec:
        raise SchemaError(path, f"missing {key!r}")
    return rec[key]


def _parse_interval(raw, path):
    if raw is None:
        return None
    begin = _field(raw, "begin", path)
    end = raw.get("end")
    return TimeInterval(parse_time(begin), parse_time(end) if end is not None else None)


def from_canonical_json(data: Union[bytes, str], min_mediation: int = 2) -> GocedGraph:
    """Inverse of ``to_canonical_json``; records may come in any order."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputSyntaxError(str(exc)) from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    g = GocedGraph(min_mediation)
    try:
        for r in doc.get("endurantTypes", []):
            g.insert(EndurantType(r["id"], r["name"], SortalCategory(r.get("sortal", "Unspecified"))))
        for r in doc.get("eventTypes", []):
            g.insert(EventType(r["id"], r["name"]))
        pending = {
            r["id"]: Endurant(
                r["id"],
                r["type"],
                EndurantCategory(r["category"]),
                label=r.get("label"),
                existence=_parse_interval(r.get("existence"), f"$.endurants[{r['id']}]"),
                inheres_in=r.get("inheresIn"),
                mediates=frozenset(r.get("mediates", [])),
                static_value=r.get("staticValue"),
            )
            for r in doc.get("endurants", [])
        }
        for e in dependency_order(pending):
            g.insert(e)
        for r in doc.get("events", []):
            g.insert(
                Event(
                    r["id"],
                    r["type"],
                    TimeInterval(parse_time(r["begin"]), parse_time(r["end"])),
                    r.get("attributes", {}),
                )
            )
        for r in doc.get("qvas", []):
            end = r.get("end")
            g.insert(
                Qvas(
                    r["id"],
                    r["quality"],
                    r["value"],
                    TimeInterval(parse_time(r["begin"]), parse_time(end) if end is not None else None),
                )
            )
        for r in doc.get("links", []):
            kind = r["link"]
            if kind == "e2o":
                g.insert(E2OLink(r["event"], r["endurant"], E2OKind(r["kind"])))
            elif kind == "e2e":
                g.insert(E2ELink(r["source"], r["target"], E2EKind(r["kind"])))
            elif kind == "qvas":
                g.insert(QvasEventLink(r["event"], r["qvas"], QvasLinkKind(r["kind"])))
            else:
                raise SchemaError("$.links", f"unknown link kind {kind!r}")
    except GocedError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("$", f"malformed record: {exc!r}") from None
    return g
