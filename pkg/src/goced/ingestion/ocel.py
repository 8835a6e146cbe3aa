"""OCEL 2.0 JSON reader and its lifting into a gOCED graph."""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional, Union

from ..errors import GocedError, InputSyntaxError, MappingError, SchemaError
from ..model import (
    E2OKind,
    E2OLink,
    Endurant,
    EndurantCategory,
    Event,
    GocedGraph,
    Qvas,
    QvasEventLink,
    QvasLinkKind,
    Scalar,
    TimeInterval,
    is_scalar,
    parse_time,
)
from ._build import GraphBuilder

log = logging.getLogger(__name__)

# OCEL 2.0 stamps attribute values that never changed with the Unix epoch.
EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass
class OcelTypeDecl:
    name: str
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass
class OcelAttributeValue:
    name: str
    value: Scalar
    time: Optional[datetime] = None

    @property
    def is_static(self) -> bool:
        return self.time is None or self.time == EPOCH


@dataclass
class OcelRelationship:
    target: str
    qualifier: str = ""


@dataclass
class OcelObject:
    id: str
    type: str
    attributes: list[OcelAttributeValue] = field(default_factory=list)
    relationships: list[OcelRelationship] = field(default_factory=list)


@dataclass
class OcelEvent:
    id: str
    type: str
    time: datetime
    attributes: dict[str, Scalar] = field(default_factory=dict)
    relationships: list[OcelRelationship] = field(default_factory=list)


@dataclass
class OcelLog:
    object_types: dict[str, OcelTypeDecl] = field(default_factory=dict)
    event_types: dict[str, OcelTypeDecl] = field(default_factory=dict)
    objects: list[OcelObject] = field(default_factory=list)
    events: list[OcelEvent] = field(default_factory=list)


DEFAULT_QUALIFIER_MAP = {
    "create": E2OKind.CREATED,
    "CREATE": E2OKind.CREATED,
    "delete": E2OKind.TERMINATED,
    "DELETE": E2OKind.TERMINATED,
    "terminate": E2OKind.TERMINATED,
}


@dataclass
class MappingConfig:
    """How OCEL qualifiers and relations become gOCED links and relators.

    ``link_value_changes`` adds a BroughtAbout link from the unique event that
    touches an object at the exact instant one of its attribute values starts.
    """

    e2o_qualifier_map: dict[str, E2OKind] = field(
        default_factory=lambda: dict(DEFAULT_QUALIFIER_MAP)
    )
    relator_type_naming: str = "{qualifier}"
    link_value_changes: bool = True
    min_mediation: int = 2

    def e2o_kind(self, qualifier: Optional[str]) -> E2OKind:
        return self.e2o_qualifier_map.get(qualifier or "", E2OKind.PARTICIPATED)

    def relator_type_name(self, qualifier: str) -> str:
        return self.relator_type_naming.format(qualifier=qualifier or "related")


# -- parsing ---------------------------------------------------------------------

_CONVERTERS = {
    "string": str,
    "integer": int,
    "int": int,
    "float": float,
    "double": float,
}


def _convert(value: Any, declared: Optional[str], path: str) -> Scalar:
    if isinstance(value, (list, dict)) or value is None:
        raise SchemaError(path, "attribute values must be scalars")
    kind = (declared or "").lower()
    try:
        if kind == "boolean":
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in ("true", "1"):
                return True
            if text in ("false", "0"):
                return False
            raise ValueError(value)
        if kind in _CONVERTERS and not isinstance(value, bool):
            out = _CONVERTERS[kind](value)
        else:
            out = value
    except (TypeError, ValueError):
        raise SchemaError(path, f"value {value!r} is not a valid {declared}") from None
    if not is_scalar(out):
        raise SchemaError(path, f"value {value!r} is not a finite scalar")
    return out


def _expect(obj: Any, kind: type, path: str):
    if not isinstance(obj, kind):
        raise SchemaError(path, f"expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _string(obj: dict, key: str, path: str, required: bool = True) -> Optional[str]:
    if key not in obj:
        if required:
            raise SchemaError(path, f"missing {key!r}")
        return None
    val = obj[key]
    if not isinstance(val, str) or (required and not val):
        raise SchemaError(f"{path}.{key}", "expected a non-empty string")
    return val


def _time(text: Any, path: str) -> datetime:
    try:
        return parse_time(text)
    except InputSyntaxError as exc:
        raise SchemaError(path, str(exc)) from None


def _types(items: Any, path: str) -> dict[str, OcelTypeDecl]:
    out: dict[str, OcelTypeDecl] = {}
    for i, raw in enumerate(_expect(items, list, path)):
        p = f"{path}[{i}]"
        _expect(raw, dict, p)
        name = _string(raw, "name", p)
        if name in out:
            raise SchemaError(p, f"duplicate type {name!r}")
        attrs = {}
        for j, a in enumerate(_expect(raw.get("attributes", []), list, f"{p}.attributes")):
            _expect(a, dict, f"{p}.attributes[{j}]")
            attrs[_string(a, "name", f"{p}.attributes[{j}]")] = a.get("type", "string")
        out[name] = OcelTypeDecl(name, attrs)
    return out


def _relationships(items: Any, path: str) -> list[OcelRelationship]:
    out = []
    for i, raw in enumerate(_expect(items, list, path)):
        p = f"{path}[{i}]"
        _expect(raw, dict, p)
        target = _string(raw, "objectId", p)
        qualifier = raw.get("qualifier") or ""
        if not isinstance(qualifier, str):
            raise SchemaError(f"{p}.qualifier", "expected a string")
        extra = set(raw) - {"objectId", "qualifier"}
        if extra:
            log.warning("%s: ignoring unsupported relationship fields %s", p, sorted(extra))
        out.append(OcelRelationship(target, qualifier))
    return out


def parse_ocel2(data: Union[bytes, str]) -> OcelLog:
    """Parse and structurally check an OCEL 2.0 JSON document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputSyntaxError(f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    _expect(doc, dict, "$")
    for key in ("objectTypes", "eventTypes", "objects", "events"):
        if key not in doc:
            raise SchemaError("$", f"missing {key!r}")

    log_ = OcelLog(_types(doc["objectTypes"], "$.objectTypes"), _types(doc["eventTypes"], "$.eventTypes"))

    seen: set[str] = set()
    for i, raw in enumerate(_expect(doc["objects"], list, "$.objects")):
        p = f"$.objects[{i}]"
        _expect(raw, dict, p)
        oid, otype = _string(raw, "id", p), _string(raw, "type", p)
        if oid in seen:
            raise SchemaError(p, f"duplicate object id {oid!r}")
        seen.add(oid)
        decl = log_.object_types.get(otype)
        if decl is None:
            raise SchemaError(f"{p}.type", f"undeclared object type {otype!r}")
        obj = OcelObject(oid, otype)
        for j, a in enumerate(_expect(raw.get("attributes", []), list, f"{p}.attributes")):
            ap = f"{p}.attributes[{j}]"
            _expect(a, dict, ap)
            name = _string(a, "name", ap)
            if "value" not in a:
                raise SchemaError(ap, "missing 'value'")
            if a["value"] is None:
                log.warning("%s: skipping null value of %r", ap, name)
                continue
            when = _time(a["time"], f"{ap}.time") if a.get("time") is not None else None
            obj.attributes.append(
                OcelAttributeValue(name, _convert(a["value"], decl.attributes.get(name), ap), when)
            )
        obj.relationships = _relationships(raw.get("relationships", []), f"{p}.relationships")
        log_.objects.append(obj)

    for obj_i, obj in enumerate(log_.objects):
        for j, rel in enumerate(obj.relationships):
            if rel.target not in seen:
                raise SchemaError(
                    f"$.objects[{obj_i}].relationships[{j}]", f"unknown object {rel.target!r}"
                )

    event_ids: set[str] = set()
    for i, raw in enumerate(_expect(doc["events"], list, "$.events")):
        p = f"$.events[{i}]"
        _expect(raw, dict, p)
        eid, etype = _string(raw, "id", p), _string(raw, "type", p)
        if eid in event_ids:
            raise SchemaError(p, f"duplicate event id {eid!r}")
        event_ids.add(eid)
        decl = log_.event_types.get(etype)
        if decl is None:
            raise SchemaError(f"{p}.type", f"undeclared event type {etype!r}")
        if "time" not in raw:
            raise SchemaError(p, "missing 'time'")
        ev = OcelEvent(eid, etype, _time(raw["time"], f"{p}.time"))
        for j, a in enumerate(_expect(raw.get("attributes", []), list, f"{p}.attributes")):
            ap = f"{p}.attributes[{j}]"
            _expect(a, dict, ap)
            name = _string(a, "name", ap)
            if a.get("value") is None:
                log.warning("%s: skipping null value of %r", ap, name)
                continue
            ev.attributes[name] = _convert(a["value"], decl.attributes.get(name), ap)
        ev.relationships = _relationships(raw.get("relationships", []), f"{p}.relationships")
        for j, rel in enumerate(ev.relationships):
            if rel.target not in seen:
                raise SchemaError(f"{p}.relationships[{j}]", f"unknown object {rel.target!r}")
        log_.events.append(ev)
    return log_


# -- lifting ----------------------------------------------------------------------


def ocel_to_goced(log_: OcelLog, config: Optional[MappingConfig] = None) -> GocedGraph:
    """Lift a parsed OCEL log into a gOCED graph.

    Objects keep their ids.  Every event becomes an atomic point event, every
    O2O row its own relator, static attribute values qualities, and timed
    attribute values a chain of half-open value attributions.
    """
    config = config or MappingConfig()
    graph = GocedGraph(config.min_mediation)
    b = GraphBuilder(graph, {o.id for o in log_.objects} | {e.id for e in log_.events})
    try:
        _lift(log_, config, graph, b)
    except GocedError as exc:
        if isinstance(exc, MappingError):
            raise
        raise MappingError(f"internal inconsistency while mapping: {exc}") from exc
    return graph


def _lift(log_: OcelLog, config: MappingConfig, graph: GocedGraph, b: GraphBuilder) -> None:
    for name in log_.object_types:
        b.object_type(name)
    for name in log_.event_types:
        b.event_type(name)

    for obj in log_.objects:
        graph.insert(Endurant(obj.id, b.object_type(obj.type), EndurantCategory.OBJECT))

    for obj in log_.objects:
        for rel in obj.relationships:
            if rel.target == obj.id:
                log.warning("object %r relates to itself (%r); no relator made", obj.id, rel.qualifier)
                continue
            name = config.relator_type_name(rel.qualifier)
            rid = b.fresh_id(f"{rel.qualifier or 'related'}({obj.id},{rel.target})")
            graph.insert(
                Endurant(
                    rid,
                    b.relator_type(name),
                    EndurantCategory.RELATOR,
                    mediates=frozenset({obj.id, rel.target}),
                )
            )

    chains: list[tuple[str, list[str]]] = []
    for obj in log_.objects:
        by_name: dict[str, list[OcelAttributeValue]] = defaultdict(list)
        for a in obj.attributes:
            by_name[a.name].append(a)
        for name, values in by_name.items():
            static = [v for v in values if v.is_static]
            timed = [v for v in values if not v.is_static]
            qtype = b.endurant_type(f"QualityType/{obj.type}/{name}", name)
            qid = b.fresh_id(f"{obj.id}/{name}")
            graph.insert(
                Endurant(
                    qid,
                    qtype,
                    EndurantCategory.QUALITY,
                    label=name,
                    inheres_in=obj.id,
                    static_value=static[-1].value if static else None,
                )
            )
            chains.append((obj.id, _qvas_chain(graph, b, qid, timed)))

    event_ids: dict[str, str] = {}
    for ev in log_.events:
        eid = ev.id
        if eid in graph:
            eid = b.fresh_id(ev.id)
            log.warning("event id %r clashes with an object id; renamed to %r", ev.id, eid)
        event_ids[ev.id] = eid
        graph.insert(
            Event(eid, b.event_type(ev.type), TimeInterval(ev.time, ev.time), ev.attributes)
        )

    links: dict[str, list[E2OLink]] = defaultdict(list)
    for ev in log_.events:
        for rel in ev.relationships:
            link = E2OLink(event_ids[ev.id], rel.target, config.e2o_kind(rel.qualifier))
            if link not in links[rel.target]:
                links[rel.target].append(link)
    for obj in log_.objects:
        for link in _settle_lifecycle(graph, links.get(obj.id, [])):
            graph.insert(link)

    if config.link_value_changes:
        for obj_id, qvas_ids in chains:
            _link_value_changes(graph, obj_id, qvas_ids)


def _qvas_chain(graph: GocedGraph, b: GraphBuilder, quality: str, timed: list) -> list[str]:
    """Insert half-open value attributions for time-stamped observations of one attribute."""
    latest: dict[datetime, OcelAttributeValue] = {}
    for v in timed:
        if v.time in latest:
            log.warning("%s: two values at %s, keeping the later one", quality, v.time)
        latest[v.time] = v
    stamps = sorted(latest)
    ids = []
    for i, t in enumerate(stamps):
        end = stamps[i + 1] if i + 1 < len(stamps) else None
        qid = b.fresh_id(f"{quality}@{i + 1}")
        graph.insert(Qvas(qid, quality, latest[t].value, TimeInterval(t, end)))
        ids.append(qid)
    return ids


def _settle_lifecycle(graph: GocedGraph, links: list[E2OLink]) -> list[E2OLink]:
    """Keep at most one Created and one Terminated link per endurant, consistently ordered.

    The kept Created event must begin no later than any other event of the
    endurant, the kept Terminated event must end no earlier than any other and
    not before the creation ends.  Every other lifecycle link is demoted to
    Participated.
    """
    if not links:
        return links
    ev = graph.events
    endurant = links[0].endurant
    first_begin = min(ev[l.event].begin for l in links)
    last_end = max(ev[l.event].end for l in links)

    def demote(link):
        log.warning("%s: %s link to %s demoted to Participated", endurant, link.kind.value, link.event)
        return E2OLink(link.event, link.endurant, E2OKind.PARTICIPATED)

    created = sorted(
        (l for l in links if l.kind is E2OKind.CREATED),
        key=lambda l: (ev[l.event].begin, ev[l.event].end, l.event),
    )
    terminated = sorted(
        (l for l in links if l.kind is E2OKind.TERMINATED),
        key=lambda l: (-_ordinal(ev[l.event].end), -_ordinal(ev[l.event].begin), l.event),
    )
    keep_c = created[0] if created and ev[created[0].event].begin <= first_begin else None
    keep_t = None
    if terminated and ev[terminated[0].event].end >= last_end:
        if keep_c is None or ev[keep_c.event].end <= ev[terminated[0].event].begin:
            keep_t = terminated[0]
    out: list[E2OLink] = []
    for link in links:
        if link.kind is E2OKind.PARTICIPATED or link is keep_c or link is keep_t:
            out.append(link)
        else:
            out.append(demote(link))
    return list(dict.fromkeys(out))


def _ordinal(t: Any) -> float:
    return t.timestamp() if isinstance(t, datetime) else t


def _link_value_changes(graph: GocedGraph, obj_id: str, qvas_ids: list[str]) -> None:
    events = graph.events_of(obj_id)
    for qid in qvas_ids:
        begin = graph.qvass[qid].validity.begin
        at = sorted(e for e in events if graph.events[e].begin == begin)
        if len(at) == 1:
            graph.insert(QvasEventLink(at[0], qid, QvasLinkKind.BROUGHT_ABOUT))
        elif len(at) > 1:
            log.info("%s: %d events at %s, value change left unattributed", qid, len(at), begin)
