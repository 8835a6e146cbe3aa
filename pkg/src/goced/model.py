"""gOCED instance model: element records, link records and the graph container.

Elements (types, endurants, events, value attributions) are immutable records
keyed by an id that is unique across the whole graph.  Links carry no id; an
identical link inserted twice is stored once.  ``GocedGraph.insert`` is the only
way in, and it checks each record's own invariants plus referential integrity
before anything is stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, Optional, Union

from .errors import (
    DanglingReference,
    DuplicateId,
    InputSyntaxError,
    InvariantViolation,
    NotARelator,
    UnknownId,
)

Scalar = Union[str, int, float, bool]


def is_scalar(value: Any) -> bool:
    if isinstance(value, float):
        return math.isfinite(value)
    return isinstance(value, (str, int, bool))


# -- time points -------------------------------------------------------------


def parse_time(text: str) -> datetime:
    """Parse an ISO-8601 instant into an aware UTC datetime at millisecond precision.

    Offset-less values are taken to be UTC.
    """
    if not isinstance(text, str) or not text.strip():
        raise InputSyntaxError(f"not a timestamp: {text!r}")
    raw = text.strip()
    if raw[-1] in "zZ":
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise InputSyntaxError(f"not an ISO-8601 timestamp: {text!r}") from None
    return normalize_time(dt)


def normalize_time(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return dt.replace(microsecond=dt.microsecond // 1000 * 1000)


def to_time(value: Union[str, datetime]) -> datetime:
    if isinstance(value, datetime):
        return normalize_time(value)
    return parse_time(value)


def format_time(dt: datetime) -> str:
    """Render a time point as ``YYYY-MM-DDTHH:MM:SS.mmmZ``."""
    dt = normalize_time(dt)
    return dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{dt.microsecond // 1000:03d}Z"


@dataclass(frozen=True)
class TimeInterval:
    """A span ``[begin, end]``; ``end=None`` means still ongoing.

    Value validity uses the half-open reading ``[begin, end)``, see ``contains``.
    The record does not check ``begin <= end`` itself; ``GocedGraph.insert`` does.
    """

    begin: Any
    end: Any = None

    @property
    def is_open(self) -> bool:
        return self.end is None

    @property
    def is_point(self) -> bool:
        return self.end is not None and self.begin == self.end

    @property
    def is_well_ordered(self) -> bool:
        return self.end is None or self.begin <= self.end

    def contains(self, t: Any) -> bool:
        return self.begin <= t and (self.end is None or t < self.end)

    def overlaps(self, other: TimeInterval) -> bool:
        """Half-open overlap test; empty intervals overlap nothing."""
        if self.end is not None and not self.begin < self.end:
            return False
        if other.end is not None and not other.begin < other.end:
            return False
        return (other.end is None or self.begin < other.end) and (
            self.end is None or other.begin < self.end
        )


# -- enumerations --------------------------------------------------------------


class SortalCategory(str, Enum):
    KIND = "Kind"
    PHASE = "Phase"
    ROLE = "Role"
    UNSPECIFIED = "Unspecified"


class EndurantCategory(str, Enum):
    OBJECT = "Object"
    QUALITY = "Quality"
    RELATOR = "Relator"


class E2OKind(str, Enum):
    CREATED = "Created"
    TERMINATED = "Terminated"
    PARTICIPATED = "Participated"


class E2EKind(str, Enum):
    PROPER_PART_OF = "ProperPartOf"
    HISTORICALLY_DEPENDS_ON = "HistoricallyDependsOn"


class QvasLinkKind(str, Enum):
    BROUGHT_ABOUT = "BroughtAbout"
    CONTRIBUTED_TO_TRIGGER = "ContributedToTrigger"


# -- elements ----------------------------------------------------------------


@dataclass(frozen=True)
class EndurantType:
    id: str
    name: str
    sortal: SortalCategory = SortalCategory.UNSPECIFIED


@dataclass(frozen=True)
class EventType:
    id: str
    name: str


@dataclass(frozen=True)
class Endurant:
    id: str
    type_ref: str
    category: EndurantCategory
    label: Optional[str] = None
    existence: Optional[TimeInterval] = None
    inheres_in: Optional[str] = None
    mediates: frozenset = field(default_factory=frozenset)
    static_value: Optional[Scalar] = None

    def __post_init__(self):
        if not isinstance(self.mediates, frozenset):
            object.__setattr__(self, "mediates", frozenset(self.mediates))
        if not isinstance(self.category, EndurantCategory):
            object.__setattr__(self, "category", EndurantCategory(self.category))


@dataclass(frozen=True)
class Qvas:
    """A quality value attribution: ``quality_ref`` holds ``value`` during ``validity``."""

    id: str
    quality_ref: str
    value: Scalar
    validity: TimeInterval


@dataclass(frozen=True)
class Event:
    id: str
    type_ref: str
    interval: TimeInterval
    attributes: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))

    @property
    def begin(self):
        return self.interval.begin

    @property
    def end(self):
        return self.interval.end


@dataclass(frozen=True)
class E2OLink:
    event: str
    endurant: str
    kind: E2OKind


@dataclass(frozen=True)
class E2ELink:
    """``source`` is a proper part of / historically depends on ``target``."""

    source: str
    target: str
    kind: E2EKind


@dataclass(frozen=True)
class QvasEventLink:
    event: str
    qvas: str
    kind: QvasLinkKind


Element = Union[EndurantType, EventType, Endurant, Qvas, Event]
Link = Union[E2OLink, E2ELink, QvasEventLink]


# -- graph ---------------------------------------------------------------------


class GocedGraph:
    """In-memory gOCED instance graph.

    The element maps and link sets are public for reading; mutate only through
    ``insert``.  Link sets are dicts used as insertion-ordered sets.
    """

    def __init__(self, min_mediation: int = 2):
        if min_mediation < 1:
            raise ValueError("min_mediation must be >= 1")
        self.min_mediation = min_mediation
        self.endurant_types: dict[str, EndurantType] = {}
        self.event_types: dict[str, EventType] = {}
        self.endurants: dict[str, Endurant] = {}
        self.qvass: dict[str, Qvas] = {}
        self.events: dict[str, Event] = {}
        self.e2o: dict[E2OLink, None] = {}
        self.e2e: dict[E2ELink, None] = {}
        self.qvas_links: dict[QvasEventLink, None] = {}
        self._reset_indexes()

    # indexes

    def _reset_indexes(self) -> None:
        self._by_type: dict[str, list[str]] = {}
        self._events_of: dict[str, dict[str, None]] = {}
        self._e2o_of: dict[str, list[E2OLink]] = {}
        self._qvas_of: dict[str, list[str]] = {}
        self._qualities_of: dict[str, list[str]] = {}
        self._parts: dict[str, set[str]] = {}
        self._wholes: dict[str, set[str]] = {}

    def rebuild_indexes(self) -> None:
        self._reset_indexes()
        for el in (*self.endurants.values(), *self.events.values(), *self.qvass.values()):
            self._index_element(el)
        for link in (*self.e2o, *self.e2e, *self.qvas_links):
            self._index_link(link)

    def _index_element(self, el: Element) -> None:
        if isinstance(el, (Endurant, Event)):
            self._by_type.setdefault(el.type_ref, []).append(el.id)
        if isinstance(el, Endurant) and el.inheres_in is not None:
            self._qualities_of.setdefault(el.inheres_in, []).append(el.id)
        elif isinstance(el, Qvas):
            self._qvas_of.setdefault(el.quality_ref, []).append(el.id)

    def _index_link(self, link: Link) -> None:
        if isinstance(link, E2OLink):
            self._events_of.setdefault(link.endurant, {})[link.event] = None
            self._e2o_of.setdefault(link.endurant, []).append(link)
        elif isinstance(link, E2ELink) and link.kind is E2EKind.PROPER_PART_OF:
            self._parts.setdefault(link.target, set()).add(link.source)
            self._wholes.setdefault(link.source, set()).add(link.target)

    # lookup

    def __contains__(self, id_: str) -> bool:
        return self.kind_of(id_) is not None

    def kind_of(self, id_: str) -> Optional[str]:
        for name, table in self._tables():
            if id_ in table:
                return name
        return None

    def _tables(self):
        return (
            ("endurant_type", self.endurant_types),
            ("event_type", self.event_types),
            ("endurant", self.endurants),
            ("qvas", self.qvass),
            ("event", self.events),
        )

    def event(self, id_: str) -> Event:
        try:
            return self.events[id_]
        except KeyError:
            raise UnknownId(id_) from None

    def endurant(self, id_: str) -> Endurant:
        try:
            return self.endurants[id_]
        except KeyError:
            raise UnknownId(id_) from None

    def qvas(self, id_: str) -> Qvas:
        try:
            return self.qvass[id_]
        except KeyError:
            raise UnknownId(id_) from None

    def element_count(self) -> int:
        return sum(len(t) for _, t in self._tables())

    def elements_of_type(self, type_id: str) -> list[str]:
        return list(self._by_type.get(type_id, ()))

    def events_of(self, endurant: str) -> list[str]:
        """Events linked to ``endurant`` by any E2O kind, in link insertion order."""
        self.endurant(endurant)
        return list(self._events_of.get(endurant, ()))

    def e2o_links_of(self, endurant: str) -> list[E2OLink]:
        return list(self._e2o_of.get(endurant, ()))

    def qualities_of(self, endurant: str) -> list[str]:
        return list(self._qualities_of.get(endurant, ()))

    def qvas_of(self, quality: str) -> list[str]:
        return list(self._qvas_of.get(quality, ()))

    def wholes_of(self, event: str) -> frozenset:
        return frozenset(self._wholes.get(event, ()))

    # insertion

    def insert(self, element: Union[Element, Link]):
        """Store ``element`` after checking it; returns its id (links return themselves).

        Raises DuplicateId, DanglingReference or InvariantViolation; the graph is
        unchanged when an error is raised.  Re-inserting an identical link is a no-op.
        """
        if isinstance(element, (E2OLink, E2ELink, QvasEventLink)):
            self._check_link(element)
            self._store(element)
            return element
        if not isinstance(element, (EndurantType, EventType, Endurant, Qvas, Event)):
            raise TypeError(f"cannot insert {type(element).__name__}")
        if not isinstance(element.id, str) or not element.id:
            raise InvariantViolation("id must be a non-empty string")
        if element.id in self:
            raise DuplicateId(element.id)
        getattr(self, "_check_" + type(element).__name__.lower())(element)
        self._store(element)
        return element.id

    def insert_all(self, elements: Iterable[Union[Element, Link]]) -> None:
        for el in elements:
            self.insert(el)

    def _store(self, element: Union[Element, Link]) -> None:
        """Store without checks.  Used by ``insert`` and by tests that need broken graphs."""
        if isinstance(element, EndurantType):
            self.endurant_types[element.id] = element
        elif isinstance(element, EventType):
            self.event_types[element.id] = element
        elif isinstance(element, Endurant):
            self.endurants[element.id] = element
        elif isinstance(element, Qvas):
            self.qvass[element.id] = element
        elif isinstance(element, Event):
            self.events[element.id] = element
        else:
            table = {E2OLink: self.e2o, E2ELink: self.e2e, QvasEventLink: self.qvas_links}[
                type(element)
            ]
            if element in table:
                return
            table[element] = None
            self._index_link(element)
            return
        self._index_element(element)

    def _check_enduranttype(self, t: EndurantType) -> None:
        if not isinstance(t.name, str) or not t.name:
            raise InvariantViolation(f"endurant type {t.id!r}: name must be non-empty")
        if not isinstance(t.sortal, SortalCategory):
            raise InvariantViolation(f"endurant type {t.id!r}: bad sortal {t.sortal!r}")

    def _check_eventtype(self, t: EventType) -> None:
        if not isinstance(t.name, str) or not t.name:
            raise InvariantViolation(f"event type {t.id!r}: name must be non-empty")

    def _check_endurant(self, e: Endurant) -> None:
        if e.type_ref not in self.endurant_types:
            raise DanglingReference(e.type_ref, e.id)
        if e.existence is not None and not e.existence.is_well_ordered:
            raise InvariantViolation(f"endurant {e.id!r}: existence ends before it begins")
        if e.category is EndurantCategory.QUALITY:
            if e.inheres_in is None:
                raise InvariantViolation(f"quality {e.id!r} must inhere in a bearer")
            if e.mediates:
                raise InvariantViolation(f"quality {e.id!r} cannot mediate")
            host = self.endurants.get(e.inheres_in)
            if host is None:
                raise DanglingReference(e.inheres_in, e.id)
            if host.category is EndurantCategory.QUALITY:
                raise InvariantViolation(f"quality {e.id!r} cannot inhere in quality {host.id!r}")
            if e.static_value is not None and not is_scalar(e.static_value):
                raise InvariantViolation(f"quality {e.id!r}: static value must be a scalar")
            return
        if e.inheres_in is not None:
            raise InvariantViolation(f"{e.category.value} {e.id!r} cannot inhere in anything")
        if e.static_value is not None:
            raise InvariantViolation(f"only qualities carry a static value ({e.id!r})")
        if e.category is EndurantCategory.RELATOR:
            if len(e.mediates) < self.min_mediation:
                raise InvariantViolation(
                    f"relator {e.id!r} mediates {len(e.mediates)} endurants,"
                    f" needs at least {self.min_mediation}"
                )
            for m in sorted(e.mediates):
                if m not in self.endurants:
                    raise DanglingReference(m, e.id)
        elif e.mediates:
            raise InvariantViolation(f"object {e.id!r} cannot mediate")

    def _check_qvas(self, q: Qvas) -> None:
        quality = self.endurants.get(q.quality_ref)
        if quality is None:
            raise DanglingReference(q.quality_ref, q.id)
        if quality.category is not EndurantCategory.QUALITY:
            raise InvariantViolation(f"qvas {q.id!r}: {q.quality_ref!r} is not a quality")
        if q.value is None or not is_scalar(q.value):
            raise InvariantViolation(f"qvas {q.id!r}: value must be a non-null scalar")
        if not q.validity.is_well_ordered:
            raise InvariantViolation(f"qvas {q.id!r}: validity ends before it begins")

    def _check_event(self, ev: Event) -> None:
        if ev.type_ref not in self.event_types:
            raise DanglingReference(ev.type_ref, ev.id)
        if ev.interval.end is None:
            raise InvariantViolation(f"event {ev.id!r} needs an end point")
        if not ev.interval.is_well_ordered:
            raise InvariantViolation(f"event {ev.id!r} ends before it begins")
        for name, value in ev.attributes.items():
            if not isinstance(name, str) or not is_scalar(value):
                raise InvariantViolation(f"event {ev.id!r}: attribute {name!r} is not scalar")

    def _check_link(self, link: Link) -> None:
        if isinstance(link, E2OLink):
            if link.event not in self.events:
                raise DanglingReference(link.event)
            if link.endurant not in self.endurants:
                raise DanglingReference(link.endurant)
            if not isinstance(link.kind, E2OKind):
                raise InvariantViolation(f"bad E2O kind {link.kind!r}")
        elif isinstance(link, E2ELink):
            for ref in (link.source, link.target):
                if ref not in self.events:
                    raise DanglingReference(ref)
            if link.source == link.target:
                raise InvariantViolation(f"event {link.source!r} cannot be related to itself")
            if not isinstance(link.kind, E2EKind):
                raise InvariantViolation(f"bad E2E kind {link.kind!r}")
            if link.kind is E2EKind.PROPER_PART_OF and link.target in self.parts_of(
                link.source, transitive=True
            ):
                raise InvariantViolation(
                    f"{link.source!r} part of {link.target!r} would make parthood cyclic"
                )
        else:
            if link.event not in self.events:
                raise DanglingReference(link.event)
            if link.qvas not in self.qvass:
                raise DanglingReference(link.qvas)
            if not isinstance(link.kind, QvasLinkKind):
                raise InvariantViolation(f"bad QVAS link kind {link.kind!r}")

    # mereology and mediation

    def parts_of(self, event: str, transitive: bool = False) -> frozenset:
        """Proper parts of ``event``: direct ones, or all of them when ``transitive``."""
        self.event(event)
        direct = self._parts.get(event, set())
        if not transitive:
            return frozenset(direct)
        seen: set[str] = set()
        stack = list(direct)
        while stack:
            p = stack.pop()
            if p in seen:
                continue
            seen.add(p)
            stack.extend(self._parts.get(p, ()))
        return frozenset(seen)

    def is_atomic(self, event: str) -> bool:
        return not self.parts_of(event)

    def mediated_by(self, relator: str) -> frozenset:
        r = self.endurant(relator)
        if r.category is not EndurantCategory.RELATOR:
            raise NotARelator(f"{relator!r} is a {r.category.value}, not a relator")
        return r.mediates

    # whole-graph helpers

    def integrity_errors(self) -> list[str]:
        """Full scan for references that do not resolve; empty on a sound graph."""
        errs = []
        for e in self.endurants.values():
            if e.type_ref not in self.endurant_types:
                errs.append(f"endurant {e.id}: type {e.type_ref}")
            if e.inheres_in is not None and e.inheres_in not in self.endurants:
                errs.append(f"endurant {e.id}: bearer {e.inheres_in}")
            errs.extend(f"relator {e.id}: {m}" for m in e.mediates if m not in self.endurants)
        for ev in self.events.values():
            if ev.type_ref not in self.event_types:
                errs.append(f"event {ev.id}: type {ev.type_ref}")
        for q in self.qvass.values():
            if q.quality_ref not in self.endurants:
                errs.append(f"qvas {q.id}: quality {q.quality_ref}")
        for link in self.e2o:
            if link.event not in self.events or link.endurant not in self.endurants:
                errs.append(f"link {link}")
        for link in self.e2e:
            if link.source not in self.events or link.target not in self.events:
                errs.append(f"link {link}")
        for link in self.qvas_links:
            if link.event not in self.events or link.qvas not in self.qvass:
                errs.append(f"link {link}")
        return errs

    def links(self) -> Iterator[Link]:
        yield from self.e2o
        yield from self.e2e
        yield from self.qvas_links

    def copy(self) -> GocedGraph:
        g = GocedGraph(self.min_mediation)
        for name, table in self._tables():
            getattr(g, _TABLE_ATTR[name]).update(table)
        g.e2o.update(self.e2o)
        g.e2e.update(self.e2e)
        g.qvas_links.update(self.qvas_links)
        g.rebuild_indexes()
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GocedGraph):
            return NotImplemented
        return (
            self.endurant_types == other.endurant_types
            and self.event_types == other.event_types
            and self.endurants == other.endurants
            and self.qvass == other.qvass
            and self.events == other.events
            and set(self.e2o) == set(other.e2o)
            and set(self.e2e) == set(other.e2e)
            and set(self.qvas_links) == set(other.qvas_links)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"<GocedGraph types={len(self.endurant_types)}+{len(self.event_types)}"
            f" endurants={len(self.endurants)} events={len(self.events)}"
            f" qvas={len(self.qvass)} links={len(self.e2o) + len(self.e2e) + len(self.qvas_links)}>"
        )


def dependency_order(endurants: Mapping[str, Endurant]) -> list[Endurant]:
    """Endurants ordered so that bearers and mediated endurants precede their dependents.

    References to ids outside ``endurants`` are ignored; cycles raise InvariantViolation.
    """
    deps = {i: ({e.inheres_in} if e.inheres_in else set()) | set(e.mediates) for i, e in endurants.items()}
    done: set[str] = set()
    order: list[Endurant] = []
    remaining = sorted(endurants)
    while remaining:
        ready = [i for i in remaining if all(d in done or d not in endurants for d in deps[i])]
        if not ready:
            raise InvariantViolation(f"circular dependence among endurants {remaining[:5]}")
        for i in ready:
            order.append(endurants[i])
            done.add(i)
        remaining = [i for i in remaining if i not in done]
    return order


_TABLE_ATTR = {
    "endurant_type": "endurant_types",
    "event_type": "event_types",
    "endurant": "endurants",
    "qvas": "qvass",
    "event": "events",
}
