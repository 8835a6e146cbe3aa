"""Deterministic Turtle output in gUFO terms, and a reader for that same subset.

Individuals are named ``<base><segment>/<percent-encoded id>``; the segment
tells what the id belongs to (see ``SEGMENTS``).  Event attributes, which the
model keeps inline on events, are written as qualities inhering in the event
under ``<base>eventAttribute/<event>/<name>``.  Statements are sorted by
subject, predicate and object, so equal graphs give byte-identical text.
"""

from __future__ import annotations

import re
from collections import defaultdict
from datetime import datetime
from typing import Iterator, Optional
from urllib.parse import quote, unquote

from ..errors import InputSyntaxError, InvalidBaseIri, InvariantViolation, UnsupportedConstruct
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

GUFO = "http://purl.org/nemo/gufo#"
GOCED = "https://w3id.org/goced/vocab#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

DATA_PREFIX = "data"
PREFIXES = {"gufo": GUFO, "goced": GOCED, "rdf": RDF, "rdfs": RDFS, "xsd": XSD}

RDF_TYPE = RDF + "type"
LABEL = RDFS + "label"
BEGIN = GUFO + "hasBeginPointInXSDDateTimeStamp"
END = GUFO + "hasEndPointInXSDDateTimeStamp"
EXISTS_FROM = GOCED + "existsFrom"
EXISTS_UNTIL = GOCED + "existsUntil"
INHERES_IN = GUFO + "inheresIn"
MEDIATES = GUFO + "mediates"
QUALITY_VALUE = GUFO + "hasQualityValue"
CONCERNS = GUFO + "concerns"
CONCERNS_TYPE = GUFO + "concernsQualityType"
CONCERNS_VALUE = GUFO + "concernsQualityValue"
PROPER_PART_OF = GUFO + "isEventProperPartOf"
DEPENDS_ON = GUFO + "historicallyDependsOn"
BROUGHT_ABOUT = GUFO + "broughtAbout"
TRIGGERS = GUFO + "contributedToTrigger"
QVAS_CLASS = GUFO + "QualityValueAttributionSituation"

SORTAL_CLASS = {
    SortalCategory.KIND: GUFO + "Kind",
    SortalCategory.PHASE: GUFO + "Phase",
    SortalCategory.ROLE: GUFO + "Role",
    SortalCategory.UNSPECIFIED: GUFO + "EndurantType",
}
CATEGORY_CLASS = {
    EndurantCategory.OBJECT: GUFO + "Object",
    EndurantCategory.QUALITY: GUFO + "Quality",
    EndurantCategory.RELATOR: GUFO + "Relator",
}
E2O_PREDICATE = {
    E2OKind.CREATED: GUFO + "wasCreatedIn",
    E2OKind.TERMINATED: GUFO + "wasTerminatedIn",
    E2OKind.PARTICIPATED: GUFO + "participatedIn",
}
SEGMENTS = {
    "endurant_type": "endurantType",
    "event_type": "eventType",
    EndurantCategory.OBJECT: "object",
    EndurantCategory.QUALITY: "quality",
    EndurantCategory.RELATOR: "relator",
    "event": "event",
    "qvas": "qvas",
}
EVENT_ATTRIBUTE = "eventAttribute"

_BASE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|^`\\]*[/#]$")


# -- terms -------------------------------------------------------------------------
# An IRI term is a plain str; a literal is a (lexical, datatype IRI) tuple.


def _literal(value) -> tuple[str, str]:
    if isinstance(value, bool):
        return ("true" if value else "false", XSD + "boolean")
    if isinstance(value, int):
        return (str(value), XSD + "integer")
    if isinstance(value, float):
        return (repr(value), XSD + "double")
    if isinstance(value, datetime):
        return (format_time(value), XSD + "dateTimeStamp")
    if isinstance(value, str):
        return (value, XSD + "string")
    raise InvariantViolation(f"cannot write {value!r} as a literal")


def _from_literal(term) -> object:
    if not isinstance(term, tuple):
        raise UnsupportedConstruct(f"expected a literal, got <{term}>")
    lexical, dtype = term
    try:
        if dtype == XSD + "string":
            return lexical
        if dtype == XSD + "boolean":
            return {"true": True, "false": False}[lexical]
        if dtype == XSD + "integer":
            return int(lexical)
        if dtype in (XSD + "double", XSD + "decimal"):
            return float(lexical)
    except (KeyError, ValueError):
        raise InputSyntaxError(f"bad {dtype} literal {lexical!r}") from None
    raise UnsupportedConstruct(f"unsupported datatype <{dtype}>")


def _time_literal(term) -> datetime:
    if not isinstance(term, tuple) or term[1] not in (XSD + "dateTimeStamp", XSD + "dateTime"):
        raise UnsupportedConstruct(f"expected a dateTimeStamp literal, got {term!r}")
    return parse_time(term[0])


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t", "\b": "\\b", "\f": "\\f"}


def _quote_string(s: str) -> str:
    out = []
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F or 0xD800 <= ord(ch) <= 0xDFFF:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _write_iri(iri: str) -> str:
    for prefix, ns in PREFIXES.items():
        if iri.startswith(ns):
            local = iri[len(ns) :]
            if re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", local):
                return f"{prefix}:{local}"
    return f"<{iri}>"


def _write_term(term) -> str:
    if isinstance(term, str):
        return _write_iri(term)
    lexical, dtype = term
    if dtype == XSD + "string":
        return _quote_string(lexical)
    if dtype in (XSD + "integer", XSD + "boolean"):
        return lexical
    return f"{_quote_string(lexical)}^^{_write_iri(dtype)}"


def _term_key(term) -> str:
    """N-Triples-like form used as the object sort key."""
    if isinstance(term, str):
        return f"<{term}>"
    return f"{_quote_string(term[0])}^^<{term[1]}>"


# -- writing ----------------------------------------------------------------------


def check_base_iri(base_iri: str) -> str:
    if not isinstance(base_iri, str) or not _BASE_RE.match(base_iri):
        raise InvalidBaseIri(f"base IRI must be absolute and end with '/' or '#': {base_iri!r}")
    return base_iri


class _Namer:
    def __init__(self, graph: GocedGraph, base: str):
        self.graph = graph
        self.base = base

    def _iri(self, segment: str, id_: str) -> str:
        return f"{self.base}{segment}/{quote(id_, safe='')}"

    def endurant_type(self, id_):
        return self._iri("endurantType", id_)

    def event_type(self, id_):
        return self._iri("eventType", id_)

    def endurant(self, id_):
        return self._iri(SEGMENTS[self.graph.endurants[id_].category], id_)

    def event(self, id_):
        return self._iri("event", id_)

    def qvas(self, id_):
        return self._iri("qvas", id_)

    def event_attribute(self, event_id, name):
        return f"{self.base}{EVENT_ATTRIBUTE}/{quote(event_id, safe='')}/{quote(name, safe='')}"


def graph_triples(graph: GocedGraph, base_iri: str) -> Iterator[tuple]:
    """All statements describing ``graph``, unsorted."""
    n = _Namer(graph, check_base_iri(base_iri))
    for t in graph.endurant_types.values():
        s = n.endurant_type(t.id)
        yield s, RDF_TYPE, SORTAL_CLASS[t.sortal]
        yield s, LABEL, _literal(t.name)
    for t in graph.event_types.values():
        s = n.event_type(t.id)
        yield s, RDF_TYPE, GUFO + "EventType"
        yield s, LABEL, _literal(t.name)
    for e in graph.endurants.values():
        s = n.endurant(e.id)
        yield s, RDF_TYPE, CATEGORY_CLASS[e.category]
        yield s, RDF_TYPE, n.endurant_type(e.type_ref)
        if e.label is not None:
            yield s, LABEL, _literal(e.label)
        if e.existence is not None:
            yield s, EXISTS_FROM, _literal(e.existence.begin)
            if e.existence.end is not None:
                yield s, EXISTS_UNTIL, _literal(e.existence.end)
        if e.inheres_in is not None:
            yield s, INHERES_IN, n.endurant(e.inheres_in)
        for m in e.mediates:
            yield s, MEDIATES, n.endurant(m)
        if e.static_value is not None:
            yield s, QUALITY_VALUE, _literal(e.static_value)
    for ev in graph.events.values():
        s = n.event(ev.id)
        yield s, RDF_TYPE, GUFO + "Event"
        yield s, RDF_TYPE, n.event_type(ev.type_ref)
        yield s, BEGIN, _literal(ev.begin)
        yield s, END, _literal(ev.end)
        for name, value in ev.attributes.items():
            a = n.event_attribute(ev.id, name)
            yield a, RDF_TYPE, CATEGORY_CLASS[EndurantCategory.QUALITY]
            yield a, INHERES_IN, s
            yield a, LABEL, _literal(name)
            yield a, QUALITY_VALUE, _literal(value)
    for q in graph.qvass.values():
        s = n.qvas(q.id)
        yield s, RDF_TYPE, QVAS_CLASS
        yield s, CONCERNS, n.endurant(q.quality_ref)
        yield s, CONCERNS_TYPE, n.endurant_type(graph.endurants[q.quality_ref].type_ref)
        yield s, CONCERNS_VALUE, _literal(q.value)
        yield s, BEGIN, _literal(q.validity.begin)
        if q.validity.end is not None:
            yield s, END, _literal(q.validity.end)
    for link in graph.e2o:
        yield n.endurant(link.endurant), E2O_PREDICATE[link.kind], n.event(link.event)
    for link in graph.e2e:
        p = PROPER_PART_OF if link.kind is E2EKind.PROPER_PART_OF else DEPENDS_ON
        yield n.event(link.source), p, n.event(link.target)
    for link in graph.qvas_links:
        if link.kind is QvasLinkKind.BROUGHT_ABOUT:
            yield n.event(link.event), BROUGHT_ABOUT, n.qvas(link.qvas)
        else:
            yield n.qvas(link.qvas), TRIGGERS, n.event(link.event)


def to_turtle(graph: GocedGraph, base_iri: str) -> str:
    triples = sorted(
        set(graph_triples(graph, base_iri)), key=lambda t: (t[0], t[1], _term_key(t[2]))
    )
    prefixes = dict(PREFIXES, **{DATA_PREFIX: check_base_iri(base_iri)})
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    by_subject: dict[str, list] = defaultdict(list)
    for s, p, o in triples:
        by_subject[s].append((p, o))
    for s, pos in by_subject.items():
        lines.append("")
        for i, (p, o) in enumerate(pos):
            verb = "a" if p == RDF_TYPE else _write_iri(p)
            head = f"<{s}> " if i == 0 else "    "
            tail = " ." if i == len(pos) - 1 else " ;"
            lines.append(f"{head}{verb} {_write_term(o)}{tail}")
    return "\n".join(lines) + "\n"


# -- reading ----------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<long_string>\"\"\"|''')
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<number>[+-]?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+))
  | (?P<pname>(?:[A-Za-z][\w\-]*)?:(?:[\w\-]+(?:\.[\w\-]+)*)?)
  | (?P<word>[A-Za-z_][\w\-]*)
  | (?P<punct>[.;,\[\]()])
    """,
    re.VERBOSE,
)

_STRING_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.DOTALL)
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(body: str, line: int) -> str:
    def sub(m):
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE_ESCAPES:
            raise InputSyntaxError(f"bad escape \\{ch}", f"line {line}")
        return _SIMPLE_ESCAPES[ch]

    return _STRING_ESCAPE.sub(sub, body)


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputSyntaxError(f"unexpected character {text[pos]!r}", f"line {line}")
        kind = m.lastgroup
        if kind == "long_string":
            raise UnsupportedConstruct(f"line {line}: long strings are not produced by the writer")
        if kind != "ws":
            out.append((kind, m.group(), line))
        line += m.group().count("\n")
        pos = m.end()
    return out


class _TurtleReader:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.triples: list[tuple] = []

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", self.toks[-1][2] if self.toks else 1)

    def _next(self):
        tok = self._peek()
        if tok[0] == "eof":
            raise InputSyntaxError("unexpected end of document", f"line {tok[2]}")
        self.i += 1
        return tok

    def _expect(self, value: str):
        tok = self._next()
        if tok[1] != value:
            raise InputSyntaxError(f"expected {value!r}, found {tok[1]!r}", f"line {tok[2]}")

    def parse(self) -> list[tuple]:
        while self._peek()[0] != "eof":
            kind, value, line = self._peek()
            if kind == "lang" and value == "@prefix":
                self._next()
                name = self._next()
                if name[0] != "pname" or not name[1].endswith(":"):
                    raise InputSyntaxError("bad prefix name", f"line {name[2]}")
                iri = self._next()
                if iri[0] != "iri":
                    raise InputSyntaxError("prefix needs an IRI", f"line {iri[2]}")
                self.prefixes[name[1][:-1]] = iri[1][1:-1]
                self._expect(".")
            elif kind == "lang" or (kind == "word" and value.upper() in ("PREFIX", "BASE")):
                raise UnsupportedConstruct(f"line {line}: directive {value!r}")
            else:
                self._statement()
        return self.triples

    def _iri(self, tok) -> str:
        kind, value, line = tok
        if kind == "iri":
            return value[1:-1]
        if kind == "pname":
            prefix, _, local = value.partition(":")
            if prefix not in self.prefixes:
                raise InputSyntaxError(f"undeclared prefix {prefix!r}", f"line {line}")
            return self.prefixes[prefix] + local
        if kind == "punct" and value in "[(":
            raise UnsupportedConstruct(f"line {line}: blank nodes and collections")
        raise InputSyntaxError(f"expected an IRI, found {value!r}", f"line {line}")

    def _object(self):
        kind, value, line = self._next()
        if kind == "string":
            lexical = _unescape(value[1:-1], line)
            nxt = self._peek()
            if nxt[0] == "dtype":
                self._next()
                return (lexical, self._iri(self._next()))
            if nxt[0] == "lang":
                raise UnsupportedConstruct(f"line {line}: language-tagged strings")
            return (lexical, XSD + "string")
        if kind == "number":
            if re.fullmatch(r"[+-]?\d+", value):
                return (value, XSD + "integer")
            return (value, XSD + ("double" if "e" in value.lower() else "decimal"))
        if kind == "word" and value in ("true", "false"):
            return (value, XSD + "boolean")
        return self._iri((kind, value, line))

    def _statement(self):
        subject = self._iri(self._next())
        while True:
            tok = self._next()
            predicate = RDF_TYPE if tok[:2] == ("word", "a") else self._iri(tok)
            while True:
                self.triples.append((subject, predicate, self._object()))
                if self._peek()[1] != ",":
                    break
                self._next()
            sep = self._next()
            if sep[1] == ".":
                return
            if sep[1] != ";":
                raise InputSyntaxError(f"expected ';' or '.', found {sep[1]!r}", f"line {sep[2]}")
            if self._peek()[1] == ".":
                self._next()
                return


_SEGMENT_KIND = {v: k for k, v in SEGMENTS.items()}


class _Decoder:
    """Maps individual IRIs back to (kind, id) relative to the document's base."""

    def __init__(self, base: str):
        self.base = base

    def split(self, iri: str) -> tuple[object, str]:
        if not iri.startswith(self.base):
            raise UnsupportedConstruct(f"IRI <{iri}> lies outside base <{self.base}>")
        parts = iri[len(self.base) :].split("/")
        if len(parts) == 3 and parts[0] == EVENT_ATTRIBUTE:
            return EVENT_ATTRIBUTE, unquote(parts[1])
        if len(parts) != 2 or parts[0] not in _SEGMENT_KIND:
            raise UnsupportedConstruct(f"IRI <{iri}> does not name a gOCED individual")
        return _SEGMENT_KIND[parts[0]], unquote(parts[1])

    def id_of(self, iri, expected) -> str:
        if not isinstance(iri, str):
            raise UnsupportedConstruct(f"expected an IRI, got literal {iri!r}")
        kind, id_ = self.split(iri)
        allowed = expected if isinstance(expected, tuple) else (expected,)
        if kind not in allowed:
            raise UnsupportedConstruct(f"<{iri}> is not a {' or '.join(map(str, allowed))}")
        return id_


_ENDURANT_KINDS = (EndurantCategory.OBJECT, EndurantCategory.QUALITY, EndurantCategory.RELATOR)
_CLASS_SORTAL = {v: k for k, v in SORTAL_CLASS.items()}
_CLASS_CATEGORY = {v: k for k, v in CATEGORY_CLASS.items()}
_PREDICATE_E2O = {v: k for k, v in E2O_PREDICATE.items()}


def _one(props: dict, key: str, subject: str, required: bool = True):
    values = props.get(key, [])
    if len(values) > 1:
        raise UnsupportedConstruct(f"<{subject}> has {len(values)} values for <{key}>")
    if not values:
        if required:
            raise UnsupportedConstruct(f"<{subject}> lacks <{key}>")
        return None
    return values[0]


_ALLOWED = {
    "endurant_type": {RDF_TYPE, LABEL},
    "event_type": {RDF_TYPE, LABEL},
    "endurant": {
        RDF_TYPE, LABEL, EXISTS_FROM, EXISTS_UNTIL, INHERES_IN, MEDIATES, QUALITY_VALUE,
        *E2O_PREDICATE.values(),
    },
    "event": {RDF_TYPE, BEGIN, END, PROPER_PART_OF, DEPENDS_ON, BROUGHT_ABOUT},
    "qvas": {RDF_TYPE, CONCERNS, CONCERNS_TYPE, CONCERNS_VALUE, BEGIN, END, TRIGGERS},
    "attribute": {RDF_TYPE, INHERES_IN, LABEL, QUALITY_VALUE},
}


def from_turtle(text: str, min_mediation: int = 2, base_iri: Optional[str] = None) -> GocedGraph:
    """Rebuild a graph from ``to_turtle`` output.

    Only the constructs the writer emits are understood; anything else raises
    UnsupportedConstruct.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = _TurtleReader(text)
    triples = reader.parse()
    base = base_iri or reader.prefixes.get(DATA_PREFIX)
    if base is None:
        if triples:
            raise UnsupportedConstruct(f"no base IRI: declare the {DATA_PREFIX!r} prefix")
        base = "urn:goced:"
    dec = _Decoder(base)
    _id_of, _split_iri = dec.id_of, dec.split
    subjects: dict[str, dict[str, list]] = defaultdict(lambda: defaultdict(list))
    for s, p, o in triples:
        if o not in subjects[s][p]:
            subjects[s][p].append(o)

    graph = GocedGraph(min_mediation)
    endurants: dict[str, Endurant] = {}
    events: list[tuple[str, dict]] = []
    qvass: list[tuple[str, dict]] = []
    attributes: dict[str, dict] = defaultdict(dict)
    pending_links: list = []

    for s in sorted(subjects):
        props = subjects[s]
        classes = props.get(RDF_TYPE, [])
        gufo_classes = [c for c in classes if isinstance(c, str) and c.startswith(GUFO)]
        if len(gufo_classes) != 1:
            raise UnsupportedConstruct(f"<{s}> must have exactly one gUFO class, has {len(gufo_classes)}")
        cls = gufo_classes[0]
        subject_kind, subject_id = _split_iri(s)
        if subject_kind == EVENT_ATTRIBUTE:
            role = "attribute"
        elif cls in _CLASS_SORTAL:
            role = "endurant_type"
        elif cls == GUFO + "EventType":
            role = "event_type"
        elif cls in _CLASS_CATEGORY:
            role = "endurant"
        elif cls == GUFO + "Event":
            role = "event"
        elif cls == QVAS_CLASS:
            role = "qvas"
        else:
            raise UnsupportedConstruct(f"unknown class <{cls}>")
        unknown = set(props) - _ALLOWED[role]
        if unknown:
            raise UnsupportedConstruct(f"unknown predicate <{sorted(unknown)[0]}> on <{s}>")
        others = [c for c in classes if c != cls]

        if role == "attribute":
            if cls != CATEGORY_CLASS[EndurantCategory.QUALITY] or others:
                raise UnsupportedConstruct(f"event attribute <{s}> must be a plain gufo:Quality")
            event_id = _id_of(_one(props, INHERES_IN, s), "event")
            if subject_id != event_id:
                raise UnsupportedConstruct(f"event attribute <{s}> inheres in the wrong event")
            name = _from_literal(_one(props, LABEL, s))
            attributes[event_id][name] = _from_literal(_one(props, QUALITY_VALUE, s))
        elif role in ("endurant_type", "event_type"):
            kind, id_ = _split_iri(s)
            if kind != role or others:
                raise UnsupportedConstruct(f"<{s}> is not a well-formed {role}")
            name = _from_literal(_one(props, LABEL, s))
            if role == "endurant_type":
                graph.insert(EndurantType(id_, name, _CLASS_SORTAL[cls]))
            else:
                graph.insert(EventType(id_, name))
        elif role == "endurant":
            category = _CLASS_CATEGORY[cls]
            id_ = _id_of(s, category)
            if len(others) != 1:
                raise UnsupportedConstruct(f"<{s}> needs exactly one endurant type")
            begin = _one(props, EXISTS_FROM, s, required=False)
            until = _one(props, EXISTS_UNTIL, s, required=False)
            if until is not None and begin is None:
                raise UnsupportedConstruct(f"<{s}> has an existence end but no begin")
            existence = None
            if begin is not None:
                existence = TimeInterval(
                    _time_literal(begin), _time_literal(until) if until is not None else None
                )
            host = _one(props, INHERES_IN, s, required=False)
            label = _one(props, LABEL, s, required=False)
            value = _one(props, QUALITY_VALUE, s, required=False)
            endurants[id_] = Endurant(
                id_,
                _id_of(others[0], "endurant_type"),
                category,
                label=_from_literal(label) if label is not None else None,
                existence=existence,
                inheres_in=_id_of(host, _ENDURANT_KINDS) if host is not None else None,
                mediates=frozenset(_id_of(x, _ENDURANT_KINDS) for x in props.get(MEDIATES, [])),
                static_value=_from_literal(value) if value is not None else None,
            )
            for pred, kind in _PREDICATE_E2O.items():
                for ev in props.get(pred, []):
                    pending_links.append(E2OLink(_id_of(ev, "event"), id_, kind))
        elif role == "event":
            id_ = _id_of(s, "event")
            if len(others) != 1:
                raise UnsupportedConstruct(f"<{s}> needs exactly one event type")
            events.append((id_, props))
            for whole in props.get(PROPER_PART_OF, []):
                pending_links.append(E2ELink(id_, _id_of(whole, "event"), E2EKind.PROPER_PART_OF))
            for dep in props.get(DEPENDS_ON, []):
                pending_links.append(
                    E2ELink(id_, _id_of(dep, "event"), E2EKind.HISTORICALLY_DEPENDS_ON)
                )
            for q in props.get(BROUGHT_ABOUT, []):
                pending_links.append(QvasEventLink(id_, _id_of(q, "qvas"), QvasLinkKind.BROUGHT_ABOUT))
        else:
            id_ = _id_of(s, "qvas")
            if others:
                raise UnsupportedConstruct(f"<{s}> has extra classes")
            qvass.append((id_, props))
            for ev in props.get(TRIGGERS, []):
                pending_links.append(
                    QvasEventLink(_id_of(ev, "event"), id_, QvasLinkKind.CONTRIBUTED_TO_TRIGGER)
                )

    for e in dependency_order(endurants):
        graph.insert(e)
    for id_, props in events:
        type_iri = next(c for c in props[RDF_TYPE] if not c.startswith(GUFO))
        interval = TimeInterval(
            _time_literal(_one(props, BEGIN, id_)), _time_literal(_one(props, END, id_))
        )
        graph.insert(Event(id_, _id_of(type_iri, "event_type"), interval, attributes.pop(id_, {})))
    if attributes:
        raise UnsupportedConstruct(f"attributes for unknown event {sorted(attributes)[0]!r}")
    for id_, props in qvass:
        end = _one(props, END, id_, required=False)
        validity = TimeInterval(
            _time_literal(_one(props, BEGIN, id_)), _time_literal(end) if end is not None else None
        )
        quality = _id_of(_one(props, CONCERNS, id_), EndurantCategory.QUALITY)
        graph.insert(Qvas(id_, quality, _from_literal(_one(props, CONCERNS_VALUE, id_)), validity))
    for link in pending_links:
        graph.insert(link)
    return graph
