"""Flat event tables: one row per event, related objects as a ``;``-separated list."""

from __future__ import annotations

import csv
import io
from typing import Union

from ..errors import InputSyntaxError, MissingColumn, SchemaError
from ..model import E2OKind, E2OLink, Endurant, EndurantCategory, Event, GocedGraph, TimeInterval, parse_time
from ._build import GraphBuilder

TABLE_COLUMNS = ("event_id", "event_type", "timestamp", "related_objects")
DEFAULT_OBJECT_TYPE = "Object"


def _decode(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise InputSyntaxError(f"not UTF-8: {exc}") from None


def read_csv(data: Union[bytes, str], columns: tuple) -> list[dict[str, str]]:
    """Rows of a CSV whose header must name exactly ``columns`` (any order)."""
    reader = csv.reader(io.StringIO(_decode(data), newline=""), strict=True)
    try:
        header = next(reader, None)
        if header is None:
            raise MissingColumn(columns[0])
        header = [h.strip() for h in header]
        for col in columns:
            if col not in header:
                raise MissingColumn(col)
        extra = [h for h in header if h not in columns]
        if extra or len(header) != len(columns):
            raise SchemaError("header", f"unexpected columns {extra or header}")
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputSyntaxError(
                    f"expected {len(header)} fields, got {len(row)}", f"line {reader.line_num}"
                )
            rows.append({h: c.strip() for h, c in zip(header, row)} | {"_line": str(reader.line_num)})
        return rows
    except csv.Error as exc:
        raise InputSyntaxError(str(exc), f"line {reader.line_num}") from None


def parse_event_table(data: Union[bytes, str], min_mediation: int = 2) -> GocedGraph:
    """Build a graph from an event table.

    Each row is an atomic point event; each related object id becomes an
    Object endurant of type ``Object`` on first sight and gets a Participated
    link to the event.
    """
    rows = read_csv(data, TABLE_COLUMNS)
    graph = GocedGraph(min_mediation)
    event_ids = {r["event_id"] for r in rows}
    object_ids = {o.strip() for r in rows for o in r["related_objects"].split(";")}
    b = GraphBuilder(graph, event_ids | object_ids)
    seen_events: set[str] = set()
    for row in rows:
        where = f"line {row['_line']}"
        eid, etype = row["event_id"], row["event_type"]
        if not eid or not etype:
            raise SchemaError(where, "event_id and event_type must be non-empty")
        if eid in seen_events:
            raise SchemaError(where, f"duplicate event id {eid!r}")
        seen_events.add(eid)
        try:
            t = parse_time(row["timestamp"])
        except InputSyntaxError as exc:
            raise InputSyntaxError(str(exc), where) from None
        objects = [o.strip() for o in row["related_objects"].split(";") if o.strip()]
        for oid in objects:
            if oid in event_ids:
                raise SchemaError(where, f"object id {oid!r} is also an event id")
            if oid not in graph.endurants:
                graph.insert(Endurant(oid, b.object_type(DEFAULT_OBJECT_TYPE), EndurantCategory.OBJECT))
        graph.insert(Event(eid, b.event_type(etype), TimeInterval(t, t)))
        for oid in objects:
            graph.insert(E2OLink(eid, oid, E2OKind.PARTICIPATED))
    return graph
