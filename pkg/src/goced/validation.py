"""Axiom and coherence checks over a GocedGraph.

Each rule is a function yielding Violations.  ``validate`` runs the enabled
ones and returns the violations in canonical order; it never raises on a bad
graph.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import _digraph
from .model import E2EKind, E2OKind, EndurantCategory, GocedGraph, QvasLinkKind


@dataclass(frozen=True)
class Violation:
    rule: str
    subjects: tuple
    message: str

    def __post_init__(self):
        object.__setattr__(self, "subjects", tuple(self.subjects))

    def sort_key(self):
        return (self.rule, self.subjects, self.message)

    def to_json(self) -> str:
        return json.dumps(
            {"rule": self.rule, "subjects": list(self.subjects), "message": self.message},
            ensure_ascii=False,
            separators=(",", ":"),
        )


def write_jsonl(violations: Iterable[Violation]) -> str:
    return "".join(v.to_json() + "\n" for v in violations)


RULES: dict[str, Callable[[GocedGraph, "ValidationConfig"], Iterator[Violation]]] = {}


def _rule(code: str):
    def register(fn):
        RULES[code] = fn
        return fn

    return register


OPTIONAL_RULES = frozenset({"HD02"})


@dataclass(frozen=True)
class ValidationConfig:
    enabled_rules: frozenset = field(default=None)  # type: ignore[assignment]
    min_mediation: int = 2

    def __post_init__(self):
        rules = self.enabled_rules
        if rules is None:
            rules = frozenset(RULES) - OPTIONAL_RULES
        rules = frozenset(rules)
        unknown = rules - set(RULES)
        if unknown:
            raise ValueError(f"unknown rule codes: {', '.join(sorted(unknown))}")
        if not isinstance(self.min_mediation, int) or self.min_mediation < 1:
            raise ValueError("min_mediation must be an integer >= 1")
        object.__setattr__(self, "enabled_rules", rules)

    @classmethod
    def parse_rules(cls, spec: str, min_mediation: int = 2) -> ValidationConfig:
        """Build a config from ``all``, ``default`` or a comma list like ``WS01,EX01``."""
        spec = spec.strip()
        if spec == "all":
            return cls(frozenset(RULES), min_mediation)
        if spec == "default":
            return cls(None, min_mediation)
        return cls(frozenset(c.strip().upper() for c in spec.split(",") if c.strip()), min_mediation)


def validate(graph: GocedGraph, config: ValidationConfig | None = None) -> list[Violation]:
    config = config or ValidationConfig()
    found = []
    for code in sorted(config.enabled_rules):
        found.extend(RULES[code](graph, config))
    return sorted(set(found), key=Violation.sort_key)


# -- mereology -----------------------------------------------------------------


def _down_sets(graph: GocedGraph) -> dict[str, frozenset]:
    """Each event together with all its (transitive) proper parts."""
    return {e: graph.parts_of(e, transitive=True) | {e} for e in graph.events}


@_rule("WS01")
def weak_supplementation(graph, config):
    """Every proper part of a whole has a disjoint sibling part."""
    down = None
    for whole in sorted(graph.events):
        parts = graph.parts_of(whole, transitive=True)
        if not parts:
            continue
        if down is None:
            down = _down_sets(graph)
        lonely = sorted(
            x for x in parts if not any(not (down[x] & down[y]) for y in parts if y != x)
        )
        if lonely:
            yield Violation(
                "WS01",
                (whole, *lonely),
                f"event {whole} has proper part(s) {', '.join(lonely)} without a disjoint"
                " supplementing part",
            )


@_rule("EX01")
def extensionality(graph, config):
    groups: dict[frozenset, list[str]] = defaultdict(list)
    for e in graph.events:
        parts = graph.parts_of(e)
        if parts:
            groups[parts].append(e)
    for parts, wholes in groups.items():
        if len(wholes) > 1:
            wholes = sorted(wholes)
            yield Violation(
                "EX01",
                tuple(wholes),
                f"distinct events {', '.join(wholes)} share the part set"
                f" {{{', '.join(sorted(parts))}}}",
            )


def _e2e_adjacency(graph, kind):
    return _digraph.adjacency((l.source, l.target) for l in graph.e2e if l.kind is kind)


@_rule("PP01")
def part_acyclicity(graph, config):
    for comp in _digraph.cyclic_components(_e2e_adjacency(graph, E2EKind.PROPER_PART_OF)):
        yield Violation("PP01", tuple(comp), "parthood cycle through " + ", ".join(comp))


@_rule("PP02")
def part_within_whole(graph, config):
    ev = graph.events
    for link in graph.e2e:
        if link.kind is not E2EKind.PROPER_PART_OF:
            continue
        part, whole = ev[link.source].interval, ev[link.target].interval
        if part.begin < whole.begin or part.end > whole.end:
            yield Violation(
                "PP02",
                (link.source, link.target),
                f"part {link.source} is not within the span of whole {link.target}",
            )


# -- time ------------------------------------------------------------------------


@_rule("TM01")
def interval_sanity(graph, config):
    for e in graph.events.values():
        if e.end is None or e.end < e.begin:
            yield Violation("TM01", (e.id,), f"event {e.id} has a malformed interval")
    for q in graph.qvass.values():
        if not q.validity.is_well_ordered:
            yield Violation("TM01", (q.id,), f"value attribution {q.id} ends before it begins")


@_rule("QV01")
def qvas_non_overlap(graph, config):
    by_quality = defaultdict(list)
    for q in graph.qvass.values():
        by_quality[q.quality_ref].append(q)
    for quality, items in by_quality.items():
        items.sort(key=lambda q: q.id)
        for i, a in enumerate(items):
            for b in items[i + 1 :]:
                if a.validity.overlaps(b.validity):
                    yield Violation(
                        "QV01",
                        (quality, a.id, b.id),
                        f"value attributions {a.id} and {b.id} of {quality} overlap",
                    )


# -- endurants ------------------------------------------------------------------


@_rule("RL01")
def mediation_arity(graph, config):
    for r in graph.endurants.values():
        if r.category is EndurantCategory.RELATOR and len(r.mediates) < config.min_mediation:
            yield Violation(
                "RL01",
                (r.id,),
                f"relator {r.id} mediates {len(r.mediates)} endurant(s),"
                f" at least {config.min_mediation} required",
            )


def _lifecycle(graph):
    created, terminated, participated = (defaultdict(list) for _ in range(3))
    table = {
        E2OKind.CREATED: created,
        E2OKind.TERMINATED: terminated,
        E2OKind.PARTICIPATED: participated,
    }
    for link in graph.e2o:
        table[link.kind][link.endurant].append(link.event)
    return created, terminated, participated


@_rule("EO01")
def lifecycle_uniqueness(graph, config):
    created, terminated, _ = _lifecycle(graph)
    for label, table in (("created", created), ("terminated", terminated)):
        for endurant, events in table.items():
            if len(events) > 1:
                events = sorted(events)
                yield Violation(
                    "EO01",
                    (endurant, *events),
                    f"{endurant} is {label} by more than one event: {', '.join(events)}",
                )


@_rule("EO02")
def lifecycle_order(graph, config):
    ev = graph.events
    created, terminated, participated = _lifecycle(graph)
    for endurant in sorted(set(created) | set(terminated)):
        for c in created.get(endurant, ()):
            for t in terminated.get(endurant, ()):
                if ev[c].end > ev[t].begin:
                    yield Violation(
                        "EO02",
                        (endurant, c, t),
                        f"{endurant} is terminated by {t} before its creation by {c} ends",
                    )
        for p in participated.get(endurant, ()):
            for c in created.get(endurant, ()):
                if ev[p].begin < ev[c].begin:
                    yield Violation(
                        "EO02",
                        (endurant, p, c),
                        f"{endurant} participates in {p} before it is created by {c}",
                    )
            for t in terminated.get(endurant, ()):
                if ev[p].end > ev[t].end:
                    yield Violation(
                        "EO02",
                        (endurant, p, t),
                        f"{endurant} participates in {p} after it is terminated by {t}",
                    )


# -- value attributions and events -----------------------------------------------


@_rule("QE01")
def brought_about_coherence(graph, config):
    for link in graph.qvas_links:
        if link.kind is not QvasLinkKind.BROUGHT_ABOUT:
            continue
        if graph.qvass[link.qvas].validity.begin < graph.events[link.event].begin:
            yield Violation(
                "QE01",
                (link.event, link.qvas),
                f"{link.qvas} holds before {link.event}, which supposedly brought it about",
            )


@_rule("QE02")
def trigger_coherence(graph, config):
    for link in graph.qvas_links:
        if link.kind is not QvasLinkKind.CONTRIBUTED_TO_TRIGGER:
            continue
        if not graph.qvass[link.qvas].validity.contains(graph.events[link.event].begin):
            yield Violation(
                "QE02",
                (link.event, link.qvas),
                f"{link.qvas} does not hold when {link.event}, which it triggers, begins",
            )


@_rule("HD01")
def dependence_acyclicity(graph, config):
    adj = _e2e_adjacency(graph, E2EKind.HISTORICALLY_DEPENDS_ON)
    for comp in _digraph.cyclic_components(adj):
        yield Violation("HD01", tuple(comp), "historical dependence cycle through " + ", ".join(comp))


@_rule("HD02")
def dependence_order(graph, config):
    ev = graph.events
    for link in graph.e2e:
        if link.kind is not E2EKind.HISTORICALLY_DEPENDS_ON:
            continue
        if ev[link.target].begin > ev[link.source].begin:
            yield Violation(
                "HD02",
                (link.source, link.target),
                f"{link.source} begins before {link.target}, on which it depends",
            )
