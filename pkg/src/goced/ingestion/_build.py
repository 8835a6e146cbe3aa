from __future__ import annotations

from ..model import EndurantType, EventType, GocedGraph, SortalCategory


class GraphBuilder:
    """Wraps a graph with get-or-create for types and collision-free derived ids."""

    def __init__(self, graph: GocedGraph, reserved: frozenset | set = frozenset()):
        self.graph = graph
        self.reserved = set(reserved)
        self._types: dict[tuple[str, str], str] = {}

    def fresh_id(self, base: str) -> str:
        candidate, n = base, 1
        while candidate in self.graph or candidate in self.reserved:
            n += 1
            candidate = f"{base}#{n}"
        self.reserved.add(candidate)
        return candidate

    def endurant_type(self, key: str, name: str, sortal=SortalCategory.UNSPECIFIED) -> str:
        memo = ("endurant", key)
        if memo not in self._types:
            type_id = self.fresh_id(key)
            self.graph.insert(EndurantType(type_id, name, sortal))
            self._types[memo] = type_id
        return self._types[memo]

    def event_type(self, name: str) -> str:
        memo = ("event", name)
        if memo not in self._types:
            type_id = self.fresh_id(f"EventType/{name}")
            self.graph.insert(EventType(type_id, name))
            self._types[memo] = type_id
        return self._types[memo]

    def object_type(self, name: str) -> str:
        return self.endurant_type(f"ObjectType/{name}", name)

    def relator_type(self, name: str) -> str:
        return self.endurant_type(f"RelatorType/{name}", name)
