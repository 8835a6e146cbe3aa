from .canonical_json import from_canonical_json, to_canonical_json, to_document
from .turtle import GUFO, check_base_iri, from_turtle, graph_triples, to_turtle

__all__ = [
    "GUFO",
    "check_base_iri",
    "from_canonical_json",
    "from_turtle",
    "graph_triples",
    "to_canonical_json",
    "to_document",
    "to_turtle",
]
