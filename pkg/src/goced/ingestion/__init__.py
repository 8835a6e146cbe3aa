from .ekg import EkgDump, EkgEdge, EkgNode, ekg_to_goced, parse_ekg
from .ocel import (
    MappingConfig,
    OcelAttributeValue,
    OcelEvent,
    OcelLog,
    OcelObject,
    OcelRelationship,
    OcelTypeDecl,
    ocel_to_goced,
    parse_ocel2,
)
from .readings import JOINT, SEPARATE, reify_coparticipation
from .table import parse_event_table

__all__ = [
    "EkgDump",
    "EkgEdge",
    "EkgNode",
    "JOINT",
    "MappingConfig",
    "OcelAttributeValue",
    "OcelEvent",
    "OcelLog",
    "OcelObject",
    "OcelRelationship",
    "OcelTypeDecl",
    "SEPARATE",
    "ekg_to_goced",
    "ocel_to_goced",
    "parse_ekg",
    "parse_event_table",
    "reify_coparticipation",
]
