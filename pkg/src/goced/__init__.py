"""Object-centric event data lifted into gUFO terms (the gOCED metamodel).

Read OCEL 2.0 logs, event tables or EKG dumps into a ``GocedGraph``, check it
with ``validate``, derive temporal relations and snapshots, and write it out as
Turtle or canonical JSON.
"""

from .errors import *  # noqa: F401,F403
from .export import from_canonical_json, from_turtle, to_canonical_json, to_turtle
from .ingestion import (
    MappingConfig,
    ekg_to_goced,
    ocel_to_goced,
    parse_ekg,
    parse_event_table,
    parse_ocel2,
    reify_coparticipation,
)
from .model import (
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
    format_time,
    parse_time,
)
from .temporal import (
    AllenRelation,
    Snapshot,
    allen_relation,
    directly_follows,
    event_allen,
    hd_closure,
    qvas_history,
    snapshot,
)
from .validation import ValidationConfig, Violation, validate

__version__ = "0.1.0"
