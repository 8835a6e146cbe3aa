import json
import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from goced.errors import InputSyntaxError, MissingColumn, SchemaError
from goced.ingestion import (
    JOINT,
    SEPARATE,
    MappingConfig,
    ekg_to_goced,
    ocel_to_goced,
    parse_ekg,
    parse_event_table,
    parse_ocel2,
    reify_coparticipation,
)
from goced.model import E2OKind, EndurantCategory, QvasLinkKind, parse_time
from goced.validation import validate

T1, T2 = parse_time("2024-01-10T09:00:00Z"), parse_time("2024-01-11T10:30:00Z")


def minimal_log(**overrides):
    doc = {
        "objectTypes": [{"name": "order", "attributes": [{"name": "price", "type": "float"}]}],
        "eventTypes": [{"name": "place", "attributes": []}],
        "objects": [{"id": "o1", "type": "order"}],
        "events": [
            {"id": "e1", "type": "place", "time": "2024-01-10T09:00:00Z", "relationships": [{"objectId": "o1", "qualifier": "x"}]}
        ],
    }
    doc.update(overrides)
    return doc


def lift(doc, config=None):
    return ocel_to_goced(parse_ocel2(json.dumps(doc).encode()), config)


def by_category(g, cat):
    return sorted(e for e, x in g.endurants.items() if x.category is cat)


# -- OCEL parsing -------------------------------------------------------------------------


def test_minimal_log_counts():
    log = parse_ocel2(json.dumps(minimal_log()).encode())
    assert (len(log.object_types), len(log.event_types), len(log.objects), len(log.events)) == (1, 1, 1, 1)
    assert log.events[0].relationships[0].target == "o1"


@pytest.mark.parametrize(
    "patch",
    [
        lambda d: d["events"][0]["relationships"].append({"objectId": "ghost"}),
        lambda d: d["objects"].append({"id": "o1", "type": "order"}),
        lambda d: d["objects"].append({"id": "o2", "type": "undeclared"}),
        lambda d: d["events"][0].update(type="nope"),
        lambda d: d["events"][0].pop("time"),
        lambda d: d["events"][0].update(time="not a time"),
        lambda d: d.pop("objects"),
        lambda d: d["objects"][0].update(attributes=[{"name": "price", "value": "cheap"}]),
        lambda d: d["objects"][0].update(attributes=[{"name": "price", "value": [1]}]),
        lambda d: d["objects"][0].update(relationships=[{"objectId": "ghost"}]),
    ],
)
def test_structural_errors_are_schema_errors(patch):
    doc = minimal_log()
    patch(doc)
    with pytest.raises(SchemaError):
        parse_ocel2(json.dumps(doc))


@pytest.mark.parametrize("raw", [b"{", b"\xff\xfe", b""])
def test_malformed_json_is_a_syntax_error(raw):
    with pytest.raises(InputSyntaxError):
        parse_ocel2(raw)


def test_values_follow_declared_types_and_nulls_are_skipped(caplog):
    doc = minimal_log()
    doc["objects"][0]["attributes"] = [
        {"name": "price", "time": "1970-01-01T00:00:00Z", "value": "12.5"},
        {"name": "price", "time": "2024-01-10T09:00:00Z", "value": None},
    ]
    with caplog.at_level(logging.WARNING):
        log = parse_ocel2(json.dumps(doc))
    assert [(a.value, a.is_static) for a in log.objects[0].attributes] == [(12.5, True)]
    assert "null" in caplog.text


def test_unknown_relationship_fields_are_ignored_with_a_warning(caplog):
    doc = minimal_log()
    doc["objects"].append({"id": "o2", "type": "order", "relationships": [{"objectId": "o1", "qualifier": "q", "validFrom": "2024"}]})
    with caplog.at_level(logging.WARNING):
        g = lift(doc)
    assert "validFrom" in caplog.text
    assert by_category(g, EndurantCategory.RELATOR) == ["q(o2,o1)"]


# -- OCEL lifting ---------------------------------------------------------------------------


@pytest.fixture
def purchase(data_dir):
    return ocel_to_goced(parse_ocel2((data_dir / "purchase_order.json").read_bytes()))


def test_purchase_order_structure(purchase):
    g = purchase
    assert by_category(g, EndurantCategory.OBJECT) == ["I", "PO"]
    assert by_category(g, EndurantCategory.QUALITY) == ["PO/Release Status"]
    assert len(by_category(g, EndurantCategory.RELATOR)) == 1
    assert g.mediated_by(by_category(g, EndurantCategory.RELATOR)[0]) == {"PO", "I"}
    assert g.endurants[by_category(g, EndurantCategory.RELATOR)[0]].existence is None
    chain = sorted(g.qvass.values(), key=lambda v: v.validity.begin)
    assert [(v.value, v.validity.begin, v.validity.end) for v in chain] == [
        ("non-released", T1, T2),
        ("released", T2, None),
    ]
    assert len(g.events) == 3 and all(g.is_atomic(e) and g.events[e].interval.is_point for e in g.events)
    kinds = {(l.event, l.endurant): l.kind for l in g.e2o}
    assert kinds == {
        ("e1", "PO"): E2OKind.CREATED,
        ("e2", "PO"): E2OKind.PARTICIPATED,
        ("e3", "I"): E2OKind.CREATED,
        ("e3", "PO"): E2OKind.PARTICIPATED,
    }
    brought = {(l.event, g.qvass[l.qvas].value) for l in g.qvas_links if l.kind is QvasLinkKind.BROUGHT_ABOUT}
    assert brought == {("e1", "non-released"), ("e2", "released")}
    assert validate(g) == []


def test_empty_log_gives_empty_graph():
    g = lift({"objectTypes": [], "eventTypes": [], "objects": [], "events": []})
    assert g.element_count() == 0 and not list(g.links())


def test_qualifier_map_is_configurable():
    doc = minimal_log()
    doc["events"][0]["relationships"][0]["qualifier"] = "MODIFY"
    assert next(iter(lift(doc).e2o)).kind is E2OKind.PARTICIPATED
    config = MappingConfig(e2o_qualifier_map={"MODIFY": E2OKind.CREATED})
    assert next(iter(lift(doc, config).e2o)).kind is E2OKind.CREATED


def test_relator_types_keep_qualifiers_verbatim():
    doc = minimal_log()
    doc["objects"].append({"id": "o2", "type": "order", "relationships": [
        {"objectId": "o1", "qualifier": "Contains"}, {"objectId": "o1", "qualifier": "contains"},
        {"objectId": "o1", "qualifier": "contains"}]})
    g = lift(doc)
    relators = by_category(g, EndurantCategory.RELATOR)
    assert relators == ["Contains(o2,o1)", "contains(o2,o1)", "contains(o2,o1)#2"]
    names = sorted(g.endurant_types[g.endurants[r].type_ref].name for r in relators)
    assert names == ["Contains", "contains", "contains"]
    named = lift(doc, MappingConfig(relator_type_naming="O2O {qualifier}"))
    assert {named.endurant_types[named.endurants[r].type_ref].name for r in relators} == {"O2O Contains", "O2O contains"}


def test_self_relation_is_skipped(caplog):
    doc = minimal_log()
    doc["objects"][0]["relationships"] = [{"objectId": "o1", "qualifier": "self"}]
    with caplog.at_level(logging.WARNING):
        g = lift(doc)
    assert by_category(g, EndurantCategory.RELATOR) == []
    assert "itself" in caplog.text


def test_conflicting_lifecycle_links_are_demoted():
    doc = minimal_log()
    doc["events"] = [
        {"id": f"e{i}", "type": "place", "time": f"2024-01-1{i}T00:00:00Z",
         "relationships": [{"objectId": "o1", "qualifier": q}]}
        for i, q in enumerate(["delete", "create", "create", "x"])
    ]
    g = lift(doc)
    kinds = {l.event: l.kind for l in g.e2o}
    # The only creation at the first instant is none; the deletion comes first, so nothing survives.
    assert set(kinds.values()) == {E2OKind.PARTICIPATED}
    assert validate(g) == []


def test_event_id_clashing_with_object_is_renamed():
    doc = minimal_log()
    doc["events"][0]["id"] = "o1"
    g = lift(doc)
    assert "o1" in g.endurants and list(g.events) == ["o1#2"]
    assert next(iter(g.e2o)).event == "o1#2"


def test_same_instant_values_keep_the_last():
    doc = minimal_log()
    doc["objects"][0]["attributes"] = [
        {"name": "price", "time": "2024-01-10T09:00:00Z", "value": 1},
        {"name": "price", "time": "2024-01-10T09:00:00Z", "value": 2},
    ]
    g = lift(doc)
    assert [v.value for v in g.qvass.values()] == [2.0]


def test_ingestion_is_deterministic():
    doc = gen.ocel_log(random.Random(7))
    raw = gen.ocel_bytes(doc)
    a, b = ocel_to_goced(parse_ocel2(raw)), ocel_to_goced(parse_ocel2(raw))
    assert a == b
    assert list(a.endurants) == list(b.endurants) and list(a.e2o) == list(b.e2o)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_logs_lift_cleanly_and_preserve_counts(rng):
    doc = gen.ocel_log(rng)
    g = ocel_to_goced(parse_ocel2(gen.ocel_bytes(doc)))
    assert len(by_category(g, EndurantCategory.OBJECT)) == len(doc["objects"])
    assert len(g.events) == len(doc["events"])
    assert len(by_category(g, EndurantCategory.RELATOR)) == sum(len(o["relationships"]) for o in doc["objects"])
    assert len(g.e2o) == sum(len(e["relationships"]) for e in doc["events"])
    for q in by_category(g, EndurantCategory.QUALITY):
        chain = sorted(g.qvass[v].validity.begin for v in g.qvas_of(q))
        assert chain == sorted(set(chain))
    assert validate(g) == []


def test_supervision_as_ocel_matches_the_table(data_dir):
    doc = {
        "objectTypes": [{"name": "Object"}],
        "eventTypes": [{"name": "assign student"}],
        "objects": [{"id": o, "type": "Object"} for o in ("M", "S", "D")],
        "events": [
            {"id": "e1", "type": "assign student", "time": "2024-01-10T09:00:00Z",
             "relationships": [{"objectId": "M"}, {"objectId": "S"}]},
            {"id": "e2", "type": "assign student", "time": "2024-03-01T09:00:00Z",
             "relationships": [{"objectId": "D"}, {"objectId": "S"}]},
        ],
    }
    from_ocel = lift(doc)
    from_table = parse_event_table((data_dir / "supervision.csv").read_bytes())
    assert from_ocel == from_table


# -- event tables --------------------------------------------------------------------------------


def test_supervision_event_table(data_dir):
    g = parse_event_table((data_dir / "supervision.csv").read_bytes())
    assert sorted(g.events) == ["e1", "e2"]
    assert by_category(g, EndurantCategory.OBJECT) == ["D", "M", "S"]
    assert len(g.e2o) == 4 and {l.kind for l in g.e2o} == {E2OKind.PARTICIPATED}
    assert g.events_of("S") == ["e1", "e2"]
    assert validate(g) == []


def test_empty_table_has_no_types(data_dir):
    g = parse_event_table((data_dir / "empty.csv").read_bytes())
    assert g.element_count() == 0


@pytest.mark.parametrize(
    "text, error",
    [
        ("event_id,event_type,timestamp\n", MissingColumn),
        ("event_id,event_type,timestamp,related_objects,extra\n", SchemaError),
        ("", MissingColumn),
        ("event_id,event_type,timestamp,related_objects\ne1,a,2024-01-01T00:00:00Z\n", InputSyntaxError),
        ("event_id,event_type,timestamp,related_objects\ne1,a,someday,x\n", InputSyntaxError),
        ("event_id,event_type,timestamp,related_objects\ne1,a,2024-01-01T00:00:00Z,x\ne1,a,2024-01-01T00:00:00Z,y\n", SchemaError),
        ("event_id,event_type,timestamp,related_objects\ne1,a,2024-01-01T00:00:00Z,e1\n", SchemaError),
        ('event_id,event_type,timestamp,related_objects\ne1,a,2024-01-01T00:00:00Z,"x\n', InputSyntaxError),
    ],
)
def test_table_errors(text, error):
    with pytest.raises(error):
        parse_event_table(text.encode())


def test_table_columns_in_any_order_and_repeated_objects():
    text = "related_objects,timestamp,event_id,event_type\nA;B,2024-01-01T00:00:00Z,e1,t\nB,2024-01-02T00:00:00Z,e2,t\n"
    g = parse_event_table(text)
    assert by_category(g, EndurantCategory.OBJECT) == ["A", "B"]
    assert g.events_of("B") == ["e1", "e2"]


def test_table_object_named_like_a_type():
    text = "event_id,event_type,timestamp,related_objects\ne1,t,2024-01-01T00:00:00Z,ObjectType/Object;x\n"
    g = parse_event_table(text)
    assert "ObjectType/Object" in g.endurants
    assert validate(g) == []


# -- EKG dumps -----------------------------------------------------------------------------------------


def load_ekg(data_dir):
    d = data_dir / "supervision_ekg"
    return parse_ekg((d / "nodes.csv").read_bytes(), (d / "edges.csv").read_bytes())


def test_figure_one_ekg(data_dir):
    dump = load_ekg(data_dir)
    g = ekg_to_goced(dump)
    assert by_category(g, EndurantCategory.OBJECT) == ["D", "M", "S"]
    assert sorted(g.events) == ["e1", "e2"] and all(g.is_atomic(e) for e in g.events)
    assert len(g.e2o) == 4 and {l.kind for l in g.e2o} == {E2OKind.PARTICIPATED}
    relators = by_category(g, EndurantCategory.RELATOR)
    assert {g.mediated_by(r) for r in relators} == {frozenset("MS"), frozenset("DS")}
    assert all(g.endurants[r].existence is None for r in relators)
    assert validate(g) == []
    assert len(dump.nodes) == len(g.endurants) - len(relators) + len(g.events)
    assert len(dump.edges) == len(g.e2o) + len(relators)


def test_ekg_with_only_objects():
    g = ekg_to_goced(parse_ekg("id,label,type,timestamp\na,Object,T,\nb,Object,T,\n", "source,target,label,qualifier\n"))
    assert by_category(g, EndurantCategory.OBJECT) == ["a", "b"] and not g.events


@pytest.mark.parametrize(
    "nodes, edges",
    [
        ("id,label,type,timestamp\ne,Event,t,\n", ""),
        ("id,label,type,timestamp\na,Thing,t,\n", ""),
        ("id,label,type,timestamp\na,Object,t,\na,Object,t,\n", ""),
        ("id,label,type,timestamp\na,Object,t,\n", "a,b,O2O,\n"),
        ("id,label,type,timestamp\na,Object,t,\nb,Object,t,\n", "a,b,E2O,\n"),
        ("id,label,type,timestamp\na,Object,t,\nb,Object,t,\n", "a,a,O2O,\n"),
        ("id,label,type,timestamp\na,Object,t,\nb,Object,t,\n", "a,b,DF,\n"),
    ],
)
def test_ekg_schema_errors(nodes, edges):
    with pytest.raises(SchemaError):
        parse_ekg(nodes, "source,target,label,qualifier\n" + edges)


# -- co-participation readings -----------------------------------------------------------------------------


def test_separate_reading_gives_two_binary_relators(data_dir):
    table = parse_event_table((data_dir / "supervision.csv").read_bytes())
    g = reify_coparticipation(table, "S", SEPARATE, relator_type="Supervision")
    assert [g.mediated_by(r) for r in by_category(g, EndurantCategory.RELATOR)] == [frozenset("MS"), frozenset("DS")]
    lifecycle = sorted((l.event, l.endurant, l.kind.value) for l in g.e2o if l.endurant.startswith("Supervision"))
    assert lifecycle == [("e1", "Supervision1", "Created"), ("e2", "Supervision1", "Terminated"), ("e2", "Supervision2", "Created")]
    assert g.endurants["Supervision1"].existence.end == g.events["e2"].end
    assert validate(g) == [] and table != g


def test_joint_reading_gives_one_ternary_relator(data_dir):
    table = parse_event_table((data_dir / "supervision.csv").read_bytes())
    g = reify_coparticipation(table, "S", JOINT, relator_type="Supervision")
    assert by_category(g, EndurantCategory.RELATOR) == ["Supervision"]
    assert g.mediated_by("Supervision") == {"S", "M", "D"}
    assert validate(g) == []
    with pytest.raises(ValueError):
        reify_coparticipation(table, "S", "both")
