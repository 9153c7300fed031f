import json
from pathlib import Path

import pytest

from skillgen.apidoc import (InterfaceCatalog, ParameterField, ResourceInterface,
                             full_documentation_text, interface_id, parse_api_doc,
                             serialize_api_doc)
from skillgen.errors import DuplicateInterface, SchemaError

ROBOT_DOC = (Path(__file__).resolve().parent.parent / "fixtures" / "robot"
             / "apidoc.json").read_text()

CMD_VEL_DOC = json.dumps({
    "resource": "demo",
    "generated_at": "2026-01-01T00:00:00Z",
    "interfaces": [
        {
            "kind": "topic",
            "name": "/cmd_vel",
            "message_type": "geometry_msgs/msg/Twist",
            "parameters": [
                {"name": "linear", "type": "geometry_msgs/msg/Vector3", "children": [
                    {"name": "x", "type": "float64", "children": []},
                    {"name": "y", "type": "float64", "children": []},
                    {"name": "z", "type": "float64", "children": []},
                ]},
                {"name": "angular", "type": "geometry_msgs/msg/Vector3", "children": [
                    {"name": "x", "type": "float64", "children": []},
                    {"name": "y", "type": "float64", "children": []},
                    {"name": "z", "type": "float64", "children": []},
                ]},
            ],
        }
    ],
})


def tree_depth(field: ParameterField) -> int:
    if not field.children:
        return 1
    return 1 + max(tree_depth(c) for c in field.children)


def test_cmd_vel_fixture():
    catalog = parse_api_doc(CMD_VEL_DOC)
    assert len(catalog.interfaces) == 1
    [iface] = catalog.interfaces
    # hand count: linear/angular, each with x,y,z leaves -> depth 2
    assert max(tree_depth(p) for p in iface.parameters) == 2
    leaf_count = sum(len(p.children) for p in iface.parameters)
    assert leaf_count == 6


def test_parse_serialize_round_trip():
    catalog = parse_api_doc(ROBOT_DOC)
    assert parse_api_doc(serialize_api_doc(catalog)) == catalog


def test_serialize_parse_idempotent():
    once = serialize_api_doc(parse_api_doc(ROBOT_DOC))
    twice = serialize_api_doc(parse_api_doc(once))
    assert once == twice


def test_serialize_deterministic():
    catalog = parse_api_doc(ROBOT_DOC)
    assert serialize_api_doc(catalog) == serialize_api_doc(catalog)


def test_serialize_sorted_by_id():
    unsorted_catalog = InterfaceCatalog(
        resource_name="demo", generated_at="2026-01-01T00:00:00Z",
        interfaces=(
            ResourceInterface(name="/odom", kind="topic", message_type="t"),
            ResourceInterface(name="/spawn", kind="service", message_type="t"),
            ResourceInterface(name="/cmd_vel", kind="topic", message_type="t"),
        ))
    parsed = parse_api_doc(serialize_api_doc(unsorted_catalog))
    ids = [i.interface_id for i in parsed.interfaces]
    # hand sort: service:/spawn < topic:/cmd_vel < topic:/odom
    assert ids == ["service:/spawn", "topic:/cmd_vel", "topic:/odom"]


def test_empty_interface_list():
    catalog = InterfaceCatalog(resource_name="demo", generated_at="2026-01-01T00:00:00Z")
    text = serialize_api_doc(catalog)
    assert json.loads(text)["interfaces"] == []
    assert parse_api_doc(text) == catalog


def test_duplicate_interface():
    doc = json.dumps({
        "resource": "demo", "generated_at": "2026-01-01T00:00:00Z",
        "interfaces": [
            {"kind": "topic", "name": "/odom", "message_type": "a", "parameters": []},
            {"kind": "topic", "name": "/odom", "message_type": "b", "parameters": []},
        ],
    })
    with pytest.raises(DuplicateInterface) as err:
        parse_api_doc(doc)
    assert err.value.interface_id == "topic:/odom"


@pytest.mark.parametrize("mutate,path_part", [
    (lambda d: d.pop("resource"), "resource"),
    (lambda d: d.update(interfaces="nope"), "interfaces"),
    (lambda d: d["interfaces"][0].pop("kind"), "kind"),
    (lambda d: d["interfaces"][0].update(kind="queue"), "kind"),
    (lambda d: d["interfaces"][0]["parameters"][0].pop("name"), "name"),
])
def test_schema_errors(mutate, path_part):
    doc = json.loads(CMD_VEL_DOC)
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        parse_api_doc(json.dumps(doc))
    assert path_part in err.value.path


def test_unknown_keys_preserved():
    doc = json.loads(CMD_VEL_DOC)
    doc["interfaces"][0]["qos"] = "reliable"
    catalog = parse_api_doc(json.dumps(doc))
    assert catalog.interfaces[0].extensions["qos"] == "reliable"
    reparsed = parse_api_doc(serialize_api_doc(catalog))
    assert reparsed.interfaces[0].extensions["qos"] == "reliable"


def test_interface_id():
    assert interface_id(ResourceInterface(name="/odom", kind="topic",
                                          message_type="t")) == "topic:/odom"
    assert interface_id(ResourceInterface(name="/navigate_to_pose", kind="action",
                                          message_type="t")) == "action:/navigate_to_pose"
    assert interface_id(ResourceInterface(name="/spawn", kind="service",
                                          message_type="t")) == "service:/spawn"


def test_full_documentation_text():
    catalog = parse_api_doc(CMD_VEL_DOC)
    [iface] = catalog.interfaces
    text = full_documentation_text(iface)
    assert "Message type: geometry_msgs/msg/Twist" in text
    # one line per field: 2 composites + 6 leaves
    param_lines = [l for l in text.splitlines() if l.startswith("  ")]
    assert len(param_lines) == 8
    assert text == full_documentation_text(iface)


def test_documentation_without_parameters():
    iface = ResourceInterface(name="/x", kind="topic", message_type="std_msgs/msg/Empty")
    text = full_documentation_text(iface)
    assert text == "Interface: /x\nKind: topic\nMessage type: std_msgs/msg/Empty\n"
