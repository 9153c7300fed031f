import json
from pathlib import Path

import pytest

from skillgen.errors import (MissingExecuteBehavior, SchemaError, UnknownState,
                             UnsupportedInterfaceType)
from skillgen.skillspec import (STATE_NAMES, canonical_state, parse_skill_spec,
                                serialize_skill_spec)

ROBOT = Path(__file__).resolve().parent.parent / "fixtures" / "robot"

EXECUTE_TEXT = ("Set the velocity of the robot to a calculated value for the "
                "desired time only and then reset it. If the calculated velocity "
                "exceeds the maximum velocity, set the maximum velocity and "
                "calculate the new time necessary to travel the desired distance.")


def valid_doc(**overrides):
    doc = {
        "skill_name": "move_forward",
        "interface_type": "REST",
        "target_language": "Python",
        "framework": "ROS 2",
        "states": {"Execute": EXECUTE_TEXT},
    }
    doc.update(overrides)
    return doc


def test_parse_move_forward_fixture():
    spec = parse_skill_spec((ROBOT / "move_forward.skillspec.json").read_text())
    assert spec.skill_name == "move_forward"
    assert spec.execute_behavior == EXECUTE_TEXT
    assert "Resetting" in spec.state_behaviors


def test_parse_valid():
    spec = parse_skill_spec(json.dumps(valid_doc()))
    assert spec.interface_type == "REST"
    assert spec.state_behaviors == {"Execute": EXECUTE_TEXT}


def test_missing_execute():
    doc = valid_doc(states={"Holding": "hold position"})
    with pytest.raises(MissingExecuteBehavior):
        parse_skill_spec(json.dumps(doc))


def test_unknown_state():
    doc = valid_doc(states={"Execute": "x", "running": "y"})
    with pytest.raises(UnknownState) as err:
        parse_skill_spec(json.dumps(doc))
    assert err.value.name == "running"
    assert "Execute" in err.value.allowed


def test_state_names_case_insensitive():
    doc = valid_doc(states={"execute": "x", "HOLDING": "y"})
    spec = parse_skill_spec(json.dumps(doc))
    assert set(spec.state_behaviors) == {"Execute", "Holding"}


def test_unsupported_interface_type():
    doc = valid_doc(interface_type="OPC-UA")
    with pytest.raises(UnsupportedInterfaceType):
        parse_skill_spec(json.dumps(doc))
    spec = parse_skill_spec(json.dumps(doc), supported_interface_types=("REST", "OPC-UA"))
    assert spec.interface_type == "OPC-UA"


@pytest.mark.parametrize("key", ["skill_name", "interface_type", "target_language",
                                 "framework", "states"])
def test_missing_required_key(key):
    doc = valid_doc()
    del doc[key]
    with pytest.raises(SchemaError):
        parse_skill_spec(json.dumps(doc))


def test_empty_behavior_text_rejected():
    doc = valid_doc(states={"Execute": "   "})
    with pytest.raises(SchemaError):
        parse_skill_spec(json.dumps(doc))


def test_round_trip():
    doc = valid_doc(description="optional text",
                    states={"Execute": "run", "Holding": "hold", "Resetting": "reset"})
    spec = parse_skill_spec(json.dumps(doc))
    text = serialize_skill_spec(spec)
    assert parse_skill_spec(text) == spec
    assert serialize_skill_spec(parse_skill_spec(text)) == text


def test_canonical_state():
    assert canonical_state("execute") == "Execute"
    assert canonical_state(" Unsuspending ") == "Unsuspending"
    with pytest.raises(UnknownState):
        canonical_state("Idle")
    assert len(STATE_NAMES) == 11
