"""Graph introspection and catalog emission.

The probe queries a live ROS 2 graph once, expands every discovered message
type into a recursive field tree, and writes the catalog document the
generation pipeline ingests.  Graph access and type resolution sit behind
small interfaces (GraphSource, TypeResolver) so the document logic is
testable without a ROS 2 installation.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

PROBE_NODE_NAME = "ros2_probe"

# service/action part names, in the order they appear in the parameter tree
SERVICE_PARTS = ("request", "response")
ACTION_PARTS = ("goal", "result", "feedback")


class GraphSource:
    """What the probe needs to know about a graph: names and types per kind."""

    def topics(self) -> list[tuple[str, str]]:
        raise NotImplementedError

    def services(self) -> list[tuple[str, str]]:
        raise NotImplementedError

    def actions(self) -> list[tuple[str, str]]:
        raise NotImplementedError


class TypeResolver:
    """Field lookup for interface types; every method returns None when the
    type cannot be resolved."""

    def message_fields(self, type_name: str) -> dict[str, str] | None:
        raise NotImplementedError

    def service_parts(self, type_name: str) -> dict[str, dict[str, str]] | None:
        raise NotImplementedError

    def action_parts(self, type_name: str) -> dict[str, dict[str, str]] | None:
        raise NotImplementedError


@dataclass(frozen=True)
class ProbeOutput:
    resource_name: str
    generated_at: str
    entries: tuple[dict, ...]
    warnings: tuple[str, ...] = ()


_ARRAY_RE = re.compile(r"^(?:sequence<(?P<inner>.+?)(?:,\s*\d+)?>|"
                       r"(?P<base>.+?)\[\d*\]?)$")


def _element_type(type_name: str) -> str:
    """Strip array/sequence decoration to the element type for recursion;
    the decorated string stays in the emitted tree."""
    match = _ARRAY_RE.match(type_name.strip())
    if match:
        return _element_type(match.group("inner") or match.group("base"))
    return type_name.strip()


def _expand_fields(fields: dict[str, str], resolver: TypeResolver,
                   warnings: list[str], seen: tuple[str, ...]) -> list[dict]:
    tree = []
    for name, type_name in fields.items():
        tree.append({
            "name": name,
            "type": type_name,
            "children": _expand_type(type_name, resolver, warnings, seen),
        })
    return tree


def _expand_type(type_name: str, resolver: TypeResolver, warnings: list[str],
                 seen: tuple[str, ...]) -> list[dict]:
    element = _element_type(type_name)
    if "/" not in element:  # primitive field
        return []
    if element in seen:  # recursive definition: cut the cycle, keep the leaf
        return []
    fields = resolver.message_fields(element)
    if fields is None:
        warnings.append(f"unresolvable type {element!r}; emitted as a leaf")
        return []
    return _expand_fields(fields, resolver, warnings, seen + (element,))


def expand_message_type(type_name: str, resolver: TypeResolver,
                        warnings: list[str] | None = None) -> list[dict]:
    """Recursive parameter-field tree for one message type.  Unresolvable
    types become leaves with a warning, never an error."""
    collected = [] if warnings is None else warnings
    return _expand_type(type_name, resolver, collected, ())


def _expand_parts(kind: str, type_name: str, resolver: TypeResolver,
                  warnings: list[str]) -> list[dict]:
    """Service and action types are grouped per part (request/response,
    goal/result/feedback) as composite top-level parameters."""
    if kind == "service":
        parts, order = resolver.service_parts(type_name), SERVICE_PARTS
    elif kind == "action":
        parts, order = resolver.action_parts(type_name), ACTION_PARTS
    else:
        return expand_message_type(type_name, resolver, warnings)
    if parts is None:
        warnings.append(f"unresolvable type {type_name!r}; emitted as a leaf")
        return []
    return [{
        "name": part,
        "type": type_name,
        "children": _expand_fields(parts[part], resolver, warnings, (type_name,)),
    } for part in order if part in parts]


def probe_graph(settle_seconds: float = 2.0, source: GraphSource | None = None,
                resolver: TypeResolver | None = None,
                resource_name: str = "ros2") -> ProbeOutput:
    """Query the graph once after discovery has settled and build one catalog
    entry per topic, service, and action; hidden/system names are included
    (excluding them is the relevance check's job downstream)."""
    if source is None or resolver is None:
        live_source, live_resolver = _live_graph(settle_seconds)
        source = source or live_source
        resolver = resolver or live_resolver

    warnings: list[str] = []
    entries = []
    for kind, listing in (("topic", source.topics()),
                          ("service", source.services()),
                          ("action", source.actions())):
        for name, type_name in listing:
            entries.append({
                "kind": kind,
                "name": name,
                "message_type": type_name,
                "parameters": _expand_parts(kind, type_name, resolver, warnings),
                "extensions": {},
            })
    return ProbeOutput(
        resource_name=resource_name,
        generated_at=datetime.now(timezone.utc).isoformat(),
        entries=tuple(entries),
        warnings=tuple(warnings),
    )


def render_catalog(output: ProbeOutput) -> str:
    """Canonical document: fixed key order, entries sorted by kind:name,
    two-space indentation, trailing newline."""
    doc = {
        "resource": output.resource_name,
        "generated_at": output.generated_at,
        "interfaces": sorted(output.entries,
                             key=lambda e: f"{e['kind']}:{e['name']}"),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- live ROS 2 backends -----------------------------------------------------

@dataclass
class _NodeGraphSource(GraphSource):
    """Adapter over a spinning rclpy node's graph queries."""
    node: object
    action_names_and_types: list = field(default_factory=list)

    @staticmethod
    def _first_type(names_and_types):
        return [(name, types[0]) for name, types in names_and_types if types]

    def topics(self):
        return self._first_type(self.node.get_topic_names_and_types())

    def services(self):
        return self._first_type(self.node.get_service_names_and_types())

    def actions(self):
        return self._first_type(self.action_names_and_types)


class _RosidlResolver(TypeResolver):
    """Resolve types through the generated interface modules."""

    @staticmethod
    def _fields(interface) -> dict[str, str]:
        return dict(interface.get_fields_and_field_types())

    def message_fields(self, type_name):
        try:
            from rosidl_runtime_py.utilities import get_message
            return self._fields(get_message(type_name))
        except Exception:
            return None

    def service_parts(self, type_name):
        try:
            from rosidl_runtime_py.utilities import get_service
            srv = get_service(type_name)
            return {"request": self._fields(srv.Request),
                    "response": self._fields(srv.Response)}
        except Exception:
            return None

    def action_parts(self, type_name):
        try:
            from rosidl_runtime_py.utilities import get_action
            action = get_action(type_name)
            return {"goal": self._fields(action.Goal),
                    "result": self._fields(action.Result),
                    "feedback": self._fields(action.Feedback)}
        except Exception:
            return None


def _live_graph(settle_seconds: float) -> tuple[GraphSource, TypeResolver]:
    """One-shot discovery: init, let discovery settle, snapshot, shut down.
    The probe only queries the graph; it never publishes or subscribes."""
    import rclpy
    from rclpy.action.graph import get_action_names_and_types

    rclpy.init()
    node = rclpy.create_node(PROBE_NODE_NAME)
    try:
        deadline = time.monotonic() + max(settle_seconds, 0.0)
        while time.monotonic() < deadline:
            rclpy.spin_once(node, timeout_sec=0.1)
        source = _NodeGraphSource(
            node=node,
            action_names_and_types=list(get_action_names_and_types(node)))
        # snapshot the listings while the node is alive
        snapshot = _SnapshotSource(topics=source.topics(),
                                   services=source.services(),
                                   actions=source.actions())
    finally:
        node.destroy_node()
        rclpy.shutdown()
    return snapshot, _RosidlResolver()


@dataclass(frozen=True)
class _SnapshotSource(GraphSource):
    topics_list: tuple = ()
    services_list: tuple = ()
    actions_list: tuple = ()

    def __init__(self, topics, services, actions):
        object.__setattr__(self, "topics_list", tuple(topics))
        object.__setattr__(self, "services_list", tuple(services))
        object.__setattr__(self, "actions_list", tuple(actions))

    def topics(self):
        return list(self.topics_list)

    def services(self):
        return list(self.services_list)

    def actions(self):
        return list(self.actions_list)
