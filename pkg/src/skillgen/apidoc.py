"""Resource interface catalog: schema, canonical JSON (de)serialization,
and the prompt-facing documentation rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import DuplicateInterface, SchemaError

KINDS = ("topic", "service", "action")


@dataclass(frozen=True)
class ParameterField:
    name: str
    type_name: str
    children: tuple["ParameterField", ...] = ()


@dataclass(frozen=True)
class ResourceInterface:
    name: str
    kind: str
    message_type: str
    parameters: tuple[ParameterField, ...] = ()
    extensions: dict = field(default_factory=dict)

    @property
    def interface_id(self) -> str:
        return interface_id(self)


@dataclass(frozen=True)
class InterfaceCatalog:
    resource_name: str
    generated_at: str
    interfaces: tuple[ResourceInterface, ...] = ()

    def by_id(self, iface_id: str) -> ResourceInterface | None:
        for iface in self.interfaces:
            if iface.interface_id == iface_id:
                return iface
        return None


def interface_id(iface: ResourceInterface) -> str:
    return f"{iface.kind}:{iface.name}"


def _require(obj: dict, key: str, expected, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if not isinstance(value, expected):
        raise SchemaError(f"{path}.{key}",
                          f"expected {expected.__name__}, got {type(value).__name__}")
    return value


def _parse_parameter(obj, path: str) -> ParameterField:
    if not isinstance(obj, dict):
        raise SchemaError(path, "parameter entries must be objects")
    name = _require(obj, "name", str, path)
    type_name = _require(obj, "type", str, path)
    raw_children = obj.get("children", [])
    if not isinstance(raw_children, list):
        raise SchemaError(f"{path}.children", "must be an array")
    children = tuple(_parse_parameter(c, f"{path}.children[{i}]")
                     for i, c in enumerate(raw_children))
    names = [c.name for c in children]
    if len(set(names)) != len(names):
        raise SchemaError(f"{path}.children", "sibling field names must be unique")
    return ParameterField(name=name, type_name=type_name, children=children)


def parse_api_doc(document_text: str) -> InterfaceCatalog:
    """Parse and validate the catalog wire format."""
    try:
        doc = json.loads(document_text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    resource = _require(doc, "resource", str, "$")
    generated_at = _require(doc, "generated_at", str, "$")
    raw_ifaces = _require(doc, "interfaces", list, "$")

    interfaces = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_ifaces):
        path = f"$.interfaces[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(path, "interface entries must be objects")
        kind = _require(raw, "kind", str, path)
        if kind not in KINDS:
            raise SchemaError(f"{path}.kind", f"must be one of {KINDS}")
        name = _require(raw, "name", str, path)
        message_type = _require(raw, "message_type", str, path)
        raw_params = raw.get("parameters", [])
        if not isinstance(raw_params, list):
            raise SchemaError(f"{path}.parameters", "must be an array")
        params = tuple(_parse_parameter(p, f"{path}.parameters[{j}]")
                       for j, p in enumerate(raw_params))
        extensions = raw.get("extensions", {})
        if not isinstance(extensions, dict):
            raise SchemaError(f"{path}.extensions", "must be an object")
        # unknown top-level keys on the entry are preserved, not rejected
        known = {"kind", "name", "message_type", "parameters", "extensions"}
        extra = {k: v for k, v in raw.items() if k not in known}
        if extra:
            extensions = {**extensions, **extra}
        iface = ResourceInterface(name=name, kind=kind, message_type=message_type,
                                  parameters=params, extensions=extensions)
        if iface.interface_id in seen:
            raise DuplicateInterface(iface.interface_id)
        seen.add(iface.interface_id)
        interfaces.append(iface)
    return InterfaceCatalog(resource_name=resource, generated_at=generated_at,
                            interfaces=tuple(interfaces))


def _parameter_to_obj(p: ParameterField) -> dict:
    return {
        "name": p.name,
        "type": p.type_name,
        "children": [_parameter_to_obj(c) for c in p.children],
    }


def serialize_api_doc(catalog: InterfaceCatalog) -> str:
    """Canonical serialization: fixed key order, interfaces sorted by id."""
    doc = {
        "resource": catalog.resource_name,
        "generated_at": catalog.generated_at,
        "interfaces": [
            {
                "kind": i.kind,
                "name": i.name,
                "message_type": i.message_type,
                "parameters": [_parameter_to_obj(p) for p in i.parameters],
                "extensions": dict(sorted(i.extensions.items())),
            }
            for i in sorted(catalog.interfaces, key=lambda i: i.interface_id)
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def full_documentation_text(iface: ResourceInterface) -> str:
    """Deterministic prompt rendering of one interface with its full
    parameter tree."""
    lines = [
        f"Interface: {iface.name}",
        f"Kind: {iface.kind}",
        f"Message type: {iface.message_type}",
    ]
    if iface.parameters:
        lines.append("Parameters:")
        def walk(fields: tuple[ParameterField, ...], depth: int) -> None:
            for f in fields:
                lines.append(f"{'  ' * depth}{f.name}: {f.type_name}")
                walk(f.children, depth + 1)
        walk(iface.parameters, 1)
    return "\n".join(lines) + "\n"
