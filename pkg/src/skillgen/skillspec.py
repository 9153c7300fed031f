"""User-provided skill specification: per-state behavior text keyed by the
PackML state machine, plus interface-type and target metadata."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (MissingExecuteBehavior, SchemaError, UnknownState,
                     UnsupportedInterfaceType)

# PackML states for which behavior can be specified
STATE_NAMES = (
    "Starting", "Execute", "Completing", "Resetting", "Holding", "Unholding",
    "Suspending", "Unsuspending", "Stopping", "Aborting", "Clearing",
)
_CANONICAL = {name.lower(): name for name in STATE_NAMES}

DEFAULT_INTERFACE_TYPES = ("REST",)


def canonical_state(name: str) -> str:
    """Case-insensitive parse to the canonical capitalized state name."""
    canonical = _CANONICAL.get(name.strip().lower())
    if canonical is None:
        raise UnknownState(name, list(STATE_NAMES))
    return canonical


@dataclass(frozen=True)
class SkillSpecification:
    skill_name: str
    interface_type: str
    target_language: str
    framework: str
    state_behaviors: dict[str, str] = field(default_factory=dict)
    description: str | None = None

    @property
    def execute_behavior(self) -> str:
        return self.state_behaviors["Execute"]


def parse_skill_spec(document_text: str,
                     supported_interface_types: tuple[str, ...] = DEFAULT_INTERFACE_TYPES,
                     ) -> SkillSpecification:
    try:
        doc = json.loads(document_text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")

    def need(key: str) -> str:
        value = doc.get(key)
        if not isinstance(value, str) or not value.strip():
            raise SchemaError(f"$.{key}", "required non-empty string")
        return value

    skill_name = need("skill_name")
    interface_type = need("interface_type")
    if interface_type not in supported_interface_types:
        raise UnsupportedInterfaceType(interface_type)
    target_language = need("target_language")
    framework = need("framework")
    description = doc.get("description")
    if description is not None and not isinstance(description, str):
        raise SchemaError("$.description", "must be a string when present")

    raw_states = doc.get("states")
    if not isinstance(raw_states, dict):
        raise SchemaError("$.states", "required object mapping state to behavior text")
    behaviors: dict[str, str] = {}
    for key, text in raw_states.items():
        state = canonical_state(key)
        if not isinstance(text, str) or not text.strip():
            raise SchemaError(f"$.states.{key}", "behavior text must be non-empty")
        behaviors[state] = text
    if not behaviors.get("Execute", "").strip():
        raise MissingExecuteBehavior(
            f"skill {skill_name!r} must specify behavior for the Execute state")

    return SkillSpecification(
        skill_name=skill_name,
        interface_type=interface_type,
        target_language=target_language,
        framework=framework,
        state_behaviors=behaviors,
        description=description,
    )


def serialize_skill_spec(spec: SkillSpecification) -> str:
    """Canonical form: fixed key order, states in PackML declaration order."""
    doc: dict = {
        "skill_name": spec.skill_name,
        "interface_type": spec.interface_type,
        "description": spec.description,
        "target_language": spec.target_language,
        "framework": spec.framework,
        "states": {name: spec.state_behaviors[name]
                   for name in STATE_NAMES if name in spec.state_behaviors},
    }
    if doc["description"] is None:
        del doc["description"]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_spec_for_prompt(spec: SkillSpecification) -> str:
    lines = [
        f"Skill name: {spec.skill_name}",
        f"Skill interface type: {spec.interface_type}",
    ]
    if spec.description:
        lines.append(f"Description: {spec.description}")
    lines.append("State behaviors:")
    for name in STATE_NAMES:
        if name in spec.state_behaviors:
            lines.append(f"- {name}: {spec.state_behaviors[name]}")
    return "\n".join(lines) + "\n"
