"""Deterministic generation-prompt assembly and completion post-processing."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .capability import CapabilityModel
from .errors import EmptyCompletion, NoFewShots, SectionRenderError
from .gateway import ChatRequest, LlmGateway
from .retrieval import RetrievalResult
from .skillspec import SkillSpecification, parse_skill_spec, render_spec_for_prompt

STRUCTURE_INSTRUCTIONS = """\
You implement executable skills for automation resources. A skill realizes
an abstract capability: the capability ontology defines the skill's inputs
and outputs, and the skill specification defines the behavior per state of
the skill's state machine. Follow these rules:
- Implement the skill as a single, self-contained source file.
- Declare one skill parameter per capability input and one skill output per
  capability output, using the exact local names from the ontology.
- Implement the behavior of every state for which the specification gives a
  behavior description; the Execute state carries the core functionality.
- Interact with the resource only through the interfaces documented below.
- Answer with the complete implementation in a single fenced code block.
"""

NO_FRAMEWORK_NOTICE = (
    "No skill framework is configured for this target language. Generate "
    "only the core behavior of the skill; it will be integrated into an "
    "execution environment manually.\n"
)


@dataclass(frozen=True)
class FewShotExample:
    name: str
    capability_turtle: str
    skill_spec: SkillSpecification
    skill_spec_text: str
    implementation: str


def load_few_shots(directory: str | Path,
                   interface_types: tuple[str, ...] = ("REST",)) -> list[FewShotExample]:
    """Load `<dir>/<name>/{capability.ttl, spec.skillspec.json,
    implementation.txt}` triples, sorted by name."""
    root = Path(directory)
    examples = []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        capability = (sub / "capability.ttl").read_text(encoding="utf-8")
        spec_text = (sub / "spec.skillspec.json").read_text(encoding="utf-8")
        implementation = (sub / "implementation.txt").read_text(encoding="utf-8")
        if not (capability.strip() and spec_text.strip() and implementation.strip()):
            raise SectionRenderError(f"few-shot example {sub.name} has an empty part")
        examples.append(FewShotExample(
            name=sub.name,
            capability_turtle=capability,
            skill_spec=parse_skill_spec(spec_text, interface_types),
            skill_spec_text=spec_text,
            implementation=implementation,
        ))
    return examples


@dataclass(frozen=True)
class Prompt:
    rendered_text: str

    def chat_request(self, model: str) -> ChatRequest:
        return ChatRequest(model=model,
                           messages=(("user", self.rendered_text),))


def build_prompt(cap: CapabilityModel, spec: SkillSpecification,
                 retrieval_result: RetrievalResult,
                 few_shots: list[FewShotExample],
                 framework_doc: str | None) -> Prompt:
    """Assemble the seven prompt sections in fixed order.  framework_doc is
    the skill-framework explanation for the target language, or None when no
    framework is configured (core behavior only)."""
    if not few_shots:
        raise NoFewShots("at least one few-shot example is required")
    if not retrieval_result.selected_docs:
        raise SectionRenderError("retrieval result carries no interface documentation")

    parts: list[str] = []

    parts.append("## Skill structure instructions\n\n" + STRUCTURE_INSTRUCTIONS)

    if framework_doc is not None:
        if not framework_doc.strip():
            raise SectionRenderError("framework document is empty")
        parts.append("## Skill framework\n\n" + framework_doc.rstrip() + "\n")
    else:
        parts.append("## Skill framework\n\n" + NO_FRAMEWORK_NOTICE)

    for number, example in enumerate(few_shots, start=1):
        parts.append(
            f"## Example {number}: {example.name}\n\n"
            f"### Capability\n```turtle\n{example.capability_turtle.rstrip()}\n```\n\n"
            f"### Skill specification\n```json\n{example.skill_spec_text.rstrip()}\n```\n\n"
            f"### Implementation\n```\n{example.implementation.rstrip()}\n```\n"
        )

    for number, (iface_id, doc) in enumerate(retrieval_result.selected_docs, start=1):
        parts.append(f"## Retrieved interface {number}: {iface_id}\n\n"
                     + doc.rstrip() + "\n")

    parts.append("## Capability ontology\n\n```turtle\n"
                 + cap.raw_text.rstrip() + "\n```\n")

    parts.append("## Skill specification\n\n" + render_spec_for_prompt(spec))

    parts.append("## Target\n\n"
                 f"Programming language: {spec.target_language}\n"
                 f"Framework: {spec.framework}\n"
                 "Generate the complete skill implementation now.\n")

    return Prompt(rendered_text="\n".join(parts))


_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class GenerationResult:
    code: str
    used_fence: bool
    warnings: tuple[str, ...] = ()


def extract_code(completion: str) -> GenerationResult:
    """One fenced block: its body. Several: the longest. None: the whole
    completion, flagged with a warning."""
    if not completion.strip():
        raise EmptyCompletion("completion is empty")
    blocks = _FENCE_RE.findall(completion)
    if blocks:
        body = max(blocks, key=len)
        return GenerationResult(code=body.rstrip() + "\n", used_fence=True)
    return GenerationResult(code=completion.rstrip() + "\n", used_fence=False,
                            warnings=("no fenced code block in completion; "
                                      "returning the full text",))


def generate_skill(prompt: Prompt, gateway: LlmGateway) -> GenerationResult:
    completion = gateway.chat(prompt.chat_request(gateway.config.chat_model))
    return extract_code(completion)
