"""LLM enrichment of the interface catalog: uniform natural-language
descriptions (the retrieval corpus) and the optional control-relevance
check that prunes the search space."""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .apidoc import InterfaceCatalog, ResourceInterface, full_documentation_text
from .errors import MalformedDescription, MissingVerdict, UnparseableVerdict
from .gateway import ChatRequest, LlmGateway

DESCRIPTION_SYSTEM_PROMPT = (
    "You document robot control interfaces. For the interface given by the "
    "user, answer with exactly three labeled lines and nothing else:\n"
    "Module: <the resource module this interface relates to>\n"
    "Tasks: <the type of tasks for which this interface is relevant>\n"
    "Users: <typical entities that use or interact with this interface>"
)

DESCRIPTION_RETRY_SUFFIX = (
    "\n\nYour previous answer was missing one of the required labels. "
    "Answer again with exactly the three lines labeled 'Module:', 'Tasks:' "
    "and 'Users:'."
)

RELEVANCE_SYSTEM_PROMPT = (
    "You classify robot control interfaces. An interface is IRRELEVANT if it "
    "is used exclusively for debugging, logging, introspection or metadata "
    "exchange. It is RELEVANT if it actively participates in control "
    "processes, receives control-related messages, or is part of a known "
    "control mechanism. Explain briefly, then end your answer with the single "
    "word RELEVANT or IRRELEVANT."
)

_SECTION_RE = re.compile(
    r"Module:\s*(?P<module>.+?)\s*^Tasks:\s*(?P<tasks>.+?)\s*^Users:\s*(?P<users>.+?)\s*\Z",
    re.MULTILINE | re.DOTALL,
)


@dataclass(frozen=True)
class InterfaceDescription:
    interface_id: str
    module_context: str
    task_relevance: str
    typical_entities: str

    @property
    def combined_text(self) -> str:
        return (f"Module: {self.module_context}\n"
                f"Tasks: {self.task_relevance}\n"
                f"Users: {self.typical_entities}")


@dataclass(frozen=True)
class RelevanceVerdict:
    interface_id: str
    relevant: bool
    rationale: str


def _parse_description(interface_id: str, completion: str) -> InterfaceDescription | None:
    match = _SECTION_RE.search(completion)
    if not match:
        return None
    module, tasks, users = match.group("module"), match.group("tasks"), match.group("users")
    if not (module.strip() and tasks.strip() and users.strip()):
        return None
    return InterfaceDescription(
        interface_id=interface_id,
        module_context=module.strip(),
        task_relevance=tasks.strip(),
        typical_entities=users.strip(),
    )


def describe_interface(iface: ResourceInterface, gateway: LlmGateway) -> InterfaceDescription:
    """One uniformly structured description; retries once with a
    reinforcement instruction if a labeled section is missing."""
    doc = full_documentation_text(iface)
    for attempt, system in enumerate(
            (DESCRIPTION_SYSTEM_PROMPT, DESCRIPTION_SYSTEM_PROMPT + DESCRIPTION_RETRY_SUFFIX)):
        completion = gateway.chat(ChatRequest(
            model=gateway.config.chat_model,
            messages=(("system", system), ("user", doc)),
        ))
        parsed = _parse_description(iface.interface_id, completion)
        if parsed is not None:
            return parsed
    raise MalformedDescription(iface.interface_id,
                               "required section labels missing after retry")


def assess_relevance(iface: ResourceInterface, gateway: LlmGateway) -> RelevanceVerdict:
    """Classification per the irrelevance criteria; the completion must end
    with the token RELEVANT or IRRELEVANT."""
    completion = gateway.chat(ChatRequest(
        model=gateway.config.chat_model,
        messages=(("system", RELEVANCE_SYSTEM_PROMPT),
                  ("user", full_documentation_text(iface))),
    ))
    stripped = completion.rstrip()
    last = stripped.split()[-1].strip(".,!:;") if stripped.split() else ""
    if last == "IRRELEVANT":
        relevant = False
    elif last == "RELEVANT":
        relevant = True
    else:
        raise UnparseableVerdict(iface.interface_id, completion)
    rationale = stripped[:len(stripped) - len(stripped.split()[-1])].strip() or last
    return RelevanceVerdict(interface_id=iface.interface_id, relevant=relevant,
                            rationale=rationale)


def _run_ordered(catalog: InterfaceCatalog, worker, max_in_flight: int) -> list:
    # bounded parallelism; results re-ordered to catalog order
    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        return list(pool.map(worker, catalog.interfaces))


def describe_catalog(catalog: InterfaceCatalog, gateway: LlmGateway) -> list[InterfaceDescription]:
    return _run_ordered(catalog, lambda i: describe_interface(i, gateway),
                        gateway.config.max_in_flight)


def assess_catalog(catalog: InterfaceCatalog, gateway: LlmGateway) -> list[RelevanceVerdict]:
    return _run_ordered(catalog, lambda i: assess_relevance(i, gateway),
                        gateway.config.max_in_flight)


def filter_catalog(catalog: InterfaceCatalog,
                   verdicts: list[RelevanceVerdict] | None) -> InterfaceCatalog:
    """Restrict the catalog to relevant interfaces.  verdicts=None means the
    relevance stage is disabled and the catalog passes through unchanged."""
    if verdicts is None:
        return catalog
    by_id = {v.interface_id: v for v in verdicts}
    for iface in catalog.interfaces:
        if iface.interface_id not in by_id:
            raise MissingVerdict(iface.interface_id)
    kept = tuple(i for i in catalog.interfaces if by_id[i.interface_id].relevant)
    return InterfaceCatalog(resource_name=catalog.resource_name,
                            generated_at=catalog.generated_at,
                            interfaces=kept)


def excluded_ids(catalog: InterfaceCatalog, verdicts: list[RelevanceVerdict]) -> list[str]:
    by_id = {v.interface_id: v for v in verdicts}
    return [i.interface_id for i in catalog.interfaces
            if i.interface_id in by_id and not by_id[i.interface_id].relevant]


# -- workspace serialization ------------------------------------------------

def descriptions_to_json(descriptions: list[InterfaceDescription]) -> str:
    return json.dumps([
        {
            "interface_id": d.interface_id,
            "module": d.module_context,
            "tasks": d.task_relevance,
            "users": d.typical_entities,
        }
        for d in descriptions
    ], indent=2, ensure_ascii=False) + "\n"


def descriptions_from_json(text: str) -> list[InterfaceDescription]:
    return [InterfaceDescription(interface_id=d["interface_id"],
                                 module_context=d["module"],
                                 task_relevance=d["tasks"],
                                 typical_entities=d["users"])
            for d in json.loads(text)]


def verdicts_to_json(verdicts: list[RelevanceVerdict]) -> str:
    return json.dumps([
        {"interface_id": v.interface_id, "relevant": v.relevant, "rationale": v.rationale}
        for v in verdicts
    ], indent=2, ensure_ascii=False) + "\n"


def verdicts_from_json(text: str) -> list[RelevanceVerdict]:
    return [RelevanceVerdict(interface_id=v["interface_id"], relevant=v["relevant"],
                             rationale=v["rationale"])
            for v in json.loads(text)]
