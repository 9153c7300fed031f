"""Exception hierarchy shared by all pipeline stages."""

from __future__ import annotations


class SkillgenError(Exception):
    """Base class for all errors raised by this package."""


# --- capability / turtle ---

class TurtleSyntaxError(SkillgenError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MissingComment(SkillgenError):
    def __init__(self, iri: str):
        super().__init__(f"capability {iri} has no rdfs:comment")
        self.iri = iri


class EmptyDocument(SkillgenError):
    pass


class CapabilityNotFound(SkillgenError):
    def __init__(self, iri: str):
        super().__init__(f"no capability with IRI {iri}")
        self.iri = iri


class AmbiguousCapability(SkillgenError):
    pass


# --- apidoc ---

class SchemaError(SkillgenError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path

class DuplicateInterface(SkillgenError):
    def __init__(self, interface_id: str):
        super().__init__(f"duplicate interface {interface_id}")
        self.interface_id = interface_id


# --- llm gateway ---

class ProviderError(SkillgenError):
    def __init__(self, status: int, body: str):
        super().__init__(f"provider returned {status}: {body[:500]}")
        self.status = status
        self.body = body


class CacheMiss(SkillgenError):
    def __init__(self, key: str, summary: str = ""):
        detail = f" ({summary})" if summary else ""
        super().__init__(f"no cached response for key {key}{detail}")
        self.key = key


class EmptyCompletion(SkillgenError):
    pass


# --- vector index ---

class DimensionMismatch(SkillgenError):
    pass


class ZeroVector(SkillgenError):
    pass


class DuplicateId(SkillgenError):
    def __init__(self, record_id: str):
        super().__init__(f"id {record_id} already present in index")
        self.record_id = record_id


class EmptyIndex(SkillgenError):
    pass


class IndexFormatError(SkillgenError):
    pass


# --- enrichment / retrieval ---

class MalformedDescription(SkillgenError):
    def __init__(self, interface_id: str, detail: str = ""):
        super().__init__(f"could not parse description for {interface_id}: {detail}")
        self.interface_id = interface_id


class UnparseableVerdict(SkillgenError):
    def __init__(self, interface_id: str, completion: str = ""):
        super().__init__(f"relevance completion for {interface_id} ends with neither "
                         f"RELEVANT nor IRRELEVANT")
        self.interface_id = interface_id
        self.completion = completion


class MissingVerdict(SkillgenError):
    def __init__(self, interface_id: str):
        super().__init__(f"no relevance verdict for {interface_id}")
        self.interface_id = interface_id


class UnknownInterface(SkillgenError):
    def __init__(self, interface_id: str):
        super().__init__(f"retrieval hit {interface_id} has no catalog entry")
        self.interface_id = interface_id


# --- skill spec / prompt ---

class MissingExecuteBehavior(SkillgenError):
    pass


class UnknownState(SkillgenError):
    def __init__(self, name: str, allowed: list[str]):
        super().__init__(f"unknown state {name!r}; allowed: {', '.join(allowed)}")
        self.name = name
        self.allowed = allowed


class UnsupportedInterfaceType(SkillgenError):
    def __init__(self, name: str):
        super().__init__(f"unsupported skill interface type {name!r}")
        self.name = name


class NoFewShots(SkillgenError):
    pass


class SectionRenderError(SkillgenError):
    pass


# --- verifier ---

class CheckerSpawnError(SkillgenError):
    pass


# --- orchestrator ---

class ConfigError(SkillgenError):
    pass


class WorkspaceLocked(SkillgenError):
    pass
