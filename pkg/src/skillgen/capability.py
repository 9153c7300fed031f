"""Capability ontology parsing and retrieval-query extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AmbiguousCapability, CapabilityNotFound, EmptyDocument, MissingComment
from .turtle import RDF_TYPE, Iri, Literal, Term, local_name, parse_turtle

RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

CSS = "http://www.w3id.org/hsu-aut/css#"
CASK = "http://www.w3id.org/hsu-aut/cask#"

DEFAULT_CAPABILITY_CLASSES = (
    CSS + "Capability",
    CASK + "Capability",
    CASK + "ProvidedCapability",
    CASK + "RequiredCapability",
)
DEFAULT_INPUT_PROPERTIES = (CSS + "hasInput", CASK + "hasInput")
DEFAULT_OUTPUT_PROPERTIES = (CSS + "hasOutput", CASK + "hasOutput")


@dataclass(frozen=True)
class Vocabulary:
    """IRIs recognized as capability classes and input/output links."""

    capability_classes: tuple[str, ...] = DEFAULT_CAPABILITY_CLASSES
    input_properties: tuple[str, ...] = DEFAULT_INPUT_PROPERTIES
    output_properties: tuple[str, ...] = DEFAULT_OUTPUT_PROPERTIES


@dataclass(frozen=True)
class PropertySpec:
    iri: str
    name: str
    direction: str  # "input" | "output"
    datatype_hint: str | None = None


@dataclass(frozen=True)
class CapabilityModel:
    iri: str
    comment: str
    label: str | None = None
    inputs: tuple[PropertySpec, ...] = ()
    outputs: tuple[PropertySpec, ...] = ()
    raw_text: str = ""

    @property
    def local_name(self) -> str:
        return local_name(self.iri)


def _pick_comment(values: list[Literal]) -> str | None:
    english = [v for v in values if v.lang == "en"]
    chosen = english[0] if english else (values[0] if values else None)
    return chosen.value if chosen else None


def parse_capability_document(turtle_text: str,
                              vocab: Vocabulary | None = None) -> list[CapabilityModel]:
    """Extract one CapabilityModel per capability individual, in document order.

    Raises TurtleSyntaxError for malformed input, EmptyDocument when no
    capability individual is present, and MissingComment when an individual
    lacks an rdfs:comment (the comment is the retrieval query).
    """
    vocab = vocab or Vocabulary()
    triples = parse_turtle(turtle_text)
    classes = set(vocab.capability_classes)

    capability_subjects: list[Iri] = []
    seen: set[str] = set()
    for s, p, o in triples:
        if p.value == RDF_TYPE and isinstance(o, Iri) and o.value in classes \
                and isinstance(s, Iri) and s.value not in seen:
            capability_subjects.append(s)
            seen.add(s.value)
    if not capability_subjects:
        raise EmptyDocument("no capability individual found")

    # secondary lookup tables over the full triple set
    by_subject: dict[str, list[tuple[str, Term]]] = {}
    types: dict[str, list[str]] = {}
    for s, p, o in triples:
        key = s.value if isinstance(s, Iri) else f"_:{s.label}"
        by_subject.setdefault(key, []).append((p.value, o))
        if p.value == RDF_TYPE and isinstance(o, Iri):
            types.setdefault(key, []).append(o.value)

    def property_specs(subject: str, predicates: tuple[str, ...],
                       direction: str) -> tuple[PropertySpec, ...]:
        specs = []
        for p, o in by_subject.get(subject, []):
            if p in predicates and isinstance(o, Iri):
                hint_types = [t for t in types.get(o.value, []) if t not in {RDF_TYPE}]
                hint = local_name(hint_types[0]) if hint_types else None
                specs.append(PropertySpec(iri=o.value, name=local_name(o.value),
                                          direction=direction, datatype_hint=hint))
        return tuple(specs)

    models = []
    for subject in capability_subjects:
        iri = subject.value
        if "://" not in iri and not iri.startswith("urn:"):
            raise EmptyDocument(f"capability IRI {iri!r} is not absolute")
        comments = [o for p, o in by_subject.get(iri, [])
                    if p == RDFS_COMMENT and isinstance(o, Literal)]
        comment = _pick_comment(comments)
        if comment is None or not comment.strip():
            raise MissingComment(iri)
        labels = [o for p, o in by_subject.get(iri, [])
                  if p == RDFS_LABEL and isinstance(o, Literal)]
        label = _pick_comment(labels)
        models.append(CapabilityModel(
            iri=iri,
            comment=comment,
            label=label,
            inputs=property_specs(iri, vocab.input_properties, "input"),
            outputs=property_specs(iri, vocab.output_properties, "output"),
            raw_text=turtle_text,
        ))
    return models


def retrieval_query(cap: CapabilityModel) -> str:
    """The natural-language query text for embedding: the comment, trimmed."""
    return cap.comment.strip()


def select_capability(models: list[CapabilityModel], iri: str | None = None) -> CapabilityModel:
    """Pick a capability by IRI; a lone model is the default when iri is absent."""
    if iri is None:
        if len(models) == 1:
            return models[0]
        raise AmbiguousCapability(
            f"{len(models)} capabilities present, an IRI must be given")
    for model in models:
        if model.iri == iri:
            return model
    raise CapabilityNotFound(iri)
