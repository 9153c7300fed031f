"""Corpus construction and top-k retrieval of interface documentation for
a capability."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .apidoc import InterfaceCatalog, full_documentation_text
from .capability import CapabilityModel, retrieval_query
from .enrichment import InterfaceDescription
from .errors import UnknownInterface
from .gateway import EmbedRequest, LlmGateway
from .vector_index import SearchHit, VectorIndex


@dataclass(frozen=True)
class RetrievalResult:
    capability_iri: str
    query_text: str
    hits: tuple[SearchHit, ...]
    selected_docs: tuple[tuple[str, str], ...]  # (interface_id, documentation)


def build_corpus(descriptions: list[InterfaceDescription], gateway: LlmGateway,
                 index: VectorIndex) -> None:
    """Embed every description chunk and insert it in catalog order; the
    index is frozen afterwards."""
    if not descriptions:
        raise ValueError("descriptions must be non-empty")
    if len(index) != 0:
        raise ValueError("index must be empty before corpus construction")
    texts = tuple(d.combined_text for d in descriptions)
    vectors = gateway.embed(EmbedRequest(model=gateway.config.embed_model, inputs=texts))
    for description, vector in zip(descriptions, vectors):
        index.insert(description.interface_id, description.combined_text, vector)
    index.freeze()


def retrieve_for_capability(cap: CapabilityModel, catalog: InterfaceCatalog,
                            index: VectorIndex, gateway: LlmGateway,
                            k: int = 4) -> RetrievalResult:
    """Embed the capability's natural-language query and return the top-k
    interfaces with their full documentation texts, in hit order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    query = retrieval_query(cap)
    [vector] = gateway.embed(EmbedRequest(model=gateway.config.embed_model,
                                          inputs=(query,)))
    hits = index.top_k(vector, k)
    docs = []
    for hit in hits:
        iface = catalog.by_id(hit.id)
        if iface is None:
            raise UnknownInterface(hit.id)
        docs.append((hit.id, full_documentation_text(iface)))
    return RetrievalResult(capability_iri=cap.iri, query_text=query,
                           hits=tuple(hits), selected_docs=tuple(docs))


def result_to_json(result: RetrievalResult) -> str:
    """Canonical persisted form; scores fixed to 9 decimal places."""
    return json.dumps({
        "capability_iri": result.capability_iri,
        "query_text": result.query_text,
        "hits": [
            {"id": h.id, "score": f"{h.score:.9f}", "rank": h.rank}
            for h in result.hits
        ],
        "selected_docs": [
            {"interface_id": iface_id, "documentation": doc}
            for iface_id, doc in result.selected_docs
        ],
    }, indent=2, ensure_ascii=False) + "\n"


def result_from_json(text: str) -> RetrievalResult:
    doc = json.loads(text)
    return RetrievalResult(
        capability_iri=doc["capability_iri"],
        query_text=doc["query_text"],
        hits=tuple(SearchHit(id=h["id"], score=float(h["score"]), rank=h["rank"])
                   for h in doc["hits"]),
        selected_docs=tuple((d["interface_id"], d["documentation"])
                            for d in doc["selected_docs"]),
    )
