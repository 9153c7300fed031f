import pytest

from skillgen.apidoc import InterfaceCatalog, ResourceInterface, full_documentation_text
from skillgen.capability import CapabilityModel
from skillgen.enrichment import InterfaceDescription
from skillgen.errors import CacheMiss, DuplicateId, UnknownInterface
from skillgen.gateway import EmbedRequest
from skillgen.retrieval import (build_corpus, result_from_json, result_to_json,
                                retrieve_for_capability)
from skillgen.vector_index import VectorIndex

from conftest import replay_gateway, seed_embed

EMBED_MODEL = "text-embedding-3-large"


def make_descriptions(n):
    return [InterfaceDescription(f"topic:/iface_{i:03d}", f"module {i}",
                                 f"tasks {i}", f"users {i}") for i in range(n)]


def unit_vector(i, dim):
    v = [0.0] * dim
    v[i % dim] = 1.0
    return v


def seeded_gateway(tmp_path, descriptions, dim=8):
    texts = tuple(d.combined_text for d in descriptions)
    vectors = [unit_vector(i, dim) for i in range(len(descriptions))]
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=texts), vectors)
    return replay_gateway(tmp_path)


def test_build_corpus_130():
    descriptions = make_descriptions(130)
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        gateway = seeded_gateway(tmp, descriptions, dim=130)
        index = VectorIndex(model_id=EMBED_MODEL)
        build_corpus(descriptions, gateway, index)
        assert len(index) == 130
        assert index.frozen


def test_build_corpus_single(tmp_path):
    descriptions = make_descriptions(1)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)
    [hit] = index.top_k(unit_vector(0, 8), 1)
    assert hit.id == descriptions[0].interface_id
    assert hit.score == pytest.approx(1.0, abs=1e-9)


def test_build_corpus_duplicate_id(tmp_path):
    descriptions = make_descriptions(2)
    duplicated = [descriptions[0], descriptions[0]]
    texts = tuple(d.combined_text for d in duplicated)
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=texts),
               [unit_vector(0, 4), unit_vector(1, 4)])
    with pytest.raises(DuplicateId):
        build_corpus(duplicated, replay_gateway(tmp_path), VectorIndex())


def corpus_catalog(descriptions):
    interfaces = tuple(ResourceInterface(name=d.interface_id.split(":", 1)[1],
                                         kind="topic", message_type="std_msgs/msg/Empty")
                       for d in descriptions)
    return InterfaceCatalog(resource_name="demo", generated_at="x",
                            interfaces=interfaces)


def capability(comment="find the right interface"):
    return CapabilityModel(iri="http://e/cap#C", comment=comment)


def test_retrieve_identity_construction(tmp_path):
    descriptions = make_descriptions(5)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)

    cap = capability()
    # query embedding equals chunk 2's vector
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=(cap.comment,)),
               [unit_vector(2, 8)])
    result = retrieve_for_capability(cap, corpus_catalog(descriptions), index,
                                     gateway, k=4)
    assert result.hits[0].id == descriptions[2].interface_id
    assert result.hits[0].score == pytest.approx(1.0, abs=1e-9)
    assert len(result.selected_docs) == 4
    assert [d[0] for d in result.selected_docs] == [h.id for h in result.hits]
    # docs are the full interface documentation in hit order
    catalog = corpus_catalog(descriptions)
    for iface_id, doc in result.selected_docs:
        assert doc == full_documentation_text(catalog.by_id(iface_id))


def test_retrieve_corpus_of_one(tmp_path):
    descriptions = make_descriptions(1)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)
    cap = capability()
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=(cap.comment,)),
               [unit_vector(0, 8)])
    result = retrieve_for_capability(cap, corpus_catalog(descriptions), index,
                                     gateway, k=4)
    assert len(result.selected_docs) == 1


def test_retrieve_unknown_interface(tmp_path):
    descriptions = make_descriptions(2)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)
    cap = capability()
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=(cap.comment,)),
               [unit_vector(0, 8)])
    empty_catalog = InterfaceCatalog(resource_name="demo", generated_at="x")
    with pytest.raises(UnknownInterface):
        retrieve_for_capability(cap, empty_catalog, index, gateway, k=1)


def test_retrieve_uncached_query_raises(tmp_path):
    descriptions = make_descriptions(2)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)
    with pytest.raises(CacheMiss):
        retrieve_for_capability(capability("never embedded"),
                                corpus_catalog(descriptions), index, gateway)


def test_result_json_round_trip(tmp_path):
    descriptions = make_descriptions(3)
    gateway = seeded_gateway(tmp_path, descriptions)
    index = VectorIndex(model_id=EMBED_MODEL)
    build_corpus(descriptions, gateway, index)
    cap = capability()
    seed_embed(tmp_path, EmbedRequest(model=EMBED_MODEL, inputs=(cap.comment,)),
               [unit_vector(1, 8)])
    result = retrieve_for_capability(cap, corpus_catalog(descriptions), index,
                                     gateway, k=3)
    text = result_to_json(result)
    assert text == result_to_json(result_from_json(text))
