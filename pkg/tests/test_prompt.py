import json
from pathlib import Path

import pytest

from skillgen.capability import parse_capability_document, select_capability
from skillgen.errors import EmptyCompletion, NoFewShots, SectionRenderError
from skillgen.prompt import (build_prompt, extract_code, generate_skill,
                             load_few_shots)
from skillgen.retrieval import RetrievalResult
from skillgen.skillspec import parse_skill_spec
from skillgen.vector_index import SearchHit

from conftest import replay_gateway, seed_chat

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="module")
def few_shots():
    return load_few_shots(FIXTURES / "fewshot")


@pytest.fixture(scope="module")
def cap():
    models = parse_capability_document(
        (FIXTURES / "capabilities" / "move_forward.ttl").read_text())
    return select_capability(models)


@pytest.fixture(scope="module")
def spec():
    return parse_skill_spec(
        (FIXTURES / "robot" / "move_forward.skillspec.json").read_text())


def retrieval(docs=(("topic:/cmd_vel", "Interface: /cmd_vel\nKind: topic"),)):
    hits = tuple(SearchHit(id=iface_id, score=0.9 - 0.1 * i, rank=i + 1)
                 for i, (iface_id, _) in enumerate(docs))
    return RetrievalResult(capability_iri="http://e/cap#C", query_text="q",
                           hits=hits, selected_docs=tuple(docs))


def test_load_few_shots_sorted(few_shots):
    assert [e.name for e in few_shots] == ["e1_set_velocity", "e2_get_position",
                                           "e3_navigate_to_point"]
    for example in few_shots:
        assert example.capability_turtle.strip()
        assert example.implementation.strip()
        assert example.skill_spec.execute_behavior


def test_load_few_shots_rejects_empty_part(tmp_path):
    sub = tmp_path / "broken"
    sub.mkdir()
    (sub / "capability.ttl").write_text("   \n")
    (sub / "spec.skillspec.json").write_text("{}")
    (sub / "implementation.txt").write_text("code")
    with pytest.raises(SectionRenderError):
        load_few_shots(tmp_path)


def test_section_order(cap, spec, few_shots):
    prompt = build_prompt(cap, spec, retrieval(), few_shots,
                          framework_doc="The framework doc.")
    text = "\n" + prompt.rendered_text
    headers = ["## Skill structure instructions", "## Skill framework",
               "## Example 1: e1_set_velocity", "## Example 2: e2_get_position",
               "## Example 3: e3_navigate_to_point",
               "## Retrieved interface 1: topic:/cmd_vel",
               "## Capability ontology", "## Skill specification", "## Target"]
    # anchor on the line start so "### ..." sub-headers inside examples
    # cannot shadow the top-level sections
    positions = [text.index("\n" + h) for h in headers]
    assert positions == sorted(positions)


def test_prompt_contains_inputs_verbatim(cap, spec, few_shots):
    prompt = build_prompt(cap, spec, retrieval(), few_shots, framework_doc="doc")
    text = prompt.rendered_text
    assert cap.raw_text.rstrip() in text
    assert spec.execute_behavior in text
    assert "Interface: /cmd_vel" in text
    for example in few_shots:
        assert example.implementation.rstrip() in text


def test_prompt_deterministic(cap, spec, few_shots):
    first = build_prompt(cap, spec, retrieval(), few_shots, framework_doc="doc")
    second = build_prompt(cap, spec, retrieval(), few_shots, framework_doc="doc")
    assert first.rendered_text == second.rendered_text


def test_no_framework_notice(cap, spec, few_shots):
    prompt = build_prompt(cap, spec, retrieval(), few_shots, framework_doc=None)
    assert "No skill framework is configured" in prompt.rendered_text


def test_empty_framework_doc_rejected(cap, spec, few_shots):
    with pytest.raises(SectionRenderError):
        build_prompt(cap, spec, retrieval(), few_shots, framework_doc="  ")


def test_no_few_shots(cap, spec):
    with pytest.raises(NoFewShots):
        build_prompt(cap, spec, retrieval(), [], framework_doc="doc")


def test_no_retrieved_docs(cap, spec, few_shots):
    empty = RetrievalResult(capability_iri="x", query_text="q",
                            hits=(), selected_docs=())
    with pytest.raises(SectionRenderError):
        build_prompt(cap, spec, empty, few_shots, framework_doc="doc")


# -- extract_code ------------------------------------------------------------

def test_extract_single_fence():
    result = extract_code("Here you go:\n```python\nprint('hi')\n```\nDone.")
    assert result.code == "print('hi')\n"
    assert result.used_fence
    assert result.warnings == ()


def test_extract_longest_of_multiple_fences():
    completion = ("```\nshort\n```\nand\n```python\n"
                  "a much longer block\nwith two lines\n```")
    result = extract_code(completion)
    assert result.code == "a much longer block\nwith two lines\n"


def test_extract_no_fence_falls_back():
    result = extract_code("just code with no fence")
    assert result.code == "just code with no fence\n"
    assert not result.used_fence
    assert result.warnings


def test_extract_empty_completion():
    with pytest.raises(EmptyCompletion):
        extract_code("   \n")


def test_generate_skill_replay(tmp_path, cap, spec, few_shots):
    prompt = build_prompt(cap, spec, retrieval(), few_shots, framework_doc="doc")
    seed_chat(tmp_path, prompt.chat_request("gpt-4o"),
              "```python\nprint('generated')\n```")
    gateway = replay_gateway(tmp_path)
    result = generate_skill(prompt, gateway)
    assert result.code == "print('generated')\n"
    assert result.used_fence
