#!/usr/bin/env python3
"""Rebuild the recorded exchange cache for the bundled robot demo.

Writes fixtures/robot/cache/ so the full pipeline can run offline in
replay mode. Deterministic: fixed vectors, fixed timestamps, and cache
keys computed with the same canonicalization the gateway uses. Re-run
this script whenever prompt templates or fixtures change.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from skillgen import apidoc
from skillgen.capability import parse_capability_document, select_capability
from skillgen.enrichment import (DESCRIPTION_SYSTEM_PROMPT, RELEVANCE_SYSTEM_PROMPT,
                                 InterfaceDescription)
from skillgen.gateway import (Cache, ChatRequest, EmbedRequest, cache_key,
                              canonical_chat, canonical_embed)
from skillgen.prompt import build_prompt, load_few_shots
from skillgen.retrieval import RetrievalResult
from skillgen.skillspec import parse_skill_spec
from skillgen.vector_index import SearchHit, VectorIndex

FIXTURES = ROOT / "fixtures"
ROBOT = FIXTURES / "robot"
CACHE_DIR = ROBOT / "cache"
RECORDED_AT = "2026-08-20T09:30:00+00:00"

CHAT_MODEL = "gpt-4o"
EMBED_MODEL = "text-embedding-3-large"
DIMENSION = 16

IRRELEVANT = {
    "topic:/rosout",
    "topic:/parameter_events",
    "service:/robot_state_publisher/describe_parameters",
}

# description sections per interface id
SECTIONS = {
    "action:/follow_joint_trajectory": (
        "Manipulator joint controller of the robot arm",
        "Executing coordinated joint trajectories on the manipulator",
        "Motion planners and manipulation skills commanding the arm",
    ),
    "action:/navigate_to_pose": (
        "Autonomous navigation stack of the mobile base",
        "Driving the robot to a goal pose with obstacle avoidance",
        "Task planners and navigation skills sending goal poses",
    ),
    "service:/map_server/load_map": (
        "Map server of the navigation stack",
        "Loading a stored occupancy grid map for localization and planning",
        "Navigation bring-up routines and mapping skills",
    ),
    "topic:/cmd_vel": (
        "Differential drive base controller of the mobile robot",
        "Commanding linear and angular base velocity for direct motion control",
        "Teleoperation nodes, navigation stack and motion skills driving the base",
    ),
    "topic:/joint_states": (
        "Joint state broadcaster of the robot",
        "Reading current joint positions, velocities and efforts",
        "State publishers, visualization tools and manipulation skills",
    ),
    "topic:/joint_trajectory": (
        "Manipulator trajectory streaming interface of the robot arm",
        "Streaming joint-space trajectories to move the manipulator",
        "Motion planners and manipulation skills moving the arm",
    ),
    "topic:/map": (
        "Occupancy grid publisher of the mapping subsystem",
        "Reading the current environment map for planning and exploration",
        "Navigation planners, exploration skills and visualization tools",
    ),
    "topic:/odom": (
        "Wheel odometry estimator of the mobile base",
        "Reading the robot's estimated pose and velocity feedback",
        "Localization, navigation stack and motion skills verifying movement",
    ),
    "topic:/parameter_events": (
        "Parameter system of the middleware",
        "Observing parameter changes of running nodes for introspection",
        "Parameter tooling and debugging utilities",
    ),
    "topic:/rosout": (
        "Logging subsystem of the middleware",
        "Aggregating log records emitted by running nodes",
        "Log viewers and debugging tools",
    ),
    "service:/robot_state_publisher/describe_parameters": (
        "Parameter system of the robot state publisher node",
        "Introspecting parameter metadata of the node",
        "Parameter tooling and configuration utilities",
    ),
    "topic:/scan": (
        "Laser range finder of the mobile robot",
        "Reading obstacle distances and bearings around the robot",
        "Obstacle avoidance, mapping and localization components",
    ),
}

# cosine similarity of each relevant chunk to the query direction
AFFINITY = {
    "topic:/cmd_vel": 0.98,
    "topic:/odom": 0.95,
    "topic:/joint_trajectory": 0.90,
    "action:/follow_joint_trajectory": 0.85,
}
SIDE_AXES = {
    "topic:/cmd_vel": 1,
    "topic:/odom": 2,
    "topic:/joint_trajectory": 3,
    "action:/follow_joint_trajectory": 4,
    "action:/navigate_to_pose": 5,
    "service:/map_server/load_map": 6,
    "topic:/joint_states": 7,
    "topic:/map": 8,
    "topic:/scan": 9,
}


def vector_for(interface_id: str) -> list[float]:
    v = np.zeros(DIMENSION)
    affinity = AFFINITY.get(interface_id, 0.1)
    v[0] = affinity
    v[SIDE_AXES[interface_id]] = float(np.sqrt(1.0 - affinity ** 2))
    return [float(x) for x in v]


def query_vector() -> list[float]:
    v = np.zeros(DIMENSION)
    v[0] = 1.0
    return [float(x) for x in v]


def chat_body(content: str) -> str:
    return json.dumps({"choices": [{"message": {"role": "assistant",
                                                "content": content}}]},
                      ensure_ascii=False)


def embed_body(vectors: list[list[float]]) -> str:
    return json.dumps({"data": [{"index": i, "embedding": v}
                                for i, v in enumerate(vectors)]},
                      ensure_ascii=False)


def record_chat(cache: Cache, req: ChatRequest, content: str) -> None:
    canonical = canonical_chat(req)
    cache.put(cache_key(canonical), canonical, chat_body(content), RECORDED_AT)


def record_embed(cache: Cache, req: EmbedRequest, vectors: list[list[float]]) -> None:
    canonical = canonical_embed(req)
    cache.put(cache_key(canonical), canonical, embed_body(vectors), RECORDED_AT)


def main() -> None:
    if CACHE_DIR.exists():
        shutil.rmtree(CACHE_DIR)
    cache = Cache(CACHE_DIR)

    catalog = apidoc.parse_api_doc((ROBOT / "apidoc.json").read_text(encoding="utf-8"))
    assert {i.interface_id for i in catalog.interfaces} == set(SECTIONS)

    # description and relevance exchanges, one per interface
    for iface in catalog.interfaces:
        doc = apidoc.full_documentation_text(iface)
        module, tasks, users = SECTIONS[iface.interface_id]
        record_chat(cache,
                    ChatRequest(model=CHAT_MODEL,
                                messages=(("system", DESCRIPTION_SYSTEM_PROMPT),
                                          ("user", doc))),
                    f"Module: {module}\nTasks: {tasks}\nUsers: {users}")
        if iface.interface_id in IRRELEVANT:
            verdict_text = ("This interface serves logging, introspection or "
                            "metadata exchange only. IRRELEVANT")
        else:
            verdict_text = ("This interface participates in controlling or "
                            "observing the robot's motion. RELEVANT")
        record_chat(cache,
                    ChatRequest(model=CHAT_MODEL,
                                messages=(("system", RELEVANCE_SYSTEM_PROMPT),
                                          ("user", doc))),
                    verdict_text)

    # corpus embedding: relevant interfaces in catalog order, one batch call
    relevant = [i for i in catalog.interfaces if i.interface_id not in IRRELEVANT]
    descriptions = [InterfaceDescription(i.interface_id, *SECTIONS[i.interface_id])
                    for i in relevant]
    texts = tuple(d.combined_text for d in descriptions)
    vectors = [vector_for(d.interface_id) for d in descriptions]
    record_embed(cache, EmbedRequest(model=EMBED_MODEL, inputs=texts), vectors)

    # query embedding for the move-forward capability
    capability_text = (FIXTURES / "capabilities" / "move_forward.ttl").read_text(encoding="utf-8")
    cap = select_capability(parse_capability_document(capability_text))
    query = cap.comment.strip()
    record_embed(cache, EmbedRequest(model=EMBED_MODEL, inputs=(query,)),
                 [query_vector()])

    # reproduce the retrieval result the pipeline will compute
    index = VectorIndex(model_id=EMBED_MODEL)
    for d, v in zip(descriptions, vectors):
        index.insert(d.interface_id, d.combined_text, v)
    index.freeze()
    hits = index.top_k(query_vector(), 4)
    filtered = apidoc.InterfaceCatalog(resource_name=catalog.resource_name,
                                       generated_at=catalog.generated_at,
                                       interfaces=tuple(relevant))
    docs = tuple((h.id, apidoc.full_documentation_text(filtered.by_id(h.id)))
                 for h in hits)
    result = RetrievalResult(capability_iri=cap.iri, query_text=query,
                             hits=tuple(hits), selected_docs=docs)
    expected = {"topic:/cmd_vel", "topic:/odom", "topic:/joint_trajectory",
                "action:/follow_joint_trajectory"}
    assert {h.id for h in hits} == expected, [h.id for h in hits]

    # generation exchange for the assembled prompt
    spec = parse_skill_spec((ROBOT / "move_forward.skillspec.json").read_text(encoding="utf-8"))
    few_shots = load_few_shots(FIXTURES / "fewshot")
    framework_doc = (FIXTURES / "pyskillup.txt").read_text(encoding="utf-8")
    prompt = build_prompt(cap, spec, result, few_shots, framework_doc)
    implementation = (ROBOT / "move_forward_generated.py").read_text(encoding="utf-8")
    completion = ("Here is the complete skill implementation:\n\n"
                  f"```python\n{implementation}```\n")
    record_chat(cache, prompt.chat_request(CHAT_MODEL), completion)

    print(f"wrote {len(list(CACHE_DIR.glob('*.json')))} cache entries to {CACHE_DIR}")


if __name__ == "__main__":
    main()
