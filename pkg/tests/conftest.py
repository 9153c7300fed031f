from __future__ import annotations

import json
from pathlib import Path

import pytest

from skillgen.gateway import (Cache, ChatRequest, EmbedRequest, GatewayConfig,
                              LlmGateway, cache_key, canonical_chat, canonical_embed)

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
ROBOT = FIXTURES / "robot"

# unroutable TEST-NET address: any accidental network call fails fast
DEAD_ENDPOINT = "http://192.0.2.1:9"


# acceptance-criterion result lines, echoed after the test summary so they
# stay visible even though pytest captures stdout during the tests
_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def robot_dir() -> Path:
    return ROBOT


def replay_gateway(cache_dir, chat_model="gpt-4o",
                   embed_model="text-embedding-3-large") -> LlmGateway:
    return LlmGateway(GatewayConfig(base_url=DEAD_ENDPOINT, chat_model=chat_model,
                                    embed_model=embed_model, mode="replay",
                                    cache_dir=str(cache_dir)))


def seed_chat(cache_dir, req: ChatRequest, content: str) -> None:
    canonical = canonical_chat(req)
    body = json.dumps({"choices": [{"message": {"content": content}}]})
    Cache(cache_dir).put(cache_key(canonical), canonical, body)


def seed_embed(cache_dir, req: EmbedRequest, vectors) -> None:
    canonical = canonical_embed(req)
    body = json.dumps({"data": [{"index": i, "embedding": list(v)}
                                for i, v in enumerate(vectors)]})
    Cache(cache_dir).put(cache_key(canonical), canonical, body)
