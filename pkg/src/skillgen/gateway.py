"""HTTP client for chat-completion and embedding providers with a
content-addressed record/replay cache.

In replay mode every exchange is served from the cache directory and no
network I/O happens at all, which makes pipeline runs a pure function of
(inputs, cache, configuration).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import requests

from .errors import CacheMiss, DimensionMismatch, EmptyCompletion, ProviderError

MODES = ("live", "record", "replay")
ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[tuple[str, str], ...]  # (role, content)
    temperature: float = 0.0
    top_p: float = 1.0

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[0][0] not in ("system", "user"):
            raise ValueError("first message role must be system or user")
        for role, _ in self.messages:
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r}")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class EmbedRequest:
    model: str
    inputs: tuple[str, ...]

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("inputs must be non-empty")
        for text in self.inputs:
            if not text.strip():
                raise ValueError("embedding inputs must be non-empty after trimming")


def canonical_chat(req: ChatRequest, send_sampling: bool = True) -> str:
    payload = {
        "kind": "chat",
        "model": req.model,
        "messages": [{"role": r, "content": c} for r, c in req.messages],
    }
    if send_sampling:
        payload["temperature"] = req.temperature
        payload["top_p"] = req.top_p
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def canonical_embed(req: EmbedRequest) -> str:
    payload = {"kind": "embed", "model": req.model, "inputs": list(req.inputs)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def cache_key(request_canonical: str) -> str:
    return hashlib.sha256(request_canonical.encode("utf-8")).hexdigest()


@dataclass
class GatewayConfig:
    base_url: str = "https://api.openai.com/v1"
    chat_model: str = "gpt-4o"
    embed_model: str = "text-embedding-3-large"
    credential_env: str = "SKILLGEN_API_KEY"
    mode: str = "replay"
    cache_dir: str = "cache"
    max_in_flight: int = 4
    send_sampling_params: bool = True
    chat_path: str = "/chat/completions"
    embed_path: str = "/embeddings"
    max_attempts: int = 3


class Cache:
    """One JSON file per entry, named <sha256>.json; writes are atomic."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.is_file():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        return entry["response_body"]

    def put(self, key: str, request_canonical: str, response_body: str,
            recorded_at: str | None = None) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "request_canonical": request_canonical,
            "response_body": response_body,
            "recorded_at": recorded_at or datetime.now(timezone.utc).isoformat(),
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(entry, handle, indent=2, ensure_ascii=False)
            os.replace(tmp, self._path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


class LlmGateway:
    """Shared client; safe for concurrent use (requests.Session is not
    shared across threads, a fresh request is issued per call)."""

    def __init__(self, config: GatewayConfig):
        if config.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.config = config
        self.cache = Cache(config.cache_dir)

    # -- transport ---------------------------------------------------------

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(self.config.credential_env, "")
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        return headers

    def _post(self, path: str, payload: dict) -> str:
        url = self.config.base_url.rstrip("/") + path
        delay = 1.0
        for attempt in range(1, self.config.max_attempts + 1):
            try:
                response = requests.post(url, json=payload, headers=self._headers(),
                                         timeout=120)
            except requests.RequestException as exc:
                if attempt == self.config.max_attempts:
                    raise ProviderError(0, str(exc)) from exc
                time.sleep(delay)
                delay *= 2
                continue
            if response.status_code == 429 or response.status_code >= 500:
                if attempt == self.config.max_attempts:
                    raise ProviderError(response.status_code, response.text)
                time.sleep(delay)
                delay *= 2
                continue
            if response.status_code >= 400:
                raise ProviderError(response.status_code, response.text)
            return response.text
        raise ProviderError(0, "retry loop exhausted")  # pragma: no cover

    def _exchange(self, path: str, payload: dict, canonical: str) -> str:
        key = cache_key(canonical)
        mode = self.config.mode
        if mode in ("record", "replay"):
            cached = self.cache.get(key)
            if cached is not None:
                return cached
            if mode == "replay":
                raise CacheMiss(key, canonical[:120])
        body = self._post(path, payload)
        if mode == "record":
            self.cache.put(key, canonical, body)
        return body

    # -- public surface ----------------------------------------------------

    def chat(self, req: ChatRequest) -> str:
        payload: dict = {
            "model": req.model,
            "messages": [{"role": r, "content": c} for r, c in req.messages],
        }
        if self.config.send_sampling_params:
            payload["temperature"] = req.temperature
            payload["top_p"] = req.top_p
        canonical = canonical_chat(req, self.config.send_sampling_params)
        body = self._exchange(self.config.chat_path, payload, canonical)
        try:
            parsed = json.loads(body)
            content = parsed["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(0, f"malformed completion body: {body[:200]}") from exc
        if not content:
            raise EmptyCompletion("provider returned no content")
        return content

    def embed(self, req: EmbedRequest) -> list[list[float]]:
        payload = {"model": req.model, "input": list(req.inputs)}
        canonical = canonical_embed(req)
        body = self._exchange(self.config.embed_path, payload, canonical)
        try:
            parsed = json.loads(body)
            data = sorted(parsed["data"], key=lambda d: d["index"])
            vectors = [[float(x) for x in d["embedding"]] for d in data]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ProviderError(0, f"malformed embedding body: {body[:200]}") from exc
        if len(vectors) != len(req.inputs):
            raise DimensionMismatch(
                f"expected {len(req.inputs)} vectors, got {len(vectors)}")
        dims = {len(v) for v in vectors}
        if len(dims) > 1:
            raise DimensionMismatch(f"inconsistent vector lengths {sorted(dims)}")
        return vectors
