"""Pipeline configuration: one JSON file, documented keys, defaults from
the evaluation setup (top-4 cosine retrieval, deterministic sampling)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .capability import (DEFAULT_CAPABILITY_CLASSES, DEFAULT_INPUT_PROPERTIES,
                         DEFAULT_OUTPUT_PROPERTIES, Vocabulary)
from .errors import ConfigError
from .gateway import MODES, GatewayConfig
from .skillspec import DEFAULT_INTERFACE_TYPES
from .verifier import AnnotationProfile


@dataclass
class PipelineConfig:
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    retrieval_k: int = 4
    relevance_check: bool = True
    vocabulary: Vocabulary = field(default_factory=Vocabulary)
    annotation_profile: AnnotationProfile = field(default_factory=AnnotationProfile)
    framework_docs: dict[str, str] = field(default_factory=dict)  # language -> file path
    checker_commands: dict[str, list[str]] = field(
        default_factory=lambda: {"Python": ["python3", "-m", "py_compile", "{file}"]})
    interface_types: tuple[str, ...] = DEFAULT_INTERFACE_TYPES
    fewshot_dir: str = "fewshot"
    workspace: str = "workspace"
    allow_unchecked: bool = False

    def validate(self) -> None:
        if self.retrieval_k < 1:
            raise ConfigError("retrieval_k must be >= 1")
        if self.gateway.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")


def _resolve(base: Path, value: str) -> str:
    path = Path(value)
    return str(path if path.is_absolute() else base / path)


def load_config(path: str | Path) -> PipelineConfig:
    """Read the configuration file; relative paths are taken relative to the
    file's directory."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config top level must be an object")
    base = path.parent

    provider = doc.get("provider", {})
    gateway = GatewayConfig(
        base_url=provider.get("base_url", GatewayConfig.base_url),
        chat_model=provider.get("chat_model", GatewayConfig.chat_model),
        embed_model=provider.get("embed_model", GatewayConfig.embed_model),
        credential_env=provider.get("credential_env", GatewayConfig.credential_env),
        mode=provider.get("mode", GatewayConfig.mode),
        cache_dir=_resolve(base, provider.get("cache_dir", GatewayConfig.cache_dir)),
        max_in_flight=provider.get("max_in_flight", GatewayConfig.max_in_flight),
        send_sampling_params=provider.get("send_sampling_params", True),
    )

    vocab_doc = doc.get("vocabulary", {})
    vocabulary = Vocabulary(
        capability_classes=tuple(vocab_doc.get("capability_classes",
                                               DEFAULT_CAPABILITY_CLASSES)),
        input_properties=tuple(vocab_doc.get("input_properties",
                                             DEFAULT_INPUT_PROPERTIES)),
        output_properties=tuple(vocab_doc.get("output_properties",
                                              DEFAULT_OUTPUT_PROPERTIES)),
    )

    profile_doc = doc.get("annotation_profile", {})
    default_profile = AnnotationProfile()
    profile = AnnotationProfile(
        skill_marker=profile_doc.get("skill_marker", default_profile.skill_marker),
        parameter_marker=profile_doc.get("parameter_marker",
                                         default_profile.parameter_marker),
        output_marker=profile_doc.get("output_marker", default_profile.output_marker),
        state_marker_map={**default_profile.state_marker_map,
                          **profile_doc.get("state_marker_map", {})},
    )

    config = PipelineConfig(
        gateway=gateway,
        retrieval_k=doc.get("retrieval_k", 4),
        relevance_check=doc.get("relevance_check", True),
        vocabulary=vocabulary,
        annotation_profile=profile,
        framework_docs={lang: _resolve(base, p)
                        for lang, p in doc.get("framework_docs", {}).items()},
        checker_commands=doc.get("checker_commands",
                                 {"Python": ["python3", "-m", "py_compile", "{file}"]}),
        interface_types=tuple(doc.get("interface_types", DEFAULT_INTERFACE_TYPES)),
        fewshot_dir=_resolve(base, doc.get("fewshot_dir", "fewshot")),
        workspace=_resolve(base, doc.get("workspace", "workspace")),
        allow_unchecked=doc.get("allow_unchecked", False),
    )
    config.validate()
    return config


def config_digest_text(config: PipelineConfig) -> str:
    """Stable text rendering of the configuration for run-record digests."""
    doc = {
        "base_url": config.gateway.base_url,
        "chat_model": config.gateway.chat_model,
        "embed_model": config.gateway.embed_model,
        "mode": config.gateway.mode,
        "retrieval_k": config.retrieval_k,
        "relevance_check": config.relevance_check,
        "capability_classes": list(config.vocabulary.capability_classes),
        "input_properties": list(config.vocabulary.input_properties),
        "output_properties": list(config.vocabulary.output_properties),
        "interface_types": list(config.interface_types),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
