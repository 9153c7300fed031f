"""Command-line surface: one thin subcommand per pipeline stage."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import enrichment, verifier
from .capability import parse_capability_document, select_capability
from .config import PipelineConfig, load_config
from .errors import SkillgenError
from .pipeline import Pipeline
from .retrieval import result_from_json
from .skillspec import parse_skill_spec


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillgen",
        description="Generate and verify skill implementations from capability models")
    parser.add_argument("--config", help="pipeline configuration file (JSON)")
    parser.add_argument("--workspace", help="override the workspace directory")
    parser.add_argument("--mode", choices=("live", "record", "replay"),
                        help="override the provider mode")
    parser.add_argument("--k", type=int, help="override the retrieval top-k")
    parser.add_argument("--allow-unchecked", action="store_true",
                        help="treat a missing syntax checker as pass")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and canonicalize a catalog file")
    p.add_argument("catalog")

    p = sub.add_parser("describe", help="generate interface descriptions")
    p = sub.add_parser("filter", help="run the relevance check and report exclusions")
    p = sub.add_parser("index", help="embed descriptions and build the vector index")

    p = sub.add_parser("retrieve", help="retrieve interfaces for a capability")
    p.add_argument("capability")
    p.add_argument("--iri", help="capability IRI when the file has several")

    p = sub.add_parser("generate", help="build the prompt and generate the skill")
    p.add_argument("capability")
    p.add_argument("spec")
    p.add_argument("--iri")

    p = sub.add_parser("verify", help="verify a generated code file")
    p.add_argument("capability")
    p.add_argument("spec")
    p.add_argument("code")
    p.add_argument("retrieval_result")
    p.add_argument("--iri")

    p = sub.add_parser("run", help="execute the full pipeline")
    p.add_argument("capability")
    p.add_argument("spec")
    p.add_argument("catalog")
    p.add_argument("--iri")

    return parser


def _configure(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.workspace:
        config.workspace = args.workspace
    if args.mode:
        config.gateway = replace(config.gateway, mode=args.mode)
    if args.k:
        config.retrieval_k = args.k
    if args.allow_unchecked:
        config.allow_unchecked = True
    config.validate()
    return config


def _load_capability(pipeline: Pipeline, path: str, iri: str | None):
    models = parse_capability_document(Path(path).read_text(encoding="utf-8"),
                                       pipeline.config.vocabulary)
    return select_capability(models, iri)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _configure(args)
        pipeline = Pipeline(config)

        if args.command == "ingest":
            catalog = pipeline.ingest(Path(args.catalog))
            print(f"ingested {len(catalog.interfaces)} interfaces "
                  f"-> {pipeline.workspace.path('catalog')}")

        elif args.command == "describe":
            catalog = pipeline.load_catalog()
            descriptions = pipeline.describe(catalog)
            print(f"described {len(descriptions)} interfaces")

        elif args.command == "filter":
            catalog = pipeline.load_catalog()
            verdicts = pipeline.assess(catalog)
            filtered = enrichment.filter_catalog(catalog, verdicts)
            excluded = len(catalog.interfaces) - len(filtered.interfaces)
            print(f"kept {len(filtered.interfaces)} interfaces, excluded {excluded}")

        elif args.command == "index":
            catalog = pipeline.load_catalog()
            descriptions = enrichment.descriptions_from_json(
                pipeline.workspace.path("descriptions").read_text(encoding="utf-8"))
            relevance_path = pipeline.workspace.path("relevance")
            if config.relevance_check and relevance_path.is_file():
                verdicts = enrichment.verdicts_from_json(
                    relevance_path.read_text(encoding="utf-8"))
                kept = {i.interface_id
                        for i in enrichment.filter_catalog(catalog, verdicts).interfaces}
                descriptions = [d for d in descriptions if d.interface_id in kept]
            index = pipeline.build_index(descriptions)
            print(f"indexed {len(index)} chunks -> {pipeline.workspace.path('index')}")

        elif args.command == "retrieve":
            cap = _load_capability(pipeline, args.capability, args.iri)
            result = pipeline.retrieve(cap, pipeline.load_catalog(), pipeline.load_index())
            for hit in result.hits:
                print(f"{hit.rank}. {hit.id}  score={hit.score:.9f}")

        elif args.command == "generate":
            cap = _load_capability(pipeline, args.capability, args.iri)
            spec = parse_skill_spec(Path(args.spec).read_text(encoding="utf-8"),
                                    config.interface_types)
            result = pipeline.retrieve(cap, pipeline.load_catalog(), pipeline.load_index())
            code = pipeline.generate(cap, spec, result)
            print(f"generated {len(code.splitlines())} lines "
                  f"-> {pipeline.workspace.root / 'generated' / (spec.skill_name + '.py.gen')}")

        elif args.command == "verify":
            cap = _load_capability(pipeline, args.capability, args.iri)
            spec = parse_skill_spec(Path(args.spec).read_text(encoding="utf-8"),
                                    config.interface_types)
            code = Path(args.code).read_text(encoding="utf-8")
            result = result_from_json(Path(args.retrieval_result).read_text(encoding="utf-8"))
            report = pipeline.verify(code, cap, spec, result, pipeline.load_catalog())
            print(f"overall: {report.overall}")
            if report.overall == "partial":
                return 2
            if report.overall == "fail":
                return 1

        elif args.command == "run":
            record, report = pipeline.run(Path(args.capability), Path(args.spec),
                                          Path(args.catalog), args.iri)
            print(f"code: {record.artifacts['code']}")
            print(f"report: {record.artifacts['report']} (overall: {report.overall})")
            if report.overall == "partial":
                return 2
            if report.overall == "fail":
                return 1

        return 0
    except (SkillgenError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
