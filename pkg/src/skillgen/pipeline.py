"""Workspace layout and stage orchestration: ingest -> describe -> filter
-> index -> retrieve -> generate -> verify.

Every stage persists its artifact in the workspace, so individual stages
can be re-run and the catalog/corpus can be reused across multiple skill
generations for the same resource.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import apidoc, enrichment, retrieval, verifier
from .capability import CapabilityModel, parse_capability_document, select_capability
from .config import PipelineConfig, config_digest_text
from .errors import WorkspaceLocked
from .gateway import LlmGateway
from .prompt import build_prompt, generate_skill, load_few_shots
from .retrieval import RetrievalResult
from .skillspec import SkillSpecification, parse_skill_spec
from .vector_index import VectorIndex

ARTIFACTS = {
    "catalog": "apidoc.json",
    "descriptions": "descriptions.json",
    "relevance": "relevance.json",
    "index": "index.v1",
    "retrieval": "retrieval",
    "prompts": "prompts",
    "generated": "generated",
    "reports": "reports",
    "runs": "runs",
}


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class Workspace:
    root: Path

    def __post_init__(self):
        self.root = Path(self.root)

    def path(self, name: str) -> Path:
        return self.root / ARTIFACTS.get(name, name)

    def prepare(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        for sub in ("retrieval", "prompts", "generated", "reports", "runs"):
            (self.root / sub).mkdir(exist_ok=True)

    def write(self, relative: str, text: str) -> Path:
        target = self.root / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target

    def mark_failed(self, relative: str) -> None:
        target = self.root / relative
        if target.exists():
            target.rename(target.with_name(target.name + ".failed"))


class WorkspaceLock:
    """One pipeline run per workspace at a time."""

    def __init__(self, workspace: Workspace):
        self.path = workspace.root / ".lock"

    def __enter__(self):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd = self.path.open("x")
        except FileExistsError:
            raise WorkspaceLocked(f"workspace lock {self.path} is held") from None
        fd.close()
        return self

    def __exit__(self, *exc):
        self.path.unlink(missing_ok=True)
        return False


@dataclass(frozen=True)
class PipelineRunRecord:
    capability_digest: str
    spec_digest: str
    catalog_digest: str
    config_digest: str
    started_at: str
    finished_at: str
    artifacts: dict[str, str]
    excluded_interfaces: tuple[str, ...]

    def to_json(self) -> str:
        return json.dumps({
            "capability_digest": self.capability_digest,
            "spec_digest": self.spec_digest,
            "catalog_digest": self.catalog_digest,
            "config_digest": self.config_digest,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "artifacts": dict(sorted(self.artifacts.items())),
            "excluded_interfaces": list(self.excluded_interfaces),
        }, indent=2, ensure_ascii=False) + "\n"


class Pipeline:
    def __init__(self, config: PipelineConfig):
        config.validate()
        self.config = config
        self.workspace = Workspace(Path(config.workspace))
        self.gateway = LlmGateway(config.gateway)

    # -- individual stages -------------------------------------------------

    def ingest(self, catalog_file: Path) -> apidoc.InterfaceCatalog:
        catalog = apidoc.parse_api_doc(Path(catalog_file).read_text(encoding="utf-8"))
        self.workspace.prepare()
        self.workspace.write(ARTIFACTS["catalog"], apidoc.serialize_api_doc(catalog))
        return catalog

    def load_catalog(self) -> apidoc.InterfaceCatalog:
        return apidoc.parse_api_doc(
            self.workspace.path("catalog").read_text(encoding="utf-8"))

    def describe(self, catalog: apidoc.InterfaceCatalog) -> list[enrichment.InterfaceDescription]:
        descriptions = enrichment.describe_catalog(catalog, self.gateway)
        self.workspace.write(ARTIFACTS["descriptions"],
                             enrichment.descriptions_to_json(descriptions))
        return descriptions

    def assess(self, catalog: apidoc.InterfaceCatalog) -> list[enrichment.RelevanceVerdict] | None:
        if not self.config.relevance_check:
            return None
        verdicts = enrichment.assess_catalog(catalog, self.gateway)
        self.workspace.write(ARTIFACTS["relevance"],
                             enrichment.verdicts_to_json(verdicts))
        return verdicts

    def build_index(self, descriptions: list[enrichment.InterfaceDescription]) -> VectorIndex:
        index = VectorIndex(model_id=self.config.gateway.embed_model)
        retrieval.build_corpus(descriptions, self.gateway, index)
        index.save(self.workspace.path("index"))
        return index

    def load_index(self) -> VectorIndex:
        return VectorIndex.load(self.workspace.path("index"),
                                expected_model_id=self.config.gateway.embed_model)

    def retrieve(self, cap: CapabilityModel, catalog: apidoc.InterfaceCatalog,
                 index: VectorIndex) -> RetrievalResult:
        result = retrieval.retrieve_for_capability(cap, catalog, index, self.gateway,
                                                   k=self.config.retrieval_k)
        self.workspace.write(f"retrieval/{cap.local_name}.json",
                             retrieval.result_to_json(result))
        return result

    def _framework_doc(self, spec: SkillSpecification) -> str | None:
        path = self.config.framework_docs.get(spec.target_language)
        if path is None:
            return None
        return Path(path).read_text(encoding="utf-8")

    def generate(self, cap: CapabilityModel, spec: SkillSpecification,
                 result: RetrievalResult) -> str:
        few_shots = load_few_shots(self.config.fewshot_dir, self.config.interface_types)
        prompt = build_prompt(cap, spec, result, few_shots, self._framework_doc(spec))
        self.workspace.write(f"prompts/{spec.skill_name}.txt", prompt.rendered_text)
        generation = generate_skill(prompt, self.gateway)
        self.workspace.write(f"generated/{spec.skill_name}.py.gen", generation.code)
        return generation.code

    def verify(self, code: str, cap: CapabilityModel, spec: SkillSpecification,
               result: RetrievalResult,
               catalog: apidoc.InterfaceCatalog) -> verifier.VerificationReport:
        syntax = verifier.check_syntax(code, spec.target_language,
                                       self.config.checker_commands,
                                       self.config.allow_unchecked)
        annotations = verifier.check_annotations(code, cap, spec,
                                                 self.config.annotation_profile)
        usage = verifier.check_interface_usage(code, result, catalog)
        report = verifier.compile_report(spec.skill_name, syntax, annotations, usage,
                                         verifier.count_code_lines(code))
        self.workspace.write(f"reports/{spec.skill_name}.report.json",
                             verifier.report_to_json(report))
        return report

    # -- full run ----------------------------------------------------------

    def run(self, capability_file: Path, spec_file: Path, catalog_file: Path,
            capability_iri: str | None = None) -> tuple[PipelineRunRecord,
                                                        verifier.VerificationReport]:
        capability_file = Path(capability_file)
        spec_file = Path(spec_file)
        catalog_file = Path(catalog_file)
        started = datetime.now(timezone.utc).isoformat()

        self.workspace.prepare()
        with WorkspaceLock(self.workspace):
            catalog = self.ingest(catalog_file)
            models = parse_capability_document(
                capability_file.read_text(encoding="utf-8"), self.config.vocabulary)
            cap = select_capability(models, capability_iri)
            spec = parse_skill_spec(spec_file.read_text(encoding="utf-8"),
                                    self.config.interface_types)

            stage = "describe"
            try:
                descriptions = self.describe(catalog)
                stage = "filter"
                verdicts = self.assess(catalog)
                filtered = enrichment.filter_catalog(catalog, verdicts)
                excluded = tuple(enrichment.excluded_ids(catalog, verdicts)
                                 ) if verdicts else ()
                kept_ids = {i.interface_id for i in filtered.interfaces}
                corpus = [d for d in descriptions if d.interface_id in kept_ids]
                stage = "index"
                index = self.build_index(corpus)
                stage = "retrieve"
                result = self.retrieve(cap, filtered, index)
                stage = "generate"
                code = self.generate(cap, spec, result)
                stage = "verify"
                report = self.verify(code, cap, spec, result, filtered)
            except Exception:
                marker = self.workspace.root / f"{stage}.failed"
                marker.write_text(f"stage {stage} failed at "
                                  f"{datetime.now(timezone.utc).isoformat()}\n",
                                  encoding="utf-8")
                raise

            record = PipelineRunRecord(
                capability_digest=_sha256_file(capability_file),
                spec_digest=_sha256_file(spec_file),
                catalog_digest=_sha256_file(catalog_file),
                config_digest=hashlib.sha256(
                    config_digest_text(self.config).encode()).hexdigest(),
                started_at=started,
                finished_at=datetime.now(timezone.utc).isoformat(),
                artifacts={
                    "catalog": str(self.workspace.path("catalog")),
                    "descriptions": str(self.workspace.path("descriptions")),
                    "index": str(self.workspace.path("index")),
                    "retrieval": str(self.workspace.root / "retrieval" / f"{cap.local_name}.json"),
                    "prompt": str(self.workspace.root / "prompts" / f"{spec.skill_name}.txt"),
                    "code": str(self.workspace.root / "generated" / f"{spec.skill_name}.py.gen"),
                    "report": str(self.workspace.root / "reports" / f"{spec.skill_name}.report.json"),
                },
                excluded_interfaces=excluded,
            )
            run_name = f"run-{record.capability_digest[:12]}-{record.spec_digest[:12]}.json"
            self.workspace.write(f"runs/{run_name}", record.to_json())
            return record, report
