"""Static verification of generated skill code: syntax gate, annotation
coverage, interface usage, and line count, aggregated into a report.

Annotation checking is lexical (token patterns over the code text), which
keeps the verifier independent of the target language; real parsing is
delegated to the configured external syntax checker.
"""

from __future__ import annotations

import json
import re
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .apidoc import InterfaceCatalog
from .capability import CapabilityModel
from .errors import CheckerSpawnError
from .retrieval import RetrievalResult
from .skillspec import STATE_NAMES, SkillSpecification


@dataclass(frozen=True)
class AnnotationProfile:
    skill_marker: str = "@skill"
    parameter_marker: str = "@skill_parameter"
    output_marker: str = "@skill_output"
    state_marker_map: dict[str, str] = field(default_factory=lambda: {
        name: "@" + name.lower() for name in STATE_NAMES})


@dataclass(frozen=True)
class Outcome:
    status: str  # "full" | "partial" | "fail"
    detail: str = ""

    def __post_init__(self):
        if self.status not in ("full", "partial", "fail"):
            raise ValueError(f"invalid outcome status {self.status!r}")
        if self.status == "partial" and not self.detail:
            raise ValueError("partial outcomes need a detail message")


@dataclass(frozen=True)
class AnnotationOutcomes:
    skill: Outcome
    parameters: Outcome
    missing_parameters: tuple[str, ...]
    outputs: Outcome
    missing_outputs: tuple[str, ...]
    states: Outcome
    missing_states: tuple[str, ...]


@dataclass(frozen=True)
class UsageReport:
    retrieved_used: tuple[str, ...]
    retrieved_unused: tuple[str, ...]
    unretrieved_used: tuple[str, ...]


@dataclass(frozen=True)
class VerificationReport:
    skill_name: str
    syntax: Outcome
    annotations: AnnotationOutcomes
    interface_usage: UsageReport
    code_lines: int
    overall: str  # "pass" | "partial" | "fail"


def check_syntax(code: str, target_language: str,
                 checker_commands: dict[str, list[str]],
                 allow_unchecked: bool = False) -> Outcome:
    """Run the configured external checker; exit status 0 means pass.
    The placeholder {file} in the command is replaced by the code path."""
    command = checker_commands.get(target_language)
    if command is None:
        if allow_unchecked:
            return Outcome("full", "unchecked")
        return Outcome("fail", f"no checker configured for {target_language!r}")
    with tempfile.NamedTemporaryFile("w", suffix=".gen", delete=False,
                                     encoding="utf-8") as handle:
        handle.write(code)
        path = handle.name
    try:
        argv = [part.replace("{file}", path) for part in command]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=60)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise CheckerSpawnError(f"could not run {argv[0]}: {exc}") from exc
        if proc.returncode == 0:
            return Outcome("full")
        diagnostics = (proc.stderr or proc.stdout or "").strip()
        return Outcome("fail", diagnostics or f"checker exited {proc.returncode}")
    finally:
        Path(path).unlink(missing_ok=True)


def _marker_occurrences(code: str, marker: str) -> list[int]:
    pattern = re.compile(re.escape(marker) + r"(?![A-Za-z0-9_])")
    return [m.start() for m in pattern.finditer(code)]


def _name_covered(code: str, marker_positions: list[int], name: str,
                  window: int = 200) -> bool:
    # a name is covered when its token appears near a marker occurrence
    token = re.compile(r"(?<![A-Za-z0-9_])" + re.escape(name) + r"(?![A-Za-z0-9_])")
    return any(token.search(code, pos, pos + window) for pos in marker_positions)


def _coverage_outcome(missing: list[str], total: int, label: str) -> Outcome:
    if total == 0:
        return Outcome("full", "-")
    if not missing:
        return Outcome("full")
    if len(missing) < total:
        return Outcome("partial", f"missing {label}: {', '.join(missing)}")
    return Outcome("fail", f"missing {label}: {', '.join(missing)}")


def check_annotations(code: str, cap: CapabilityModel, spec: SkillSpecification,
                      profile: AnnotationProfile | None = None) -> AnnotationOutcomes:
    profile = profile or AnnotationProfile()

    skill_count = len(_marker_occurrences(code, profile.skill_marker))
    if skill_count == 1:
        skill = Outcome("full")
    else:
        skill = Outcome("fail", f"expected exactly one {profile.skill_marker} "
                                f"marker, found {skill_count}")

    param_positions = _marker_occurrences(code, profile.parameter_marker)
    missing_params = [p.name for p in cap.inputs
                      if not _name_covered(code, param_positions, p.name)]
    parameters = _coverage_outcome(missing_params, len(cap.inputs), "parameters")

    output_positions = _marker_occurrences(code, profile.output_marker)
    missing_outputs = [p.name for p in cap.outputs
                       if not _name_covered(code, output_positions, p.name)]
    outputs = _coverage_outcome(missing_outputs, len(cap.outputs), "outputs")

    specified_states = [s for s in STATE_NAMES if s in spec.state_behaviors]
    missing_states = [s for s in specified_states
                      if not _marker_occurrences(code, profile.state_marker_map[s])]
    states = _coverage_outcome(missing_states, len(specified_states), "states")

    return AnnotationOutcomes(
        skill=skill,
        parameters=parameters, missing_parameters=tuple(missing_params),
        outputs=outputs, missing_outputs=tuple(missing_outputs),
        states=states, missing_states=tuple(missing_states),
    )


def _interface_token(interface_id: str) -> str:
    # last path component of the interface name, e.g. "topic:/a/cmd_vel" -> cmd_vel
    name = interface_id.split(":", 1)[1]
    return name.rstrip("/").rsplit("/", 1)[-1]


def _token_used(code: str, token: str) -> bool:
    return re.search(r"(?<![A-Za-z0-9_])" + re.escape(token) + r"(?![A-Za-z0-9_])",
                     code) is not None


def check_interface_usage(code: str, retrieval_result: RetrievalResult,
                          catalog: InterfaceCatalog) -> UsageReport:
    retrieved = [h.id for h in retrieval_result.hits]
    used, unused = [], []
    for iface_id in retrieved:
        (used if _token_used(code, _interface_token(iface_id)) else unused).append(iface_id)
    unretrieved_used = [
        i.interface_id for i in catalog.interfaces
        if i.interface_id not in retrieved and _token_used(code, _interface_token(i.interface_id))
    ]
    return UsageReport(retrieved_used=tuple(used), retrieved_unused=tuple(unused),
                       unretrieved_used=tuple(unretrieved_used))


def count_code_lines(code: str) -> int:
    return sum(1 for line in code.splitlines() if line.strip())


def compile_report(skill_name: str, syntax: Outcome, annotations: AnnotationOutcomes,
                   usage: UsageReport, code_lines: int) -> VerificationReport:
    """Overall: fail if syntax fails; partial if any criterion is partial;
    pass only when every outcome is full."""
    outcomes = [syntax, annotations.skill, annotations.parameters,
                annotations.outputs, annotations.states]
    if syntax.status == "fail":
        overall = "fail"
    elif any(o.status == "fail" for o in outcomes):
        overall = "fail"
    elif any(o.status == "partial" for o in outcomes):
        overall = "partial"
    else:
        overall = "pass"
    return VerificationReport(skill_name=skill_name, syntax=syntax,
                              annotations=annotations, interface_usage=usage,
                              code_lines=code_lines, overall=overall)


# -- canonical report serialization -----------------------------------------

def _outcome_obj(o: Outcome) -> dict:
    return {"status": o.status, "detail": o.detail}


def report_to_json(report: VerificationReport) -> str:
    doc = {
        "skill_name": report.skill_name,
        "syntax": _outcome_obj(report.syntax),
        "annotations": {
            "skill": _outcome_obj(report.annotations.skill),
            "parameters": _outcome_obj(report.annotations.parameters),
            "missing_parameters": list(report.annotations.missing_parameters),
            "outputs": _outcome_obj(report.annotations.outputs),
            "missing_outputs": list(report.annotations.missing_outputs),
            "states": _outcome_obj(report.annotations.states),
            "missing_states": list(report.annotations.missing_states),
        },
        "interface_usage": {
            "retrieved_used": list(report.interface_usage.retrieved_used),
            "retrieved_unused": list(report.interface_usage.retrieved_unused),
            "unretrieved_used": list(report.interface_usage.unretrieved_used),
        },
        "executability": "not evaluated",
        "behavior": "not evaluated",
        "code_lines": report.code_lines,
        "overall": report.overall,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def report_from_json(text: str) -> VerificationReport:
    doc = json.loads(text)

    def outcome(obj) -> Outcome:
        return Outcome(status=obj["status"], detail=obj["detail"])

    ann = doc["annotations"]
    return VerificationReport(
        skill_name=doc["skill_name"],
        syntax=outcome(doc["syntax"]),
        annotations=AnnotationOutcomes(
            skill=outcome(ann["skill"]),
            parameters=outcome(ann["parameters"]),
            missing_parameters=tuple(ann["missing_parameters"]),
            outputs=outcome(ann["outputs"]),
            missing_outputs=tuple(ann["missing_outputs"]),
            states=outcome(ann["states"]),
            missing_states=tuple(ann["missing_states"]),
        ),
        interface_usage=UsageReport(
            retrieved_used=tuple(doc["interface_usage"]["retrieved_used"]),
            retrieved_unused=tuple(doc["interface_usage"]["retrieved_unused"]),
            unretrieved_used=tuple(doc["interface_usage"]["unretrieved_used"]),
        ),
        code_lines=doc["code_lines"],
        overall=doc["overall"],
    )
