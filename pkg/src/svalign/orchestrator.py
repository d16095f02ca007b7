"""End-to-end drivers for the property and SVA alignment loops.

Each loop checks every active item against its reference document, routes
Entails items to evidence extraction and the aligned bank, Unknown items
to unknown analysis, and Contradicts items to feedback and regeneration,
then re-checks refined items on the next iteration. Loops stop at the
iteration budget or as soon as no Contradicts remain.
"""

import datetime
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .checker import (
    AllPathsUnparseable,
    CheckResult,
    DescriptionKind,
    Loop,
    NaturalLanguageDescription,
    ReferenceDocument,
    Verdict,
    VerdictArity,
    check_alignment,
    select_reference,
)
from .evidence import (
    EvidenceReport,
    UnknownAnalysis,
    extract_entails_evidence,
    extract_unknown_analysis,
)
from .gateway import (
    Backend,
    BackendUnavailable,
    Effort,
    MalformedResponse,
    PromptRequest,
    ScriptedBackend,
)
from .prompts import load_template
from .refinement import (
    EmptyOutput,
    Feedback,
    MultiLineOutput,
    MultiSentenceOutput,
    RefinementRecord,
    analyze_inconsistency,
    refine_property,
    refine_sva,
)
from .sections import MissingSection
from .sva_parser import (
    SvaComponents,
    SvaParseError,
    parse_sva,
    render_expr,
    render_summary,
)

SCHEMA_VERSION = 1


class ReferenceMode(Enum):
    BANK_IF_AVAILABLE = "bank_if_available"
    SPEC_ALWAYS = "spec_always"


class SummaryMode(Enum):
    """How SVA summaries are produced for parseable assertions."""

    TEMPLATE = "template"  # deterministic rendering from parsed components
    LLM = "llm"  # component breakdown fed to the summary prompt
    AUTO = "auto"  # template under a scripted backend, LLM otherwise


@dataclass
class LoopConfig:
    max_iterations: int = 3
    k: int = 3
    effort: Effort = Effort.HIGH
    verdict_arity: VerdictArity = VerdictArity.THREE_WAY
    sva_reference_mode: ReferenceMode = ReferenceMode.BANK_IF_AVAILABLE
    recheck_unknown: bool = False
    summary_mode: SummaryMode = SummaryMode.AUTO

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")

    def to_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "k": self.k,
            "effort": self.effort.value,
            "verdict_arity": self.verdict_arity.value,
            "sva_reference_mode": self.sva_reference_mode.value,
            "recheck_unknown": self.recheck_unknown,
            "summary_mode": self.summary_mode.value,
        }


class BankKind(Enum):
    PROPERTY_BANK = "property_bank"
    SVA_BANK = "sva_bank"


@dataclass(frozen=True)
class BankEntry:
    id: str
    text: str
    iteration_admitted: int
    admission_verdict: Verdict
    evidence_ref: Optional[str] = None


@dataclass
class AlignedBank:
    kind: BankKind
    entries: List[BankEntry] = field(default_factory=list)

    def add(self, entry: BankEntry) -> None:
        if entry.admission_verdict is not Verdict.ENTAILS:
            raise ValueError("only Entails items may enter an aligned bank")
        self.entries.append(entry)

    def ids(self) -> set:
        return {e.id for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class IterationState:
    loop: Loop
    t: int
    population: Tuple[str, ...]
    entails: int
    contradicts: int
    unknown: int
    score: float
    check_results: Tuple[CheckResult, ...]
    refinement_records: Tuple[RefinementRecord, ...]

    def __post_init__(self) -> None:
        if self.entails + self.contradicts + self.unknown != len(self.population):
            raise ValueError("category counts must partition the population")


@dataclass(frozen=True)
class Exclusion:
    item_id: str
    reason: str
    iteration: int


@dataclass
class LoopResult:
    bank: AlignedBank
    iterations: List[IterationState]
    residual_ids: List[str]
    exclusions: List[Exclusion]
    evidence: Dict[str, EvidenceReport]
    unknown: Dict[str, UnknownAnalysis]
    errors: List[dict]


@dataclass
class _Item:
    id: str
    original: str
    text: str  # current property or SVA text
    summary: Optional[str] = None  # current description text for SVAs
    verdict: Optional[Verdict] = None
    iteration_born: int = 0
    no_progress: int = 0
    frozen: bool = False
    excluded: bool = False
    needs_check: bool = True
    refinement_count: int = 0

    def description(self, kind: DescriptionKind) -> NaturalLanguageDescription:
        if kind is DescriptionKind.SVA_SUMMARY:
            return NaturalLanguageDescription(
                id=self.id,
                kind=kind,
                text=self.summary,
                origin=self.text,
                iteration_born=self.iteration_born,
            )
        return NaturalLanguageDescription(
            id=self.id,
            kind=kind,
            text=self.text,
            iteration_born=self.iteration_born,
        )


def _as_items(inputs: Sequence, prefix: str) -> List[_Item]:
    items = []
    for i, entry in enumerate(inputs):
        if isinstance(entry, tuple):
            item_id, text = entry
        else:
            item_id, text = f"{prefix}{i + 1:03d}", entry
        items.append(_Item(id=item_id, original=text, text=text))
    return items


_GATEWAY_ERRORS = (
    BackendUnavailable,
    MalformedResponse,
    AllPathsUnparseable,
    MissingSection,
    EmptyOutput,
    MultiLineOutput,
    MultiSentenceOutput,
)


class _LoopRunner:
    """Shared iteration machinery for both loops."""

    def __init__(
        self,
        loop: Loop,
        spec: ReferenceDocument,
        config: LoopConfig,
        backend: Backend,
        recorder: Optional["RunDirectory"] = None,
        bank_reference: Optional[ReferenceDocument] = None,
    ) -> None:
        self.loop = loop
        self.spec = spec
        self.config = config
        self.backend = backend
        self.recorder = recorder
        self.bank_reference = bank_reference
        self.kind = (
            DescriptionKind.PROPERTY
            if loop is Loop.PROPERTY_LOOP
            else DescriptionKind.SVA_SUMMARY
        )
        bank_kind = (
            BankKind.PROPERTY_BANK
            if loop is Loop.PROPERTY_LOOP
            else BankKind.SVA_BANK
        )
        self.bank = AlignedBank(bank_kind)
        self.evidence: Dict[str, EvidenceReport] = {}
        self.unknown: Dict[str, UnknownAnalysis] = {}
        self.exclusions: List[Exclusion] = []
        self.errors: List[dict] = []

    # -- helpers ------------------------------------------------------------

    def _reference(self) -> ReferenceDocument:
        if self.loop is Loop.PROPERTY_LOOP:
            return self.spec
        if self.config.sva_reference_mode is ReferenceMode.SPEC_ALWAYS:
            return self.spec
        return select_reference(Loop.SVA_LOOP, self.spec, self.bank_reference)

    def _record_error(self, item_id: str, stage: str, error: Exception, t: int) -> None:
        self.errors.append(
            {
                "item_id": item_id,
                "stage": stage,
                "iteration": t,
                "error": f"{type(error).__name__}: {error}",
            }
        )

    def _exclude(self, item: _Item, reason: str, t: int) -> None:
        item.excluded = True
        self.exclusions.append(Exclusion(item.id, reason, t))

    def _use_template_summary(self) -> bool:
        if self.config.summary_mode is SummaryMode.TEMPLATE:
            return True
        if self.config.summary_mode is SummaryMode.LLM:
            return False
        return isinstance(self.backend, ScriptedBackend)

    def _llm_summary(self, item: _Item,
                     components: Optional[SvaComponents], t: int) -> Optional[str]:
        lines = []
        if components is not None:
            lines.append(f"Clock: {components.trigger.edge.value} "
                         f"{components.trigger.signal}")
            if components.disable_iff is not None:
                lines.append(f"Disable_iff: {render_expr(components.disable_iff)}")
            if components.is_implication:
                prefix = "not " if components.antecedent_negated else ""
                lines.append(f"Antecedent: {prefix}{render_expr(components.antecedent)}")
                lines.append(f"Op: {components.implication.value}")
                if components.temporal is not None:
                    hi = "$" if components.temporal.max is None else components.temporal.max
                    lines.append(f"Temporal: ##[{components.temporal.min}:{hi}]")
                prefix = "not " if components.consequent_negated else ""
                lines.append(f"Consequent: {prefix}{render_expr(components.consequent)}")
            else:
                lines.append(f"Body: {render_expr(components.body)}")
        lines.append(f"SVA: {item.text}")
        request = PromptRequest(
            system_prompt=load_template("summary"),
            user_content="\n".join(lines) + "\n",
            effort=self.config.effort,
            stage="summarize",
            item_id=item.id,
        )
        try:
            sample = self.backend.complete(request)
        except (BackendUnavailable, MalformedResponse) as exc:
            self._record_error(item.id, "summarize", exc, t)
            return None
        summary = sample.final_text.strip()
        return summary or None

    def normalize(self, item: _Item, t: int) -> bool:
        """Produce item.summary; returns False (and excludes) on failure."""
        components: Optional[SvaComponents] = None
        try:
            components = parse_sva(item.text)
        except SvaParseError:
            components = None
        if components is not None and self._use_template_summary():
            item.summary = render_summary(components)
            return True
        summary = self._llm_summary(item, components, t)
        if summary is None:
            self._exclude(item, "normalization_failure", t)
            return False
        item.summary = summary
        return True

    # -- iteration body -----------------------------------------------------

    def run(self, items: List[_Item]) -> LoopResult:
        iterations: List[IterationState] = []
        if self.loop is Loop.SVA_LOOP:
            for item in items:
                self.normalize(item, 0)

        for t in range(1, self.config.max_iterations + 1):
            reference = self._reference()
            checks: List[CheckResult] = []
            refinements: List[RefinementRecord] = []

            for item in items:
                if item.excluded or item.frozen:
                    continue
                recheck_unknown = (
                    self.config.recheck_unknown and item.verdict is Verdict.UNKNOWN
                )
                if not (item.needs_check or recheck_unknown):
                    continue
                description = item.description(self.kind)
                try:
                    result = check_alignment(
                        self.backend,
                        description,
                        reference,
                        self.config.k,
                        arity=self.config.verdict_arity,
                        effort=self.config.effort,
                        iteration=t,
                    )
                except _GATEWAY_ERRORS as exc:
                    self._record_error(item.id, "check", exc, t)
                    if item.verdict is None:
                        self._exclude(item, f"check_error: {exc}", t)
                    continue
                item.verdict = result.final
                item.needs_check = False
                checks.append(result)
                if self.recorder is not None:
                    self.recorder.write_check(self.loop, t, result)
                self._route(item, result, reference, t, refinements)

            active = [i for i in items if not i.excluded]
            entails = sum(1 for i in active if i.verdict is Verdict.ENTAILS)
            contradicts = sum(1 for i in active if i.verdict is Verdict.CONTRADICTS)
            unknown = sum(1 for i in active if i.verdict is Verdict.UNKNOWN)
            population = tuple(i.id for i in active)
            score = entails / len(population) if population else 0.0
            state = IterationState(
                loop=self.loop,
                t=t,
                population=population,
                entails=entails,
                contradicts=contradicts,
                unknown=unknown,
                score=score,
                check_results=tuple(checks),
                refinement_records=tuple(refinements),
            )
            iterations.append(state)
            if contradicts == 0:
                break

        residual = [
            i.id for i in items
            if not i.excluded and i.verdict is Verdict.CONTRADICTS
        ]
        return LoopResult(
            bank=self.bank,
            iterations=iterations,
            residual_ids=residual,
            exclusions=self.exclusions,
            evidence=self.evidence,
            unknown=self.unknown,
            errors=self.errors,
        )

    def _route(
        self,
        item: _Item,
        result: CheckResult,
        reference: ReferenceDocument,
        t: int,
        refinements: List[RefinementRecord],
    ) -> None:
        description = item.description(self.kind)
        if result.final is Verdict.ENTAILS:
            if item.id not in self.bank.ids():
                try:
                    self.evidence[item.id] = extract_entails_evidence(
                        self.backend, description, reference, self.config.effort
                    )
                except _GATEWAY_ERRORS as exc:
                    self._record_error(item.id, "evidence", exc, t)
                self.bank.add(
                    BankEntry(
                        id=item.id,
                        text=item.text,
                        iteration_admitted=t,
                        admission_verdict=Verdict.ENTAILS,
                        evidence_ref=item.id if item.id in self.evidence else None,
                    )
                )
                if self.recorder is not None and item.id in self.evidence:
                    self.recorder.write_evidence(self.loop, self.evidence[item.id])
        elif result.final is Verdict.UNKNOWN:
            try:
                self.unknown[item.id] = extract_unknown_analysis(
                    self.backend, description, reference, self.config.effort
                )
                if self.recorder is not None:
                    self.recorder.write_unknown(self.loop, self.unknown[item.id])
            except _GATEWAY_ERRORS as exc:
                self._record_error(item.id, "unknown_analysis", exc, t)
        else:
            self._refine(item, description, result, reference, t, refinements)

    def _refine(
        self,
        item: _Item,
        description: NaturalLanguageDescription,
        result: CheckResult,
        reference: ReferenceDocument,
        t: int,
        refinements: List[RefinementRecord],
    ) -> None:
        try:
            feedback = analyze_inconsistency(
                self.backend,
                description,
                item.text,
                result.traces,
                reference,
                self.loop,
                self.config.effort,
            )
        except _GATEWAY_ERRORS as exc:
            self._record_error(item.id, "feedback", exc, t)
            return
        if self.recorder is not None:
            self.recorder.write_feedback(self.loop, t, feedback)

        parse_error = None
        try:
            if self.loop is Loop.PROPERTY_LOOP:
                refined_text = refine_property(
                    self.backend, item.text, feedback, self.spec, self.config.effort
                )
            else:
                refined = refine_sva(
                    self.backend,
                    item.text,
                    item.summary or "",
                    feedback,
                    self.spec,
                    self.config.effort,
                )
                refined_text = refined.text
                parse_error = refined.parse_error
        except _GATEWAY_ERRORS as exc:
            self._record_error(item.id, "refine", exc, t)
            return

        no_progress = refined_text == item.text
        record = RefinementRecord(
            description_id=item.id,
            iteration=t,
            before=item.text,
            after=refined_text,
            feedback_raw=feedback.raw,
            no_progress=no_progress,
            parse_error=parse_error,
        )
        refinements.append(record)
        item.refinement_count += 1
        if self.recorder is not None:
            self.recorder.write_refinement(self.loop, t, record)

        if no_progress:
            item.no_progress += 1
            if item.no_progress >= 2:
                # two consecutive identical regenerations: stop cycling and
                # keep the item as Contradicts for reporting
                item.frozen = True
                return
        else:
            item.no_progress = 0
            item.text = refined_text
            item.iteration_born = t
        if self.loop is Loop.SVA_LOOP:
            if not self.normalize(item, t):
                return
        item.needs_check = True


def run_property_loop(
    spec: ReferenceDocument,
    properties: Sequence[Union[str, Tuple[str, str]]],
    config: LoopConfig,
    backend: Backend,
    recorder: Optional["RunDirectory"] = None,
) -> LoopResult:
    """Check and refine natural-language properties against the spec."""
    if not properties:
        raise ValueError("properties must be non-empty")
    runner = _LoopRunner(Loop.PROPERTY_LOOP, spec, config, backend, recorder)
    return runner.run(_as_items(properties, "p"))


def run_sva_loop(
    spec: ReferenceDocument,
    svas: Sequence[Union[str, Tuple[str, str]]],
    property_bank: Optional[AlignedBank],
    config: LoopConfig,
    backend: Backend,
    recorder: Optional["RunDirectory"] = None,
) -> LoopResult:
    """Normalize, check, and refine SVAs.

    The reference is the aligned property bank when available (and the
    config allows it), otherwise the specification.
    """
    if not svas:
        raise ValueError("svas must be non-empty")
    bank_reference = None
    if property_bank is not None and len(property_bank):
        bank_reference = ReferenceDocument.from_property_bank(
            [(e.id, e.text) for e in property_bank.entries]
        )
    runner = _LoopRunner(
        Loop.SVA_LOOP, spec, config, backend, recorder,
        bank_reference=bank_reference,
    )
    return runner.run(_as_items(svas, "a"))


# ---------------------------------------------------------------------------
# Run directory and manifest

def _json_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def _check_to_dict(loop: Loop, result: CheckResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": loop.value,
        "description_id": result.description_id,
        "iteration": result.iteration,
        "sub_verdicts": [int(v) for v in result.sub_verdicts],
        "traces": list(result.traces),
        "final": int(result.final),
        "parse_failures": [list(f) for f in result.parse_failures],
    }


def _refinement_to_dict(loop: Loop, record: RefinementRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": loop.value,
        "description_id": record.description_id,
        "iteration": record.iteration,
        "before": record.before,
        "after": record.after,
        "feedback_raw": record.feedback_raw,
        "no_progress": record.no_progress,
        "parse_error": record.parse_error,
    }


def _feedback_to_dict(loop: Loop, feedback: Feedback) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": loop.value,
        "description_id": feedback.description_id,
        "sections": feedback.sections,
        "raw": feedback.raw,
    }


def _evidence_to_dict(loop: Loop, report: EvidenceReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": loop.value,
        "description_id": report.description_id,
        "sections": report.sections,
        "quotes": [
            {"quote": q.quote, "locator": q.locator, "verified": q.verified}
            for q in report.quotes
        ],
        "no_explicit_support": report.no_explicit_support,
        "conflict_unresolved": report.conflict_unresolved,
    }


def _unknown_to_dict(loop: Loop, analysis: UnknownAnalysis) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": loop.value,
        "description_id": analysis.description_id,
        "supported_elements": [
            {
                "element": e.element,
                "quote": e.quote,
                "locator": e.locator,
                "verified": e.verified,
            }
            for e in analysis.supported_elements
        ],
        "undefined_elements": list(analysis.undefined_elements),
        "required_assumptions": list(analysis.required_assumptions),
        "interpretations": [list(i) for i in analysis.interpretations],
        "empty_undefined": analysis.empty_undefined,
    }


def _iteration_to_dict(state: IterationState) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "loop": state.loop.value,
        "t": state.t,
        "population": list(state.population),
        "entails": state.entails,
        "contradicts": state.contradicts,
        "unknown": state.unknown,
        "score": state.score,
        "checks": [_check_to_dict(state.loop, c) for c in state.check_results],
        "refinements": [
            _refinement_to_dict(state.loop, r) for r in state.refinement_records
        ],
    }


def _bank_to_dict(bank: AlignedBank) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": bank.kind.value,
        "entries": [
            {
                "id": e.id,
                "text": e.text,
                "iteration_admitted": e.iteration_admitted,
                "admission_verdict": int(e.admission_verdict),
                "evidence_ref": e.evidence_ref,
            }
            for e in bank.entries
        ],
    }


def _loop_result_to_dict(result: LoopResult) -> dict:
    return {
        "iterations": [_iteration_to_dict(s) for s in result.iterations],
        "bank": _bank_to_dict(result.bank),
        "residual": list(result.residual_ids),
        "exclusions": [
            {"item_id": e.item_id, "reason": e.reason, "iteration": e.iteration}
            for e in result.exclusions
        ],
        "evidence": {
            k: _evidence_to_dict(
                Loop.PROPERTY_LOOP
                if result.bank.kind is BankKind.PROPERTY_BANK
                else Loop.SVA_LOOP,
                v,
            )
            for k, v in sorted(result.evidence.items())
        },
        "unknown": {
            k: _unknown_to_dict(
                Loop.PROPERTY_LOOP
                if result.bank.kind is BankKind.PROPERTY_BANK
                else Loop.SVA_LOOP,
                v,
            )
            for k, v in sorted(result.unknown.items())
        },
        "errors": result.errors,
    }


class RunDirectory:
    """Writer for the replayable run-record layout.

    Layout: manifest.json at the root, per-iteration jsonl files under
    iterations/t<N>/ (checks, feedback, refinements), plus evidence/,
    unknown/, and banks/. Every record carries a schema version and the
    loop it belongs to.
    """

    def __init__(self, root: Union[str, Path]) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _append(self, relpath: str, record: dict) -> None:
        path = self.root / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(_json_line(record) + "\n")

    def write_check(self, loop: Loop, t: int, result: CheckResult) -> None:
        self._append(f"iterations/t{t}/checks.jsonl", _check_to_dict(loop, result))

    def write_feedback(self, loop: Loop, t: int, feedback: Feedback) -> None:
        self._append(
            f"iterations/t{t}/feedback.jsonl", _feedback_to_dict(loop, feedback)
        )

    def write_refinement(self, loop: Loop, t: int, record: RefinementRecord) -> None:
        self._append(
            f"iterations/t{t}/refinements.jsonl", _refinement_to_dict(loop, record)
        )

    def write_evidence(self, loop: Loop, report: EvidenceReport) -> None:
        self._append("evidence/evidence.jsonl", _evidence_to_dict(loop, report))

    def write_unknown(self, loop: Loop, analysis: UnknownAnalysis) -> None:
        self._append("unknown/unknown.jsonl", _unknown_to_dict(loop, analysis))

    def write_bank(self, bank: AlignedBank) -> None:
        path = self.root / "banks" / f"{bank.kind.value}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(_bank_to_dict(bank), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    def write_manifest(self, manifest: "RunManifest") -> Path:
        path = self.root / "manifest.json"
        path.write_text(manifest.to_json() + "\n", encoding="utf-8")
        return path


@dataclass
class RunManifest:
    """Complete, replayable record of one pipeline run."""

    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=False)

    def without_timestamps(self) -> dict:
        stripped = dict(self.data)
        stripped.pop("timestamps", None)
        return stripped

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))


def _provenance(texts: Sequence[Union[str, Tuple[str, str]]]) -> list:
    out = []
    for i, entry in enumerate(texts):
        if isinstance(entry, tuple):
            out.append({"id": entry[0], "text": entry[1]})
        else:
            out.append({"id": None, "text": entry})
    return out


def run_full_pipeline(
    spec: ReferenceDocument,
    properties: Sequence[Union[str, Tuple[str, str]]],
    svas: Sequence[Union[str, Tuple[str, str]]],
    config: LoopConfig,
    backend: Backend,
    run_dir: Optional[Union[str, Path]] = None,
) -> RunManifest:
    """Run the property loop, then the SVA loop against its aligned bank."""
    if not properties and not svas:
        raise ValueError("at least one of properties/svas must be non-empty")

    recorder = RunDirectory(run_dir) if run_dir is not None else None
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()

    property_result: Optional[LoopResult] = None
    if properties:
        property_result = run_property_loop(spec, properties, config, backend, recorder)
        if recorder is not None:
            recorder.write_bank(property_result.bank)

    sva_result: Optional[LoopResult] = None
    if svas:
        bank = property_result.bank if property_result is not None else None
        sva_result = run_sva_loop(spec, svas, bank, config, backend, recorder)
        if recorder is not None:
            recorder.write_bank(sva_result.bank)

    finished = datetime.datetime.now(datetime.timezone.utc).isoformat()
    data = {
        "schema_version": SCHEMA_VERSION,
        "spec": {
            "path": spec.provenance_path,
            "sha256": spec.content_hash
            or hashlib.sha256(spec.text.encode("utf-8")).hexdigest(),
        },
        "config": config.to_dict(),
        "inputs": {
            "properties": _provenance(properties),
            "svas": _provenance(svas),
        },
        "property_loop": (
            _loop_result_to_dict(property_result)
            if property_result is not None
            else None
        ),
        "sva_loop": (
            _loop_result_to_dict(sva_result) if sva_result is not None else None
        ),
        "timestamps": {"started": started, "finished": finished},
    }
    manifest = RunManifest(data)
    if recorder is not None:
        recorder.write_manifest(manifest)
    return manifest
