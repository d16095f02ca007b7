"""Entailment classification with self-consistency voting.

A natural-language description is judged against a reference document
along k independent reasoning paths; per-path sub-verdicts are aggregated
by majority vote with a conservative tie-break (Contradicts over Unknown
over Entails). The alignment score of an iteration is the fraction of
final verdicts that are Entails.
"""

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import List, Optional, Sequence, Tuple

from .gateway import Backend, Effort, PathSample, PromptRequest
from .prompts import load_template


class EmptyVotes(Exception):
    """majority_vote was called with no votes."""


class UnparseableVerdict(Exception):
    """A path's final text is not a recognized verdict code."""


class AllPathsUnparseable(Exception):
    """No path of a check produced a parseable verdict."""


class EmptyPopulation(Exception):
    """Alignment score requested over zero results."""


class Verdict(IntEnum):
    CONTRADICTS = 0
    ENTAILS = 1
    UNKNOWN = 2


# Tie-break priority, most conservative first.
_VERDICT_PRIORITY = (Verdict.CONTRADICTS, Verdict.UNKNOWN, Verdict.ENTAILS)


class VerdictArity(Enum):
    TWO_WAY = "two_way"
    THREE_WAY = "three_way"


class DescriptionKind(Enum):
    PROPERTY = "property"
    SVA_SUMMARY = "sva_summary"


@dataclass(frozen=True)
class NaturalLanguageDescription:
    """The unified text representation judged against a reference."""

    id: str
    kind: DescriptionKind
    text: str
    origin: Optional[str] = None  # source SVA or property text
    iteration_born: int = 0

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("description text must be non-empty")
        if self.kind is DescriptionKind.SVA_SUMMARY and not self.origin:
            raise ValueError("SVA summaries must link their source SVA")


class ReferenceKind(Enum):
    SPECIFICATION = "specification"
    PROPERTY_BANK = "property_bank"


@dataclass(frozen=True)
class ReferenceDocument:
    kind: ReferenceKind
    text: str
    provenance_path: str = ""
    content_hash: str = ""

    @classmethod
    def from_spec_text(cls, text: str, path: str = "") -> "ReferenceDocument":
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return cls(ReferenceKind.SPECIFICATION, text, path, digest)

    @classmethod
    def from_property_bank(
        cls, entries: Sequence[Tuple[str, str]]
    ) -> "ReferenceDocument":
        """Render a bank of (id, text) entries one property per line."""
        text = "\n".join(f"[{eid}] {etext}" for eid, etext in entries)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return cls(ReferenceKind.PROPERTY_BANK, text, "", digest)


@dataclass(frozen=True)
class CheckResult:
    description_id: str
    sub_verdicts: Tuple[Verdict, ...]
    traces: Tuple[str, ...]
    final: Verdict
    iteration: int
    parse_failures: Tuple[Tuple[int, str], ...] = field(default=())


class Loop(Enum):
    PROPERTY_LOOP = "property"
    SVA_LOOP = "sva"


def majority_vote(votes: Sequence[Verdict]) -> Verdict:
    """Return the most frequent verdict; ties resolve conservatively."""
    if not votes:
        raise EmptyVotes("no votes to aggregate")
    counts = Counter(votes)
    best = max(counts.values())
    for verdict in _VERDICT_PRIORITY:
        if counts.get(verdict) == best:
            return verdict
    raise AssertionError("unreachable")


def parse_verdict(text: str, arity: VerdictArity = VerdictArity.THREE_WAY) -> Verdict:
    """Map a judge's final text to a Verdict after trimming whitespace."""
    cleaned = text.strip()
    codes = {"0": Verdict.CONTRADICTS, "1": Verdict.ENTAILS}
    if arity is VerdictArity.THREE_WAY:
        codes["2"] = Verdict.UNKNOWN
    if cleaned not in codes:
        raise UnparseableVerdict(f"not a verdict code: {text!r}")
    return codes[cleaned]


def checking_prompt(arity: VerdictArity = VerdictArity.THREE_WAY) -> str:
    name = (
        "alignment_check_threeway"
        if arity is VerdictArity.THREE_WAY
        else "alignment_check_binary"
    )
    return load_template(name)


def build_check_request(
    description: NaturalLanguageDescription,
    reference: ReferenceDocument,
    k: int,
    arity: VerdictArity = VerdictArity.THREE_WAY,
    effort: Effort = Effort.HIGH,
) -> PromptRequest:
    user_content = (
        f"REFERENCE DOCUMENT:\n{reference.text}\n\n"
        f"PROPERTY UNDER ANALYSIS:\n{description.text}\n"
    )
    return PromptRequest(
        system_prompt=checking_prompt(arity),
        user_content=user_content,
        k=k,
        effort=effort,
        stage="check",
        item_id=description.id,
    )


def classify_once(
    backend: Backend,
    description: NaturalLanguageDescription,
    reference: ReferenceDocument,
    path_index: int = 0,
    arity: VerdictArity = VerdictArity.THREE_WAY,
    effort: Effort = Effort.HIGH,
) -> Tuple[Verdict, str]:
    """Judge one description along a single reasoning path."""
    request = build_check_request(description, reference, path_index + 1, arity, effort)
    sample = backend.sample_paths(request)[path_index]
    return parse_verdict(sample.final_text, arity), sample.reasoning_trace


def check_alignment(
    backend: Backend,
    description: NaturalLanguageDescription,
    reference: ReferenceDocument,
    k: int,
    arity: VerdictArity = VerdictArity.THREE_WAY,
    effort: Effort = Effort.HIGH,
    iteration: int = 1,
) -> CheckResult:
    """Judge along k paths and aggregate by majority vote.

    Unparseable paths are recorded and excluded from the vote rather than
    coerced; the result errors only when no path parses.
    """
    request = build_check_request(description, reference, k, arity, effort)
    samples: List[PathSample] = backend.sample_paths(request)

    verdicts: List[Verdict] = []
    traces: List[str] = []
    failures: List[Tuple[int, str]] = []
    for sample in samples:
        traces.append(sample.reasoning_trace)
        try:
            verdicts.append(parse_verdict(sample.final_text, arity))
        except UnparseableVerdict:
            failures.append((sample.path_index, sample.final_text))
    if not verdicts:
        raise AllPathsUnparseable(
            f"no parseable verdict among {k} paths for {description.id!r}"
        )
    return CheckResult(
        description_id=description.id,
        sub_verdicts=tuple(verdicts),
        traces=tuple(traces),
        final=majority_vote(verdicts),
        iteration=iteration,
        parse_failures=tuple(failures),
    )


def select_reference(
    loop: Loop,
    spec: ReferenceDocument,
    bank: Optional[ReferenceDocument],
) -> ReferenceDocument:
    """Pick the reference document for a loop.

    The property loop always judges against the specification; the SVA
    loop prefers the aligned property bank and falls back to the
    specification when the bank is empty or absent.
    """
    if loop is Loop.PROPERTY_LOOP:
        return spec
    if bank is not None and bank.text:
        return bank
    return spec


def compute_alignment_score(results: Sequence[CheckResult]) -> float:
    """Fraction of final verdicts that are Entails."""
    if not results:
        raise EmptyPopulation("no check results to score")
    entails = sum(1 for r in results if r.final is Verdict.ENTAILS)
    return entails / len(results)
