"""Feedback generation and regeneration for contradicting items.

For a description judged Contradicts, the reasoning traces and the
reference document are turned into structured four-section feedback,
which then guides regeneration of the property sentence or the SVA line.
"""

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .checker import Loop, NaturalLanguageDescription, ReferenceDocument
from .gateway import Backend, Effort, PromptRequest
from .prompts import load_template
from .sections import MissingSection, parse_sections
from .sva_parser import SvaParseError, parse_sva


class EmptyOutput(Exception):
    """The refiner returned nothing usable."""


class MultiSentenceOutput(Exception):
    """A refined property spans more than one sentence."""


class MultiLineOutput(Exception):
    """A refined SVA spans more than one line."""


@dataclass(frozen=True)
class Feedback:
    description_id: str
    sections: dict  # BehavioralIntent, ContradictingElements, CorrectBehavior, FeedbackInstructions
    raw: str


@dataclass(frozen=True)
class RefinedSva:
    text: str
    parse_error: Optional[str] = None  # recorded, not fatal


@dataclass(frozen=True)
class RefinementRecord:
    description_id: str
    iteration: int
    before: str
    after: str
    feedback_raw: str
    no_progress: bool = False
    parse_error: Optional[str] = None


FEEDBACK_SECTION_KEYS = (
    "BehavioralIntent",
    "ContradictingElements",
    "CorrectBehavior",
    "FeedbackInstructions",
)

_FEEDBACK_HEADINGS = {
    "BehavioralIntent": (
        "SVA BEHAVIORAL INTENT",
        "PROPERTY BEHAVIORAL INTENT",
        "BEHAVIORAL INTENT",
    ),
    "ContradictingElements": ("CONTRADICTING ELEMENTS",),
    "CorrectBehavior": ("CORRECT BEHAVIOR",),
    "FeedbackInstructions": ("FEEDBACK", "FEEDBACK INSTRUCTIONS"),
}


def parse_feedback(description_id: str, raw: str) -> Feedback:
    sections = parse_sections(raw, _FEEDBACK_HEADINGS, required=FEEDBACK_SECTION_KEYS)
    return Feedback(description_id=description_id, sections=sections, raw=raw)


def analyze_inconsistency(
    backend: Backend,
    description: NaturalLanguageDescription,
    source_text: str,
    traces: Sequence[str],
    reference: ReferenceDocument,
    loop: Loop,
    effort: Effort = Effort.HIGH,
) -> Feedback:
    """Generate structured feedback for a contradicting item.

    source_text is the underlying property or SVA; traces are the
    reasoning traces from the item's check result.
    """
    template = (
        "inconsistency_sva" if loop is Loop.SVA_LOOP else "inconsistency_property"
    )
    trace_block = "\n\n".join(
        f"REASONING TRACE {i + 1}:\n{t}" for i, t in enumerate(traces) if t
    )
    if loop is Loop.SVA_LOOP:
        item_block = (
            f"SVA UNDER ANALYSIS:\n{source_text}\n\n"
            f"NATURAL LANGUAGE DESCRIPTION:\n{description.text}"
        )
    else:
        item_block = f"PROPERTY UNDER ANALYSIS:\n{description.text}"
    user_content = (
        f"DESIGN SPECIFICATION:\n{reference.text}\n\n"
        f"{item_block}\n\n{trace_block}\n"
    )
    request = PromptRequest(
        system_prompt=load_template(template),
        user_content=user_content,
        effort=effort,
        stage="feedback",
        item_id=description.id,
    )
    sample = backend.complete(request)
    return parse_feedback(description.id, sample.final_text)


def _feedback_block(feedback: Feedback) -> str:
    return feedback.raw


_LABEL_PREFIX_RE = re.compile(
    r"^(?:refined\s+(?:property|sva)|property|sva|answer|output)\s*:\s*",
    re.IGNORECASE,
)

# Abbreviations whose trailing period does not end a sentence.
_ABBREVIATIONS = ("e.g.", "i.e.", "etc.", "vs.", "cf.", "fig.", "no.", "approx.")


def _strip_label(text: str) -> str:
    return _LABEL_PREFIX_RE.sub("", text.strip()).strip()


def count_sentences(text: str) -> int:
    """Terminal-punctuation sentence count with an abbreviation allowlist."""
    masked = text
    for abbr in _ABBREVIATIONS:
        pattern = re.compile(re.escape(abbr), re.IGNORECASE)
        masked = pattern.sub(abbr[:-1] + " ", masked)
    # decimal points are not sentence boundaries
    masked = re.sub(r"(?<=\d)\.(?=\d)", " ", masked)
    boundaries = re.findall(r"[.!?]+(?=\s|$)", masked.strip())
    if not boundaries:
        return 1 if masked.strip() else 0
    # a single trailing terminator still means one sentence
    trailing = bool(re.search(r"[.!?]+$", masked.strip()))
    return len(boundaries) if trailing else len(boundaries) + 1


def refine_property(
    backend: Backend,
    property_text: str,
    feedback: Feedback,
    spec: ReferenceDocument,
    effort: Effort = Effort.HIGH,
) -> str:
    """Regenerate a property under feedback; the reply must be one sentence."""
    user_content = (
        f"DESIGN SPECIFICATION:\n{spec.text}\n\n"
        f"INCONSISTENT PROPERTY:\n{property_text}\n\n"
        f"FEEDBACK:\n{_feedback_block(feedback)}\n"
    )
    request = PromptRequest(
        system_prompt=load_template("refine_property"),
        user_content=user_content,
        effort=effort,
        stage="refine",
        item_id=feedback.description_id,
    )
    sample = backend.complete(request)
    refined = _strip_label(sample.final_text)
    if not refined:
        raise EmptyOutput("refiner returned an empty property")
    if count_sentences(refined) > 1:
        raise MultiSentenceOutput(f"expected one sentence, got: {refined!r}")
    return refined


def refine_sva(
    backend: Backend,
    sva_text: str,
    summary: str,
    feedback: Feedback,
    spec: ReferenceDocument,
    effort: Effort = Effort.HIGH,
) -> RefinedSva:
    """Regenerate an SVA under feedback; the reply must be a single line.

    The refined line is offered to the parser; a parse failure is
    recorded on the result so the caller can fall back to the LLM
    summary path, not raised.
    """
    user_content = (
        f"DESIGN SPECIFICATION:\n{spec.text}\n\n"
        f"INCONSISTENT SVA:\n{sva_text}\n\n"
        f"NATURAL LANGUAGE DESCRIPTION:\n{summary}\n\n"
        f"FEEDBACK:\n{_feedback_block(feedback)}\n"
    )
    request = PromptRequest(
        system_prompt=load_template("refine_sva"),
        user_content=user_content,
        effort=effort,
        stage="refine",
        item_id=feedback.description_id,
    )
    sample = backend.complete(request)
    refined = _strip_label(sample.final_text)
    if not refined:
        raise EmptyOutput("refiner returned an empty SVA")
    if len(refined.splitlines()) > 1:
        raise MultiLineOutput(f"expected one line, got: {refined!r}")
    parse_error = None
    try:
        parse_sva(refined)
    except SvaParseError as exc:
        parse_error = str(exc)
    return RefinedSva(text=refined, parse_error=parse_error)
