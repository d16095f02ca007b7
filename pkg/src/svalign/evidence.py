"""Evidence extraction for entailed items and analysis of unknown items.

Entails verdicts yield a four-section evidence report whose quotes are
mechanically verified as substrings of the reference document (after
whitespace normalization). Unknown verdicts yield a partition of the
description's elements into supported and undefined, plus the assumptions
and interpretations under which the item would be aligned or misaligned.
"""

import re
from dataclasses import dataclass
from typing import Tuple

from .checker import NaturalLanguageDescription, ReferenceDocument
from .gateway import Backend, Effort, PromptRequest
from .prompts import load_template
from .sections import MissingSection, bullet_lines, parse_sections


class EmptyUndefinedList(Warning):
    """An Unknown verdict came back with no undefined elements."""


@dataclass(frozen=True)
class EvidenceQuote:
    quote: str
    locator: str
    verified: bool


@dataclass(frozen=True)
class EvidenceReport:
    description_id: str
    sections: dict  # BehavioralIntent, ExplicitlySupportedElements, Evidence, Assumptions
    quotes: Tuple[EvidenceQuote, ...]
    no_explicit_support: bool
    conflict_unresolved: bool
    raw: str


@dataclass(frozen=True)
class SupportedElement:
    element: str
    quote: str
    locator: str
    verified: bool


@dataclass(frozen=True)
class UnknownAnalysis:
    description_id: str
    sections: dict
    supported_elements: Tuple[SupportedElement, ...]
    undefined_elements: Tuple[str, ...]
    required_assumptions: Tuple[str, ...]
    interpretations: Tuple[Tuple[str, str], ...]  # (tag, text)
    empty_undefined: bool
    raw: str


EVIDENCE_SECTION_KEYS = (
    "BehavioralIntent",
    "ExplicitlySupportedElements",
    "Evidence",
    "Assumptions",
)

_EVIDENCE_HEADINGS = {
    "BehavioralIntent": ("BEHAVIORAL INTENT",),
    "ExplicitlySupportedElements": ("EXPLICITLY SUPPORTED ELEMENTS",),
    "Evidence": ("EVIDENCE",),
    "Assumptions": ("ASSUMPTIONS",),
}

_UNKNOWN_HEADINGS = {
    "BehavioralIntent": ("BEHAVIORAL INTENT",),
    "ExplicitlySupportedElements": ("EXPLICITLY SUPPORTED ELEMENTS",),
    "UndefinedElements": ("UNDEFINED ELEMENTS",),
    "RequiredAssumptions": ("REQUIRED ASSUMPTIONS", "ASSUMPTIONS"),
    "Interpretations": ("INTERPRETATIONS",),
}

_QUOTE_RE = re.compile(r'"([^"]+)"')
_LOCATOR_RE = re.compile(r"\(([^()]*)\)\s*$")
_NO_SUPPORT_MARKER = "none explicit"


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def verify_quote(quote: str, reference_text: str) -> bool:
    """Exact substring check after whitespace normalization."""
    return normalize_whitespace(quote) in normalize_whitespace(reference_text)


def _is_empty_assumptions(text: str) -> bool:
    cleaned = text.strip().rstrip(".").strip()
    return cleaned in ("", "none", "n/a")


def _parse_quote_line(line: str):
    m = _QUOTE_RE.search(line)
    if m is None:
        return None
    quote = m.group(1)
    tail = line[m.end():].strip()
    loc_match = _LOCATOR_RE.search(tail) or _LOCATOR_RE.search(line)
    if loc_match:
        locator = loc_match.group(1).strip()
    else:
        locator = tail.lstrip("-—:, ").strip()
    return quote, locator


def parse_evidence_report(
    description_id: str, raw: str, reference: ReferenceDocument
) -> EvidenceReport:
    sections = parse_sections(raw, _EVIDENCE_HEADINGS, required=EVIDENCE_SECTION_KEYS)
    evidence_text = sections["Evidence"]
    quotes = []
    for line in bullet_lines(evidence_text):
        parsed = _parse_quote_line(line)
        if parsed is None:
            continue
        quote, locator = parsed
        quotes.append(
            EvidenceQuote(quote, locator, verify_quote(quote, reference.text))
        )
    no_explicit = _NO_SUPPORT_MARKER in evidence_text.lower()
    if not quotes and not no_explicit:
        raise MissingSection("Evidence")

    # A report that mentions conflicting specification content must also
    # state which side is assumed. The heading word ASSUMPTIONS does not
    # count, so look at section bodies (an empty/none assumptions section
    # resolves nothing).
    body = " ".join(sections.values()).lower()
    mentions_conflict = "conflict" in body
    assumptions_body = sections["Assumptions"].lower()
    resolves_conflict = "assum" in body or not _is_empty_assumptions(assumptions_body)
    conflict_unresolved = mentions_conflict and not resolves_conflict

    return EvidenceReport(
        description_id=description_id,
        sections=sections,
        quotes=tuple(quotes),
        no_explicit_support=no_explicit,
        conflict_unresolved=conflict_unresolved,
        raw=raw,
    )


def extract_entails_evidence(
    backend: Backend,
    description: NaturalLanguageDescription,
    reference: ReferenceDocument,
    effort: Effort = Effort.HIGH,
) -> EvidenceReport:
    """Extract specification evidence justifying an entailed item."""
    user_content = (
        f"DESIGN SPECIFICATION:\n{reference.text}\n\n"
        f"PROPERTY UNDER ANALYSIS:\n{description.text}\n"
    )
    request = PromptRequest(
        system_prompt=load_template("evidence"),
        user_content=user_content,
        effort=effort,
        stage="evidence",
        item_id=description.id,
    )
    sample = backend.complete(request)
    return parse_evidence_report(description.id, sample.final_text, reference)


def parse_unknown_analysis(
    description_id: str, raw: str, reference: ReferenceDocument
) -> UnknownAnalysis:
    sections = parse_sections(
        raw,
        _UNKNOWN_HEADINGS,
        required=(
            "BehavioralIntent",
            "ExplicitlySupportedElements",
            "UndefinedElements",
            "RequiredAssumptions",
            "Interpretations",
        ),
    )

    supported = []
    for line in bullet_lines(sections["ExplicitlySupportedElements"]):
        parsed = _parse_quote_line(line)
        if parsed is None:
            continue
        quote, locator = parsed
        element = line.split('"')[0].rstrip("-—:, ").strip()
        supported.append(
            SupportedElement(element, quote, locator,
                             verify_quote(quote, reference.text))
        )

    undefined = tuple(
        line
        for line in bullet_lines(sections["UndefinedElements"])
        if line.lower() not in ("none", "none.")
    )
    assumptions = bullet_lines(sections["RequiredAssumptions"])

    interpretations = []
    for line in bullet_lines(sections["Interpretations"]):
        upper = line.upper()
        if upper.startswith("ALIGNED"):
            tag = "aligned-under"
        elif upper.startswith("MISALIGNED"):
            tag = "misaligned-under"
        else:
            continue
        text = line.partition(":")[2].strip() or line
        interpretations.append((tag, text))
    if not interpretations:
        raise MissingSection("Interpretations")

    return UnknownAnalysis(
        description_id=description_id,
        sections=sections,
        supported_elements=tuple(supported),
        undefined_elements=undefined,
        required_assumptions=assumptions,
        interpretations=tuple(interpretations),
        empty_undefined=not undefined,
        raw=raw,
    )


def extract_unknown_analysis(
    backend: Backend,
    description: NaturalLanguageDescription,
    reference: ReferenceDocument,
    effort: Effort = Effort.HIGH,
) -> UnknownAnalysis:
    """Partition an unknown item into supported and undefined elements.

    An empty undefined list signals verdict/analysis disagreement; it is
    flagged on the result (empty_undefined) rather than raised.
    """
    user_content = (
        f"DESIGN SPECIFICATION:\n{reference.text}\n\n"
        f"PROPERTY UNDER ANALYSIS:\n{description.text}\n"
    )
    request = PromptRequest(
        system_prompt=load_template("unknown_analysis"),
        user_content=user_content,
        effort=effort,
        stage="unknown",
        item_id=description.id,
    )
    sample = backend.complete(request)
    return parse_unknown_analysis(description.id, sample.final_text, reference)
