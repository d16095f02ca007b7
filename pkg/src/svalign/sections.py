"""Parsing of heading-structured model output into named sections.

Model replies to the analysis prompts are organized under fixed headings
("CONTRADICTING ELEMENTS", "EVIDENCE", ...). Headings are matched
case-insensitively at line starts, tolerating leading list markers and a
trailing colon, since model formatting varies.
"""

import re
from typing import Dict, Sequence, Tuple


class MissingSection(Exception):
    """A required heading is absent (or its body empty) in model output."""

    def __init__(self, section: str) -> None:
        super().__init__(f"missing required section: {section}")
        self.section = section


# Leading list markers / numbering allowed before a heading.
_MARKER_RE = re.compile(r"^\s*(?:[-*#•]+\s*|\d+[.)]\s*)?")


def _normalize_heading(line: str) -> str:
    stripped = _MARKER_RE.sub("", line).strip()
    stripped = stripped.rstrip(":").strip()
    return stripped.upper()


def parse_sections(
    raw: str,
    headings: Dict[str, Sequence[str]],
    required: Sequence[str] = (),
) -> Dict[str, str]:
    """Split raw output into sections keyed by canonical names.

    headings maps each canonical key to the heading strings that open it.
    A heading line may carry inline content after a colon. Raises
    MissingSection for any required key that is absent or empty.
    """
    lookup = {}
    for key, aliases in headings.items():
        for alias in aliases:
            lookup[alias.upper()] = key

    sections: Dict[str, list] = {}
    current = None
    for line in raw.splitlines():
        matched = _match_heading(line, lookup)
        if matched is not None:
            key, inline = matched
            sections.setdefault(key, [])
            if inline:
                sections[key].append(inline)
            current = key
        elif current is not None:
            sections[current].append(line)

    result = {key: "\n".join(lines).strip() for key, lines in sections.items()}
    for key in required:
        if not result.get(key):
            raise MissingSection(key)
    return result


def _match_heading(line: str, lookup: Dict[str, str]):
    candidate = _normalize_heading(line)
    if candidate in lookup:
        return lookup[candidate], ""
    if ":" in line:
        head, _, tail = line.partition(":")
        head_norm = _normalize_heading(head)
        if head_norm in lookup:
            return lookup[head_norm], tail.strip()
    return None


def bullet_lines(section_text: str) -> Tuple[str, ...]:
    """Return non-empty lines of a section with list markers stripped."""
    lines = []
    for line in section_text.splitlines():
        cleaned = _MARKER_RE.sub("", line).strip()
        if cleaned:
            lines.append(cleaned)
    return tuple(lines)
