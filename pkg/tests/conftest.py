"""Shared fixtures: scripted backend builders and component strategies."""

import hypothesis.strategies as st
import pytest

from svalign.checker import ReferenceDocument
from svalign.gateway import Backend, PromptRequest, ScriptedBackend
from svalign.sva_parser import (
    BinaryOp,
    ClockEvent,
    DelayRange,
    Edge,
    Identifier,
    Implication,
    IntLiteral,
    SvaComponents,
    SysCall,
    UnaryOp,
    _UNSUPPORTED_KEYWORDS,
)

SPEC_TEXT = (
    "The WRITE signal is asserted for exactly one cycle per transfer.\n"
    "When WRITE is high and DATA is zero, SIGNAL must go low within two "
    "cycles.\n"
    "The RESET signal is active low and clears all counters.\n"
)

SPEC_QUOTE = "The WRITE signal is asserted for exactly one cycle per transfer."


@pytest.fixture
def spec_doc():
    return ReferenceDocument.from_spec_text(SPEC_TEXT, "spec.txt")


FEEDBACK_TEXT = (
    "SVA BEHAVIORAL INTENT: The item checks a write handshake.\n"
    "CONTRADICTING ELEMENTS: The timing window disagrees with the document.\n"
    "CORRECT BEHAVIOR: \"When WRITE is high and DATA is zero, SIGNAL must "
    "go low within two cycles.\" (page 1)\n"
    "FEEDBACK: Restate the response window as two cycles.\n"
)

EVIDENCE_TEXT = (
    "BEHAVIORAL INTENT: The item constrains the write pulse width.\n"
    "EXPLICITLY SUPPORTED ELEMENTS: The single-cycle write pulse.\n"
    f'EVIDENCE: "{SPEC_QUOTE}" (Section 1)\n'
    "ASSUMPTIONS: None beyond the documented clocking.\n"
)

UNKNOWN_TEXT = (
    "BEHAVIORAL INTENT: The item assumes a reset synchronizer.\n"
    "EXPLICITLY SUPPORTED ELEMENTS: reset polarity: "
    '"The RESET signal is active low and clears all counters." (Section 1)\n'
    "UNDEFINED ELEMENTS: The synchronizer depth is never described.\n"
    "REQUIRED ASSUMPTIONS: Reset deassertion is synchronous to the clock.\n"
    "INTERPRETATIONS:\n"
    "ALIGNED: if deassertion is synchronized internally\n"
    "MISALIGNED: if reset may deassert asynchronously\n"
)


def support_rules():
    """Scripted replies for the non-check stages of a loop run."""
    return [
        {"stage": "feedback", "final": FEEDBACK_TEXT},
        {"stage": "evidence", "final": EVIDENCE_TEXT},
        {"stage": "unknown", "final": UNKNOWN_TEXT},
        {"stage": "refine", "final": "refined {item_id} responds within two cycles"},
        {"stage": "summarize", "final": "summary of {item_id}"},
    ]


def scripted(rules, default=None):
    fixture = {"rules": rules}
    if default is not None:
        fixture["default"] = default
    return ScriptedBackend(fixture)


class RecordingBackend(Backend):
    """Wraps a backend and logs every request it sees."""

    def __init__(self, inner: Backend) -> None:
        self.inner = inner
        self.requests = []

    def sample_paths(self, request: PromptRequest):
        self.requests.append(request)
        return self.inner.sample_paths(request)


# ---------------------------------------------------------------------------
# Hypothesis strategies for the supported assertion subset

_RESERVED = _UNSUPPORTED_KEYWORDS | {
    "not", "disable", "iff", "posedge", "negedge", "assert", "property",
}

identifiers = st.from_regex(r"[a-zA-Z_][a-zA-Z0-9_]{0,7}", fullmatch=True).filter(
    lambda s: s not in _RESERVED
)


def _extend_expr(children):
    unary = st.builds(UnaryOp, st.sampled_from(["!", "~"]), children)
    binary = st.builds(
        BinaryOp,
        st.sampled_from(["&&", "||", "==", "!=", "===", "!==", "<", ">", "<=", ">="]),
        children,
        children,
    )
    one_arg = st.builds(
        SysCall,
        st.sampled_from(["isunknown", "rose", "fell", "stable"]),
        st.tuples(children),
    )
    past = st.builds(
        SysCall,
        st.just("past"),
        st.one_of(st.tuples(children), st.tuples(children, children)),
    )
    return st.one_of(unary, binary, one_arg, past)


bool_exprs = st.recursive(
    st.one_of(
        st.builds(Identifier, identifiers),
        st.builds(IntLiteral, st.integers(min_value=0, max_value=255)),
    ),
    _extend_expr,
    max_leaves=12,
)

clock_events = st.builds(ClockEvent, st.sampled_from(list(Edge)), identifiers)


@st.composite
def delay_ranges(draw):
    lo = draw(st.integers(min_value=0, max_value=6))
    hi = draw(st.one_of(st.none(), st.integers(min_value=lo, max_value=lo + 6)))
    return DelayRange(lo, hi)


@st.composite
def sva_components(draw):
    trigger = draw(clock_events)
    disable = draw(st.one_of(st.none(), bool_exprs))
    if draw(st.booleans()):
        return SvaComponents(
            trigger=trigger,
            disable_iff=disable,
            antecedent_negated=draw(st.booleans()),
            antecedent=draw(bool_exprs),
            implication=draw(st.sampled_from(list(Implication))),
            temporal=draw(st.one_of(st.none(), delay_ranges())),
            consequent_negated=draw(st.booleans()),
            consequent=draw(bool_exprs),
        )
    return SvaComponents(trigger=trigger, disable_iff=disable, body=draw(bool_exprs))
