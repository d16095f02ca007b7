import pytest

from svalign.checker import DescriptionKind, NaturalLanguageDescription
from svalign.evidence import (
    extract_entails_evidence,
    extract_unknown_analysis,
    normalize_whitespace,
    parse_evidence_report,
    parse_unknown_analysis,
    verify_quote,
)
from svalign.sections import MissingSection

from conftest import EVIDENCE_TEXT, SPEC_QUOTE, UNKNOWN_TEXT, scripted


def make_property(item_id="p001"):
    return NaturalLanguageDescription(
        id=item_id, kind=DescriptionKind.PROPERTY,
        text="WRITE is high for one cycle.",
    )


class TestVerifyQuote:
    def test_exact_substring(self, spec_doc):
        assert verify_quote(SPEC_QUOTE, spec_doc.text)

    def test_whitespace_normalized(self, spec_doc):
        mangled = SPEC_QUOTE.replace(" signal ", "  signal\n\t")
        assert verify_quote(mangled, spec_doc.text)

    def test_fabricated_quote_fails(self, spec_doc):
        assert not verify_quote("The bus retries forever.", spec_doc.text)

    def test_paraphrase_fails(self, spec_doc):
        assert not verify_quote(
            "The WRITE signal is asserted for one cycle.", spec_doc.text
        )

    def test_normalize_whitespace(self):
        assert normalize_whitespace("  a \n b\t c ") == "a b c"


class TestEvidenceReport:
    def test_parse_and_verify(self, spec_doc):
        report = parse_evidence_report("p001", EVIDENCE_TEXT, spec_doc)
        assert len(report.quotes) == 1
        quote = report.quotes[0]
        assert quote.quote == SPEC_QUOTE
        assert quote.locator == "Section 1"
        assert quote.verified
        assert not report.no_explicit_support
        assert not report.conflict_unresolved

    def test_fabricated_quote_flagged(self, spec_doc):
        raw = EVIDENCE_TEXT.replace(SPEC_QUOTE, "An invented sentence.")
        report = parse_evidence_report("p001", raw, spec_doc)
        assert not report.quotes[0].verified

    def test_no_explicit_support_marker(self, spec_doc):
        raw = (
            "BEHAVIORAL INTENT: intent.\n"
            "EXPLICITLY SUPPORTED ELEMENTS: none.\n"
            "EVIDENCE: None explicit; follows from the reset description.\n"
            "ASSUMPTIONS: reset is synchronous.\n"
        )
        report = parse_evidence_report("p001", raw, spec_doc)
        assert report.no_explicit_support
        assert report.quotes == ()

    def test_empty_evidence_without_marker_rejected(self, spec_doc):
        raw = EVIDENCE_TEXT.replace(
            f'"{SPEC_QUOTE}" (Section 1)', "it just follows."
        )
        with pytest.raises(MissingSection):
            parse_evidence_report("p001", raw, spec_doc)

    def test_missing_assumptions_section_rejected(self, spec_doc):
        raw = "\n".join(
            line for line in EVIDENCE_TEXT.splitlines()
            if not line.startswith("ASSUMPTIONS")
        )
        with pytest.raises(MissingSection):
            parse_evidence_report("p001", raw, spec_doc)

    def test_unresolved_conflict_flagged(self, spec_doc):
        raw = EVIDENCE_TEXT.replace(
            "ASSUMPTIONS: None beyond the documented clocking.",
            "ASSUMPTIONS: none.",
        ).replace(
            "BEHAVIORAL INTENT: The item constrains the write pulse width.",
            "BEHAVIORAL INTENT: Sections 1 and 3 conflict on pulse width.",
        )
        report = parse_evidence_report("p001", raw, spec_doc)
        assert report.conflict_unresolved

    def test_conflict_with_stated_assumption_ok(self, spec_doc):
        raw = EVIDENCE_TEXT.replace(
            "The item constrains the write pulse width.",
            "Sections 1 and 3 conflict; Section 1 is assumed authoritative.",
        )
        report = parse_evidence_report("p001", raw, spec_doc)
        assert not report.conflict_unresolved

    def test_extract_via_backend(self, spec_doc):
        backend = scripted([{"stage": "evidence", "final": EVIDENCE_TEXT}])
        report = extract_entails_evidence(backend, make_property(), spec_doc)
        assert report.description_id == "p001"
        assert report.quotes[0].verified


class TestUnknownAnalysis:
    def test_parse_full_report(self, spec_doc):
        analysis = parse_unknown_analysis("p002", UNKNOWN_TEXT, spec_doc)
        assert analysis.undefined_elements == (
            "The synchronizer depth is never described.",
        )
        assert analysis.required_assumptions == (
            "Reset deassertion is synchronous to the clock.",
        )
        assert analysis.interpretations == (
            ("aligned-under", "if deassertion is synchronized internally"),
            ("misaligned-under", "if reset may deassert asynchronously"),
        )
        assert not analysis.empty_undefined
        assert len(analysis.supported_elements) == 1
        assert analysis.supported_elements[0].verified
        assert analysis.supported_elements[0].element == "reset polarity"

    def test_empty_undefined_is_flagged_not_fatal(self, spec_doc):
        raw = UNKNOWN_TEXT.replace(
            "UNDEFINED ELEMENTS: The synchronizer depth is never described.",
            "UNDEFINED ELEMENTS: none.",
        )
        analysis = parse_unknown_analysis("p002", raw, spec_doc)
        assert analysis.empty_undefined
        assert analysis.undefined_elements == ()

    def test_missing_interpretations_rejected(self, spec_doc):
        raw = UNKNOWN_TEXT.replace("ALIGNED:", "possibly:").replace(
            "MISALIGNED:", "otherwise:"
        )
        with pytest.raises(MissingSection):
            parse_unknown_analysis("p002", raw, spec_doc)

    def test_fabricated_supported_quote_flagged(self, spec_doc):
        raw = UNKNOWN_TEXT.replace(
            "The RESET signal is active low and clears all counters.",
            "RESET is active high.",
        )
        analysis = parse_unknown_analysis("p002", raw, spec_doc)
        assert not analysis.supported_elements[0].verified

    def test_extract_via_backend(self, spec_doc):
        backend = scripted([{"stage": "unknown", "final": UNKNOWN_TEXT}])
        analysis = extract_unknown_analysis(backend, make_property("p002"), spec_doc)
        assert analysis.description_id == "p002"
