"""Semantic alignment checking and refinement for natural-language hardware
properties and SystemVerilog assertions."""

__version__ = "0.1.0"

from .checker import (
    CheckResult,
    DescriptionKind,
    Loop,
    NaturalLanguageDescription,
    ReferenceDocument,
    Verdict,
    VerdictArity,
    check_alignment,
    compute_alignment_score,
    majority_vote,
    select_reference,
)
from .gateway import (
    Backend,
    BackendConfig,
    Effort,
    PathSample,
    PromptRequest,
    RemoteBackend,
    ScriptedBackend,
)
from .orchestrator import (
    AlignedBank,
    IterationState,
    LoopConfig,
    ReferenceMode,
    RunManifest,
    run_full_pipeline,
    run_property_loop,
    run_sva_loop,
)
from .reporting import CategoryBreakdown, RunReport, emit_report
from .sva_parser import (
    SvaComponents,
    SvaParseError,
    SvaSyntaxError,
    UnsupportedConstruct,
    parse_sva,
    render_expr,
    render_summary,
    render_sva,
)

__all__ = [
    "AlignedBank",
    "Backend",
    "BackendConfig",
    "CategoryBreakdown",
    "CheckResult",
    "DescriptionKind",
    "Effort",
    "IterationState",
    "Loop",
    "LoopConfig",
    "NaturalLanguageDescription",
    "PathSample",
    "PromptRequest",
    "ReferenceDocument",
    "ReferenceMode",
    "RemoteBackend",
    "RunManifest",
    "RunReport",
    "ScriptedBackend",
    "SvaComponents",
    "SvaParseError",
    "SvaSyntaxError",
    "UnsupportedConstruct",
    "Verdict",
    "VerdictArity",
    "check_alignment",
    "compute_alignment_score",
    "emit_report",
    "majority_vote",
    "parse_sva",
    "render_expr",
    "render_summary",
    "render_sva",
    "run_full_pipeline",
    "run_property_loop",
    "run_sva_loop",
    "select_reference",
]
