"""Report generation over run manifests.

Reports are pure functions of a manifest: category breakdowns per loop,
per-iteration trajectories, exclusion counts, and a plot-ready data table.
The two-decimal alignment-score rendering is used for display; the full
precision score stays in the structured output.
"""

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Dict, List

from .orchestrator import RunManifest


class IncompleteManifest(Exception):
    """The manifest lacks data required to build a report."""


def render_score(entails: int, total: int) -> str:
    """Two-decimal rendering of entails/total (half rounds up)."""
    if total <= 0:
        raise IncompleteManifest("population is empty")
    score = Decimal(entails) / Decimal(total)
    return str(score.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class CategoryBreakdown:
    label: str
    n: int
    entails: int
    contradicts: int
    unknown: int

    def __post_init__(self) -> None:
        if self.entails + self.contradicts + self.unknown != self.n:
            raise IncompleteManifest(
                f"{self.label}: category counts do not sum to the total"
            )

    @property
    def score(self) -> float:
        return self.entails / self.n

    @property
    def score_rendered(self) -> str:
        return render_score(self.entails, self.n)

    def as_row(self) -> tuple:
        return (self.n, self.score_rendered, self.entails,
                self.contradicts, self.unknown)


@dataclass(frozen=True)
class TrajectoryPoint:
    loop: str
    t: int
    entails: int
    contradicts: int
    unknown: int
    score: float


@dataclass
class RunReport:
    breakdowns: List[CategoryBreakdown]
    trajectories: List[TrajectoryPoint]
    exclusions: Dict[str, int]  # loop label -> excluded count
    inputs: Dict[str, int]  # loop label -> input count
    evidence_counts: Dict[str, int]
    unknown_counts: Dict[str, int]
    unverified_quotes: int


_LOOP_LABELS = {"property_loop": "property", "sva_loop": "sva"}


def build_report(manifest: RunManifest) -> RunReport:
    """Derive a report from a manifest; raises IncompleteManifest."""
    data = manifest.data
    for key in ("schema_version", "config", "inputs"):
        if key not in data:
            raise IncompleteManifest(f"manifest missing {key!r}")

    breakdowns: List[CategoryBreakdown] = []
    trajectories: List[TrajectoryPoint] = []
    exclusions: Dict[str, int] = {}
    inputs: Dict[str, int] = {}
    evidence_counts: Dict[str, int] = {}
    unknown_counts: Dict[str, int] = {}
    unverified = 0

    for key, label in _LOOP_LABELS.items():
        loop_data = data.get(key)
        if loop_data is None:
            continue
        iterations = loop_data.get("iterations")
        if not iterations:
            raise IncompleteManifest(f"{key} has no iterations")
        final = iterations[-1]
        breakdowns.append(
            CategoryBreakdown(
                label=label,
                n=len(final["population"]),
                entails=final["entails"],
                contradicts=final["contradicts"],
                unknown=final["unknown"],
            )
        )
        for state in iterations:
            trajectories.append(
                TrajectoryPoint(
                    loop=label,
                    t=state["t"],
                    entails=state["entails"],
                    contradicts=state["contradicts"],
                    unknown=state["unknown"],
                    score=state["score"],
                )
            )
        exclusions[label] = len(loop_data.get("exclusions", []))
        input_key = "properties" if label == "property" else "svas"
        inputs[label] = len(data["inputs"].get(input_key, []))
        evidence_counts[label] = len(loop_data.get("evidence", {}))
        unknown_counts[label] = len(loop_data.get("unknown", {}))
        for report in loop_data.get("evidence", {}).values():
            unverified += sum(
                1 for q in report.get("quotes", []) if not q.get("verified")
            )

    if not breakdowns:
        raise IncompleteManifest("manifest contains no loop results")
    return RunReport(
        breakdowns=breakdowns,
        trajectories=trajectories,
        exclusions=exclusions,
        inputs=inputs,
        evidence_counts=evidence_counts,
        unknown_counts=unknown_counts,
        unverified_quotes=unverified,
    )


def _human_report(report: RunReport) -> str:
    lines = []
    lines.append(f"{'loop':<10}{'n':>6}{'AS':>8}{'E':>6}{'C':>6}{'U':>6}")
    for b in report.breakdowns:
        n, score, e, c, u = b.as_row()
        lines.append(f"{b.label:<10}{n:>6}{score:>8}{e:>6}{c:>6}{u:>6}")
    lines.append("")
    lines.append("trajectory (loop, t, E, C, U, score):")
    for p in report.trajectories:
        lines.append(
            f"  {p.loop} t={p.t}: E={p.entails} C={p.contradicts} "
            f"U={p.unknown} score={p.score:.4f}"
        )
    lines.append("")
    for label in report.inputs:
        scored = next(
            (b.n for b in report.breakdowns if b.label == label), 0
        )
        lines.append(
            f"{label}: inputs={report.inputs[label]} scored={scored} "
            f"excluded={report.exclusions.get(label, 0)} "
            f"evidence={report.evidence_counts.get(label, 0)} "
            f"unknown_analyses={report.unknown_counts.get(label, 0)}"
        )
    lines.append(f"unverified evidence quotes: {report.unverified_quotes}")
    return "\n".join(lines) + "\n"


def _structured_report(report: RunReport) -> str:
    payload = {
        "breakdowns": [
            {
                "label": b.label,
                "n": b.n,
                "entails": b.entails,
                "contradicts": b.contradicts,
                "unknown": b.unknown,
                "score": b.score,
                "score_rendered": b.score_rendered,
            }
            for b in report.breakdowns
        ],
        "trajectories": [
            {
                "loop": p.loop,
                "t": p.t,
                "entails": p.entails,
                "contradicts": p.contradicts,
                "unknown": p.unknown,
                "score": p.score,
            }
            for p in report.trajectories
        ],
        "inputs": report.inputs,
        "exclusions": report.exclusions,
        "evidence_counts": report.evidence_counts,
        "unknown_counts": report.unknown_counts,
        "unverified_quotes": report.unverified_quotes,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _plot_data(report: RunReport) -> str:
    """One CSV row per iteration per category, for external plotting."""
    rows = ["loop,iteration,category,value"]
    for p in report.trajectories:
        rows.append(f"{p.loop},{p.t},entails,{p.entails}")
        rows.append(f"{p.loop},{p.t},contradicts,{p.contradicts}")
        rows.append(f"{p.loop},{p.t},unknown,{p.unknown}")
        rows.append(f"{p.loop},{p.t},score,{p.score}")
    return "\n".join(rows) + "\n"


REPORT_FORMATS = ("human", "json", "plot")


def emit_report(manifest: RunManifest, format: str = "human") -> str:
    """Render a report artifact from a manifest in the requested format."""
    report = build_report(manifest)
    if format == "human":
        return _human_report(report)
    if format == "json":
        return _structured_report(report)
    if format == "plot":
        return _plot_data(report)
    raise ValueError(f"unknown report format {format!r}")
