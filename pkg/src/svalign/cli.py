"""Command-line surface.

Subcommands: run (full pipeline), check (one-shot alignment of a single
description), parse-sva, summarize-sva, report. Exit codes: 0 success,
1 run error, 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from . import __version__
from .checker import (
    NaturalLanguageDescription,
    DescriptionKind,
    ReferenceDocument,
    Verdict,
    VerdictArity,
    check_alignment,
)
from .gateway import Backend, BackendConfig, BackendKind, Effort, RetryPolicy
from .orchestrator import (
    SCHEMA_VERSION,
    LoopConfig,
    ReferenceMode,
    RunManifest,
    SummaryMode,
    run_full_pipeline,
)
from .reporting import REPORT_FORMATS, emit_report
from .sva_parser import (
    SvaComponents,
    SvaParseError,
    UnsupportedConstruct,
    parse_sva,
    render_expr,
    render_summary,
)


def _components_to_dict(components: SvaComponents) -> dict:
    temporal = None
    if components.temporal is not None:
        temporal = {"min": components.temporal.min, "max": components.temporal.max}
    return {
        "trigger": {
            "edge": components.trigger.edge.value,
            "signal": components.trigger.signal,
        },
        "disable_iff": (
            render_expr(components.disable_iff)
            if components.disable_iff is not None
            else None
        ),
        "antecedent_negated": components.antecedent_negated,
        "antecedent": (
            render_expr(components.antecedent)
            if components.antecedent is not None
            else None
        ),
        "implication": (
            components.implication.value if components.implication else None
        ),
        "temporal": temporal,
        "consequent_negated": components.consequent_negated,
        "consequent": (
            render_expr(components.consequent)
            if components.consequent is not None
            else None
        ),
        "body": render_expr(components.body) if components.body is not None else None,
    }


def _error_record(source: str, exc: SvaParseError) -> dict:
    record = {
        "schema_version": SCHEMA_VERSION,
        "ok": False,
        "source": source,
        "error": {
            "type": type(exc).__name__,
            "message": exc.message,
            "offset": exc.offset,
        },
    }
    if isinstance(exc, UnsupportedConstruct):
        record["error"]["token"] = exc.token
    return record


def _read_lines(path: Optional[str]) -> List[str]:
    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _build_backend(config: dict, args: argparse.Namespace) -> Backend:
    backend_cfg = dict(config.get("backend", {}))
    if getattr(args, "backend", None):
        backend_cfg["kind"] = args.backend
    if getattr(args, "fixture", None):
        backend_cfg["kind"] = backend_cfg.get("kind", "scripted")
        backend_cfg["fixture"] = args.fixture
    kind = backend_cfg.get("kind")
    if kind is None:
        raise SystemExit2("no backend configured; pass --config or --fixture")
    retry = RetryPolicy(
        max_attempts=backend_cfg.get("max_attempts", 3),
        backoff_seconds=backend_cfg.get("backoff_seconds", 1.0),
        backoff_factor=backend_cfg.get("backoff_factor", 2.0),
    )
    return BackendConfig(
        kind=BackendKind(kind),
        endpoint=backend_cfg.get("endpoint", ""),
        model=backend_cfg.get("model", ""),
        api_key_env=backend_cfg.get("api_key_env", "SVALIGN_API_KEY"),
        fixture_path=backend_cfg.get("fixture", ""),
        retry=retry,
    ).build()


def _build_loop_config(config: dict, args: argparse.Namespace) -> LoopConfig:
    def pick(flag: str, key: str, default):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        return config.get(key, default)

    return LoopConfig(
        max_iterations=int(pick("max_iterations", "max_iterations", 3)),
        k=int(pick("k", "k", 3)),
        effort=Effort(pick("effort", "effort", "high")),
        verdict_arity=VerdictArity(pick("arity", "verdict_arity", "three_way")),
        sva_reference_mode=ReferenceMode(
            pick("reference_mode", "reference_mode", "bank_if_available")
        ),
        recheck_unknown=bool(config.get("recheck_unknown", False)),
        summary_mode=SummaryMode(config.get("summary_mode", "auto")),
    )


class SystemExit2(Exception):
    """Usage error reported with exit status 2."""


def _cmd_parse_sva(args: argparse.Namespace) -> int:
    status = 0
    for line in _read_lines(args.input):
        try:
            components = parse_sva(line)
        except SvaParseError as exc:
            print(json.dumps(_error_record(line, exc), sort_keys=True))
            status = 1
            continue
        record = {
            "schema_version": SCHEMA_VERSION,
            "ok": True,
            "source": line,
            "components": _components_to_dict(components),
        }
        print(json.dumps(record, sort_keys=True))
    return status


def _cmd_summarize_sva(args: argparse.Namespace) -> int:
    status = 0
    for line in _read_lines(args.input):
        try:
            components = parse_sva(line)
        except SvaParseError as exc:
            print(json.dumps(_error_record(line, exc), sort_keys=True))
            status = 1
            continue
        record = {
            "schema_version": SCHEMA_VERSION,
            "ok": True,
            "source": line,
            "summary": render_summary(components),
        }
        print(json.dumps(record, sort_keys=True))
    return status


def _cmd_check(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    backend = _build_backend(config, args)
    loop_config = _build_loop_config(config, args)
    spec = ReferenceDocument.from_spec_text(
        Path(args.spec).read_text(encoding="utf-8"), args.spec
    )
    description = NaturalLanguageDescription(
        id=args.id, kind=DescriptionKind.PROPERTY, text=args.text
    )
    result = check_alignment(
        backend,
        description,
        spec,
        loop_config.k,
        arity=loop_config.verdict_arity,
        effort=loop_config.effort,
    )
    print(Verdict(result.final).name)
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    backend = _build_backend(config, args)
    loop_config = _build_loop_config(config, args)
    spec = ReferenceDocument.from_spec_text(
        Path(args.spec).read_text(encoding="utf-8"), args.spec
    )
    properties: List[Tuple[str, str]] = []
    svas: List[Tuple[str, str]] = []
    if args.properties:
        properties = [
            (f"p{i + 1:03d}", text)
            for i, text in enumerate(_read_lines(args.properties))
        ]
    if args.svas:
        svas = [
            (f"a{i + 1:03d}", text) for i, text in enumerate(_read_lines(args.svas))
        ]
    if not properties and not svas:
        raise SystemExit2("at least one of --properties/--svas is required")
    manifest = run_full_pipeline(
        spec, properties, svas, loop_config, backend, run_dir=args.out
    )
    print(emit_report(manifest, "human"), end="")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    manifest = RunManifest.load(args.manifest)
    print(emit_report(manifest, args.format), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svalign",
        description=(
            "Semantic alignment checking and refinement for hardware "
            "properties and SystemVerilog assertions"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_backend_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--backend", choices=["scripted", "remote"])
        p.add_argument("--fixture", help="scripted backend fixture file")
        p.add_argument("--k", type=int, help="reasoning paths per check")
        p.add_argument("--max-iterations", dest="max_iterations", type=int)
        p.add_argument("--effort", choices=[e.value for e in Effort])
        p.add_argument("--arity", choices=[a.value for a in VerdictArity])
        p.add_argument(
            "--reference-mode",
            dest="reference_mode",
            choices=[m.value for m in ReferenceMode],
        )

    p_run = sub.add_parser("run", help="run the full two-loop pipeline")
    p_run.add_argument("--spec", required=True, help="design specification file")
    p_run.add_argument("--properties", help="file with one property per line")
    p_run.add_argument("--svas", help="file with one SVA per line")
    p_run.add_argument("--out", required=True, help="run directory to write")
    add_backend_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_check = sub.add_parser("check", help="one-shot alignment check")
    p_check.add_argument("--spec", required=True)
    p_check.add_argument("--text", required=True, help="description to judge")
    p_check.add_argument("--id", default="item", help="item id for records")
    add_backend_flags(p_check)
    p_check.set_defaults(func=_cmd_check)

    p_parse = sub.add_parser(
        "parse-sva", help="parse assertions (one per line) to structured records"
    )
    p_parse.add_argument("--input", help="input file, default stdin")
    p_parse.set_defaults(func=_cmd_parse_sva)

    p_sum = sub.add_parser(
        "summarize-sva", help="render natural-language summaries for assertions"
    )
    p_sum.add_argument("--input", help="input file, default stdin")
    p_sum.set_defaults(func=_cmd_summarize_sva)

    p_report = sub.add_parser("report", help="render a report from a manifest")
    p_report.add_argument("--manifest", required=True)
    p_report.add_argument("--format", choices=REPORT_FORMATS, default="human")
    p_report.set_defaults(func=_cmd_report)

    return parser


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # run errors map to exit 1 with a diagnostic
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
