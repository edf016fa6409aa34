"""Command-line interface: ``qmm check|stats|trace|goal|eval|export``.

Exit codes: 0 ok, 1 diagnostics at the deny threshold or an analysis error
(unknown path, goal or binding), 2 usage, read or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import analysis, dsl, export, validation
from .model import ModelError, QualityModel, stats

EXIT_OK, EXIT_FINDINGS, EXIT_INPUT = 0, 1, 2


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _InputError(f"{path}: cannot read: {exc}") from None


def _load_model(args: argparse.Namespace) -> QualityModel:
    text = _read(args.model)
    try:
        return dsl.parse(text, prelude=not args.no_prelude)
    except dsl.ModelSyntaxError as exc:
        raise _InputError("\n".join(f"{args.model}:{e}" for e in exc.errors)) from None


def _emit(args: argparse.Namespace, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise _InputError(f"{out}: cannot write: {exc}") from None
    else:
        sys.stdout.write(text)


def cmd_check(args: argparse.Namespace) -> int:
    model = _load_model(args)
    diags = validation.check(model)
    if args.format == "records":
        _emit(args, validation.render_records(diags))
    else:
        _emit(args, validation.render_text(diags))
    threshold = validation.Severity.parse(args.deny)
    return EXIT_FINDINGS if any(d.severity >= threshold for d in diags) else EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    model = _load_model(args)
    _emit(args, "".join(line + "\n" for line in stats(model).lines()))
    return EXIT_OK


def cmd_trace(args: argparse.Namespace) -> int:
    model = _load_model(args)
    entries = analysis.trace_fact(model, args.fact)
    _emit(args, "".join(e.render() + "\n" for e in entries))
    return EXIT_OK


def cmd_goal(args: argparse.Namespace) -> int:
    model = _load_model(args)
    _emit(args, analysis.goal_report(model, args.goal).render())
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    model = _load_model(args)
    try:
        assessment = dsl.parse_assessment(_read(args.assessment))
    except dsl.AssessmentSyntaxError as exc:
        raise _InputError("\n".join(f"{args.assessment}: line {n}: {msg}" for n, msg in exc.errors)) from None
    report = analysis.evaluate(model, assessment)
    _emit(args, report.render_records() if args.format == "records" else report.render_text())
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    model = _load_model(args)
    options = {"scope": args.scope, "assess_filter": args.assess_filter}
    try:
        text = export.run_generator(args.format, model, options)
    except export.UnknownGenerator as exc:
        raise _InputError(str(exc)) from None
    _emit(args, text)
    return EXIT_OK


def _levels(text: str) -> str:
    try:
        export.parse_levels(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid assessability filter {text!r} (use auto, semi, manual)")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmm", description="Work with two-dimensional quality models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="model file (.qmm)")
        p.add_argument("--no-prelude", action="store_true", help="do not load the standard attributes and goals")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.set_defaults(func=func)
        return p

    p = command("check", cmd_check, "report completeness diagnostics")
    p.add_argument("--deny", default="error", choices=["error", "warning", "info"],
                   help="exit 1 when a diagnostic is at least this severe (default: error)")
    p.add_argument("--format", default="text", choices=["text", "records"])

    command("stats", cmd_stats, "count model elements")

    p = command("trace", cmd_trace, "list impacts leaving a fact subtree")
    p.add_argument("fact", help="fact path or unique fact name")

    p = command("goal", cmd_goal, "list impacts that reach a goal")
    p.add_argument("goal", help="goal name, e.g. EFFICIENCY")

    p = command("eval", cmd_eval, "score activities and goals from an assessment")
    p.add_argument("assessment", help="assessment file (.qma)")
    p.add_argument("--format", default="text", choices=["text", "records"])

    p = command("export", cmd_export, "generate a document")
    p.add_argument("--format", default="guideline", help="generator name (default: guideline)")
    p.add_argument("--scope", help="restrict the guideline to this fact subtree")
    p.add_argument("--assess-filter", type=_levels, help="comma-separated assessability levels for the checklist")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    export.load_plugins()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except ModelError as exc:
        print(f"qmm: {exc}", file=sys.stderr)
        return EXIT_FINDINGS


if __name__ == "__main__":
    raise SystemExit(main())
