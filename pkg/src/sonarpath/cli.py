"""Command-line interface: run, validate, export-dot.

Exit codes: 0 success, 1 errors (parse, validation, unknown scenario),
3 run stopped early (stop condition or interrupt) with a partial report
still written. Set SONAR_PATH_NO_COLOR to disable ANSI colors.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import threading

from . import dot, io, report as report_mod
from .scenario import run_scenario
from .validate import validate_network

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_STOPPED = 3


def _color_enabled() -> bool:
    if os.environ.get("SONAR_PATH_NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    if not _color_enabled():
        return text
    return f"\033[{code}m{text}\033[0m"


def _error(message: str) -> None:
    print(_paint(f"error: {message}", "31"), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonarpath",
        description="Rule-fact network modeling and exhaustive attack-path enumeration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write a report")
    run.add_argument("--model", required=True, help="model document (JSON)")
    run.add_argument("--scenario", required=True, help="scenario name from the document")
    run.add_argument("--rule-cap", type=int, help="override the generic rule cap (1-100)")
    run.add_argument("--max-paths", type=int, help="stop after this many final paths")
    run.add_argument("--max-seconds", type=float, help="stop after this many seconds")
    run.add_argument(
        "--allow-actions",
        action="store_true",
        help="execute enabled actions instead of recording dry runs",
    )
    run.add_argument("--out", help="write the JSON report here")
    run.add_argument("--csv", help="write a one-row CSV summary here")

    validate = sub.add_parser("validate", help="validate a model document")
    validate.add_argument("--model", required=True)

    export = sub.add_parser("export-dot", help="export a model or report as DOT")
    export.add_argument("--model", help="model document to draw")
    export.add_argument("--report", help="run report to draw")
    export.add_argument("--path", type=int, help="single path index when drawing a report")

    return parser


def _load_document(path: str):
    try:
        return io.load(path)
    except FileNotFoundError:
        _error(f"no such file: {path}")
    except io.ModelFormatError as exc:
        _error(str(exc))
    return None


def _cmd_run(args) -> int:
    document = _load_document(args.model)
    if document is None:
        return EXIT_ERROR
    validation = validate_network(document.network, document.scenarios.values())
    if not validation.ok:
        for finding in validation.errors:
            _error(str(finding))
        return EXIT_ERROR
    scenario = document.scenarios.get(args.scenario)
    if scenario is None:
        known = ", ".join(sorted(document.scenarios)) or "none"
        _error(f"unknown scenario {args.scenario!r} (known: {known})")
        return EXIT_ERROR

    stop_event = threading.Event()
    previous = signal.signal(signal.SIGINT, lambda signum, frame: stop_event.set())
    try:
        run = run_scenario(
            document.network,
            scenario,
            stop_event=stop_event,
            allow_actions=args.allow_actions,
            rule_cap=args.rule_cap,
            max_paths=args.max_paths,
            max_seconds=args.max_seconds,
        )
    finally:
        signal.signal(signal.SIGINT, previous)

    tree = report_mod.build_report(scenario, run.config, run.result, run.metrics)
    if args.out:
        report_mod.dump_report(tree, args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(report_mod.render_csv([report_mod.summary_row(scenario, run.metrics)]))
    for line in report_mod.summary_lines(scenario, run.metrics, run.result.partial):
        print(line)
    if run.result.partial:
        print(_paint("run stopped early; report is partial", "33"))
        return EXIT_STOPPED
    return EXIT_OK


def _cmd_validate(args) -> int:
    document = _load_document(args.model)
    if document is None:
        return EXIT_ERROR
    validation = validate_network(document.network, document.scenarios.values())
    for finding in validation.findings:
        stream = sys.stderr if finding.severity == "error" else sys.stdout
        color = "31" if finding.severity == "error" else "33"
        print(_paint(str(finding), color), file=stream)
    if validation.ok:
        print(_paint("model is valid", "32"))
        return EXIT_OK
    return EXIT_ERROR


def _cmd_export_dot(args) -> int:
    if (args.model is None) == (args.report is None):
        _error("export-dot needs exactly one of --model or --report")
        return EXIT_ERROR
    if args.model:
        document = _load_document(args.model)
        if document is None:
            return EXIT_ERROR
        sys.stdout.write(dot.network_to_dot(document.network, title=document.name or "network"))
        return EXIT_OK
    try:
        with open(args.report, encoding="utf-8") as handle:
            tree = json.load(handle)
    except FileNotFoundError:
        _error(f"no such file: {args.report}")
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        _error(f"report is not valid JSON: {exc}")
        return EXIT_ERROR
    try:
        sys.stdout.write(dot.report_to_dot(tree, path_index=args.path))
    except IndexError as exc:
        _error(str(exc))
        return EXIT_ERROR
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "validate": _cmd_validate,
        "export-dot": _cmd_export_dot,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
