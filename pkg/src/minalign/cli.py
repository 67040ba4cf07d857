"""Command line front end.

Exit codes: 0 success, 1 validation or domain errors, 2 usage problems.
Reports go to stdout, diagnostics and error messages to stderr.  Human
output rounds ratios to 2 decimals; --json emits full-precision values.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import store
from .core import Meeting, PointTarget
from .errors import MinalignError, UnknownAnnotator
from .metrics import agreement_table, iaa as compute_iaa, pair_report
from .store import Diagnostic, load_meeting, save_meeting, validate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minalign",
        description="Manage, check, and measure meeting annotation corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_new = sub.add_parser("new", help="scaffold an empty meeting")
    p_new.add_argument("root", type=Path, help="corpus root directory")
    p_new.add_argument("--id", required=True, dest="meeting_id", help="meeting id")
    p_new.set_defaults(func=run_new)

    p_validate = sub.add_parser("validate", help="check meeting files")
    p_validate.add_argument("path", type=Path, help="meeting directory or corpus root")
    p_validate.add_argument("--json", action="store_true", dest="as_json")
    p_validate.set_defaults(func=run_validate)

    p_metrics = sub.add_parser("metrics", help="coverage and evaluation figures for one pair")
    p_metrics.add_argument("meeting", type=Path, help="meeting directory")
    p_metrics.add_argument("--transcript", required=True)
    p_metrics.add_argument("--summary", required=True)
    p_metrics.add_argument("--annotator", default=None)
    p_metrics.add_argument("--json", action="store_true", dest="as_json")
    p_metrics.set_defaults(func=run_metrics)

    p_iaa = sub.add_parser("iaa", help="strict agreement across annotator alignments")
    p_iaa.add_argument("meeting", type=Path, help="meeting directory")
    p_iaa.add_argument("--transcript", required=True)
    p_iaa.add_argument("--summary", required=True)
    p_iaa.add_argument(
        "--annotators", required=True, help="comma-separated annotator names (at least two)"
    )
    p_iaa.add_argument("--verbose", action="store_true")
    p_iaa.add_argument("--json", action="store_true", dest="as_json")
    p_iaa.set_defaults(func=run_iaa)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("root", type=Path, help="corpus root directory")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument(
        "--ui-dir", type=Path, default=None,
        help="directory holding the built web client, served at /ui",
    )
    p_serve.set_defaults(func=run_serve)

    return parser


def _usage_error(message: str) -> int:
    print(f"usage error: {message}", file=sys.stderr)
    return 2


def _fmt_ratio(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def _fmt_int(value: Optional[int]) -> str:
    return "n/a" if value is None else str(value)


def run_new(args: argparse.Namespace) -> int:
    meeting_dir = args.root / args.meeting_id
    if (meeting_dir / store.META_FILE).exists():
        print(f"error: meeting {args.meeting_id!r} already exists at {meeting_dir}", file=sys.stderr)
        return 1
    meeting = Meeting(args.meeting_id)
    meeting.add_transcript("default")
    meeting.add_summary("default")
    meeting.select_pair("default", "default")
    save_meeting(meeting, args.root)
    print(f"created {meeting_dir}")
    return 0


def _meeting_dirs(path: Path) -> Optional[list[Path]]:
    """The meeting directories under path: itself, or its children, or None."""
    if (path / store.META_FILE).is_file():
        return [path]
    if path.is_dir():
        return sorted(d for d in path.iterdir() if (d / store.META_FILE).is_file())
    return None


def _format_diag(diag: Diagnostic, prefix: str = "") -> str:
    loc = f"{prefix}{diag.file}" if diag.line is None else f"{prefix}{diag.file}:{diag.line}"
    return f"{diag.severity} {loc}: {diag.code}: {diag.message}"


def run_validate(args: argparse.Namespace) -> int:
    if not args.path.exists():
        return _usage_error(f"path {args.path} does not exist")
    dirs = _meeting_dirs(args.path)
    if dirs is None:
        return _usage_error(f"{args.path} is not a meeting directory or corpus root")
    single = len(dirs) == 1 and dirs[0] == args.path
    results = []
    errors = 0
    warnings = 0
    for directory in dirs:
        diags = validate(directory)
        errors += sum(1 for d in diags if d.severity == "error")
        warnings += sum(1 for d in diags if d.severity == "warning")
        results.append((directory, diags))
    if args.as_json:
        payload = {
            "meetings": [
                {
                    "directory": str(directory),
                    "diagnostics": [
                        {
                            "severity": d.severity,
                            "code": d.code,
                            "file": d.file,
                            "line": d.line,
                            "message": d.message,
                        }
                        for d in diags
                    ],
                }
                for directory, diags in results
            ],
            "errors": errors,
            "warnings": warnings,
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for directory, diags in results:
            prefix = "" if single else f"{directory.name}/"
            for diag in diags:
                print(_format_diag(diag, prefix), file=sys.stderr)
        print(
            f"checked {len(results)} meeting(s): {errors} error(s), {warnings} warning(s)"
        )
    return 1 if errors else 0


def run_metrics(args: argparse.Namespace) -> int:
    if not args.meeting.is_dir():
        return _usage_error(f"meeting directory {args.meeting} does not exist")
    meeting = load_meeting(args.meeting)
    annotators = [args.annotator] if args.annotator else []
    report = pair_report(
        meeting, args.transcript, args.summary, annotators=annotators, include_iaa=False
    )
    if args.as_json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
        return 0
    print(f"meeting: {report['meeting']}")
    print(f"pair: {report['transcript_version']} / {report['summary_version']}")
    cov = report["coverage"]
    print(f"summary_coverage: {cov['summary_coverage']:.2f}")
    print(f"annotated_coverage: {cov['annotated_coverage']:.2f}")
    print(f"total_das: {cov['total_das']}")
    print(f"das_to_points: {cov['das_to_points']}")
    print(f"das_to_meta: {cov['das_to_meta']}")
    for name, section in report["annotators"].items():
        print(f"annotator: {name}")
        own = section["coverage"]
        if own is not None:
            print(f"  summary_coverage: {own['summary_coverage']:.2f}")
            print(f"  annotated_coverage: {own['annotated_coverage']:.2f}")
        scores = section["scores"]
        print(f"  avg_adequacy: {_fmt_ratio(scores['avg_adequacy'])}")
        print(f"  avg_grammaticality: {_fmt_ratio(scores['avg_grammaticality'])}")
        print(f"  avg_fluency: {_fmt_ratio(scores['avg_fluency'])}")
        print(f"  doc_adequacy: {_fmt_int(scores['doc_adequacy'])}")
        print(f"  completeness: {section['completeness']:.2f}")
    return 0


def run_iaa(args: argparse.Namespace) -> int:
    if not args.meeting.is_dir():
        return _usage_error(f"meeting directory {args.meeting} does not exist")
    names = [n for n in args.annotators.split(",") if n]
    meeting = load_meeting(args.meeting)
    tv = meeting.transcript(args.transcript)
    sv = meeting.summary(args.summary)
    alignments = []
    for name in names:
        own = meeting.alignment_for(args.transcript, args.summary, name)
        if own is None:
            raise UnknownAnnotator(
                f"no alignment stored for annotator {name!r} over "
                f"{args.transcript!r}/{args.summary!r}"
            )
        alignments.append(own)
    value = compute_iaa(alignments, tv)
    point_index = {p.id: i for i, p in enumerate(sv.points)}

    def describe(target) -> str:
        if target is None:
            return "-"
        if isinstance(target, PointTarget):
            return f"P{point_index[target.point_id]}"
        return f"M:{target.label.value}"

    if args.as_json:
        payload: dict = {"annotators": names, "iaa": value}
        if args.verbose:
            payload["per_da"] = [
                {
                    "da": da_id,
                    "targets": {name: describe(t) for name, t in zip(names, targets)},
                    "agree": agree,
                }
                for da_id, targets, agree in agreement_table(alignments, tv)
            ]
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return 0
    print(f"annotators: {', '.join(names)}")
    print(f"iaa: {value:.2f}")
    if args.verbose:
        for position, (da_id, targets, agree) in enumerate(agreement_table(alignments, tv)):
            marks = " ".join(
                f"{name}={describe(t)}" for name, t in zip(names, targets)
            )
            verdict = "agree" if agree else "disagree"
            print(f"da {position} [{da_id}]: {marks} {verdict}")
    return 0


def run_serve(args: argparse.Namespace) -> int:
    if not args.root.is_dir():
        return _usage_error(f"corpus root {args.root} does not exist")
    if args.ui_dir is not None and not args.ui_dir.is_dir():
        return _usage_error(f"ui directory {args.ui_dir} does not exist")
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(args.root, ui_dir=args.ui_dir), host=args.host, port=args.port)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except MinalignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
