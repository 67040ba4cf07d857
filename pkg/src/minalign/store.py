"""Plain-file persistence for meetings.

One meeting is one directory:

    <root>/<meeting_id>/
        meeting.meta                      key=value lines: id, media?, indent_symbol
        transcripts/<name>.tsv            speaker <TAB> start <TAB> end <TAB> text
        summaries/<name>.txt              one point per line, indent-symbol prefix
        alignments/<t>__<s>.tsv           da_index <TAB> P<point_index> | M:<label>
        alignments/<t>__<s>__<ann>.tsv    an annotator's own alignment copy
        evaluations/<t>__<s>__<ann>.tsv   point_index <TAB> a <TAB> g <TAB> f, then DOC <TAB> a

Everything is UTF-8 with LF line endings and no BOM.  Tabs, newlines, and
backslashes inside field values travel as \\t, \\n, and \\\\.  Files store
0-based positional indices; stable ids exist only in memory and are
reassigned on load.  save_meeting always produces the same bytes for the
same state, so saved trees can be diffed and re-saved byte-identically.
"""

from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .core import (
    Alignment,
    DialogueAct,
    EvaluationRecord,
    Meeting,
    MetaLabel,
    MetaTarget,
    PointScores,
    PointTarget,
    SummaryPoint,
    SummaryVersion,
    TranscriptVersion,
    is_valid_name,
)
from .errors import (
    DanglingReference,
    EmptyDaText,
    InvalidField,
    IoFailure,
    MissingFile,
    ParseError,
)

META_FILE = "meeting.meta"
TRANSCRIPTS_DIR = "transcripts"
SUMMARIES_DIR = "summaries"
ALIGNMENTS_DIR = "alignments"
EVALUATIONS_DIR = "evaluations"

_TIME_RE = re.compile(r"(0|[1-9][0-9]*)(\.[0-9]{1,3})?\Z")


class EscapeSyntaxError(ValueError):
    """Bad escape sequence; offset is the index of the backslash."""

    def __init__(self, offset: int, reason: str):
        self.offset = offset
        self.reason = reason
        super().__init__(reason)


def escape(value: str) -> str:
    """Make a field value safe for one TSV cell.  Backslash first, always."""
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape(value: str) -> str:
    """Exact inverse of escape; rejects any sequence escape cannot produce."""
    out: list[str] = []
    i = 0
    while True:
        j = value.find("\\", i)
        if j < 0:
            out.append(value[i:])
            return "".join(out)
        out.append(value[i:j])
        if j + 1 >= len(value):
            raise EscapeSyntaxError(j, "dangling backslash at end of field")
        nxt = value[j + 1]
        if nxt == "t":
            out.append("\t")
        elif nxt == "n":
            out.append("\n")
        elif nxt == "\\":
            out.append("\\")
        else:
            raise EscapeSyntaxError(j, f"unknown escape sequence '\\{nxt}'")
        i = j + 2


def format_time(value: float) -> str:
    """Seconds as a decimal with at most 3 fractional digits, no trailing zeros."""
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return text or "0"


def parse_time(text: str) -> float:
    if not _TIME_RE.fullmatch(text):
        raise ValueError(
            f"bad timestamp {text!r}: expected a non-negative decimal with at most 3 fractional digits"
        )
    return float(text)


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, pointing at a file and (when known) a line."""

    severity: str  # "error" or "warning"
    code: str
    file: str
    line: Optional[int]
    message: str

    def format(self) -> str:
        loc = self.file if self.line is None else f"{self.file}:{self.line}"
        return f"{self.severity} {loc}: {self.code}: {self.message}"


# --- writing ---


def _meta_line(key: str, value: str) -> str:
    return f"{key}={escape(value)}\n"


def _summary_line(point_text: str, indent: int, symbol: str) -> str:
    # The single separator space keeps texts that start with the symbol or a
    # space from being swallowed into the prefix when read back.
    prefix = symbol * indent
    if indent > 0 or point_text.startswith(symbol) or point_text.startswith(" "):
        return prefix + " " + point_text + "\n"
    return point_text + "\n"


def _parse_summary_line(line: str, symbol: str) -> tuple[int, str]:
    indent = 0
    rest = line
    while rest.startswith(symbol):
        indent += 1
        rest = rest[len(symbol):]
    if rest.startswith(" "):
        rest = rest[1:]
    return indent, rest


def _cell(value: Optional[int]) -> str:
    return "" if value is None else str(value)


def _transcript_rows(tv: TranscriptVersion, file: str) -> str:
    rows = []
    for i, da in enumerate(tv.das):
        if da.text == "":
            raise EmptyDaText(f"{file} row {i + 1}: dialogue act text is empty")
        start = "" if da.start is None else format_time(da.start)
        end = "" if da.end is None else format_time(da.end)
        rows.append(f"{escape(da.speaker)}\t{start}\t{end}\t{escape(da.text)}\n")
    return "".join(rows)


def _summary_rows(sv: SummaryVersion) -> str:
    return "".join(_summary_line(p.text, p.indent, sv.indent_symbol) for p in sv.points)


def _alignment_rows(alignment: Alignment, meeting: Meeting, file: str) -> str:
    tv = meeting.transcript(alignment.transcript_version)
    sv = meeting.summary(alignment.summary_version)
    da_index = {da.id: i for i, da in enumerate(tv.das)}
    point_index = {p.id: i for i, p in enumerate(sv.points)}
    rows = []
    for da_id, target in alignment.targets.items():
        if da_id not in da_index:
            raise DanglingReference(
                f"{file}: aligned act {da_id!r} is not in the transcript version"
            )
        if isinstance(target, PointTarget):
            if target.point_id not in point_index:
                raise DanglingReference(
                    f"{file}: alignment target {target.point_id!r} is not in the summary version"
                )
            text = f"P{point_index[target.point_id]}"
        else:
            text = f"M:{target.label.value}"
        rows.append((da_index[da_id], text))
    rows.sort()
    return "".join(f"{index}\t{text}\n" for index, text in rows)


def _evaluation_rows(record: EvaluationRecord, meeting: Meeting, file: str) -> str:
    sv = meeting.summary(record.summary_version)
    point_index = {p.id: i for i, p in enumerate(sv.points)}
    rows = []
    for point_id, scores in record.per_point.items():
        if scores.is_empty():
            continue
        if point_id not in point_index:
            raise DanglingReference(
                f"{file}: scored point {point_id!r} is not in the summary version"
            )
        index = point_index[point_id]
        rows.append(
            (
                index,
                f"{index}\t{_cell(scores.adequacy)}\t{_cell(scores.grammaticality)}"
                f"\t{_cell(scores.fluency)}\n",
            )
        )
    rows.sort()
    body = "".join(text for _, text in rows)
    if record.doc_adequacy is not None:
        body += f"DOC\t{record.doc_adequacy}\n"
    return body


def _pair_stem(tver: str, sver: str, annotator: Optional[str] = None) -> str:
    stem = f"{tver}__{sver}"
    if annotator is not None:
        stem += f"__{annotator}"
    return stem


def render_meeting(meeting: Meeting) -> dict[str, str]:
    """All files of the canonical tree, path (relative to the meeting dir) -> content."""
    for sv in meeting.summaries.values():
        if sv.indent_symbol != meeting.indent_symbol:
            raise InvalidField(
                f"summary version {sv.name!r} uses indent symbol {sv.indent_symbol!r} "
                f"but the meeting uses {meeting.indent_symbol!r}; one symbol per meeting"
            )
    files: dict[str, str] = {}
    meta = _meta_line("id", meeting.id)
    if meeting.media is not None:
        meta += _meta_line("media", meeting.media)
    meta += _meta_line("indent_symbol", meeting.indent_symbol)
    files[META_FILE] = meta
    for name, tv in meeting.transcripts.items():
        rel = f"{TRANSCRIPTS_DIR}/{name}.tsv"
        files[rel] = _transcript_rows(tv, rel)
    for name, sv in meeting.summaries.items():
        files[f"{SUMMARIES_DIR}/{name}.txt"] = _summary_rows(sv)
    for (tver, sver, annotator), alignment in meeting.alignments.items():
        rel = f"{ALIGNMENTS_DIR}/{_pair_stem(tver, sver, annotator)}.tsv"
        files[rel] = _alignment_rows(alignment, meeting, rel)
    for (tver, sver, annotator), record in meeting.evaluations.items():
        rel = f"{EVALUATIONS_DIR}/{_pair_stem(tver, sver, annotator)}.tsv"
        files[rel] = _evaluation_rows(record, meeting, rel)
    return files


def _write_atomic(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_meeting(meeting: Meeting, root: Path) -> Path:
    """Write the canonical tree for the meeting under root/<id>.

    Every managed file is replaced atomically; stale version, alignment, or
    evaluation files from earlier states are removed.  Unmanaged files (media,
    notes) are left alone.
    """
    files = render_meeting(meeting)
    meeting_dir = Path(root) / meeting.id
    managed_dirs = (TRANSCRIPTS_DIR, SUMMARIES_DIR, ALIGNMENTS_DIR, EVALUATIONS_DIR)
    try:
        meeting_dir.mkdir(parents=True, exist_ok=True)
        for sub in managed_dirs:
            (meeting_dir / sub).mkdir(exist_ok=True)
        for rel, content in files.items():
            _write_atomic(meeting_dir / rel, content.encode("utf-8"))
        for sub in managed_dirs:
            for child in (meeting_dir / sub).iterdir():
                rel = f"{sub}/{child.name}"
                if child.suffix in (".tsv", ".txt") and rel not in files:
                    child.unlink()
    except OSError as exc:
        raise IoFailure(f"saving meeting {meeting.id!r} failed: {exc}") from exc
    return meeting_dir


# --- reading ---
#
# load_meeting and validate share one scanner.  In strict mode the first
# problem raises; in lenient mode every problem becomes a diagnostic and the
# scanner carries on with whatever it can still make sense of.


class _Scanner:
    def __init__(self, meeting_dir: Path, strict: bool):
        self.dir = Path(meeting_dir)
        self.strict = strict
        self.diagnostics: list[Diagnostic] = []
        self.meeting: Optional[Meeting] = None

    def error(
        self,
        code: str,
        file: str,
        line: Optional[int],
        message: str,
        exc: Optional[Exception] = None,
    ) -> None:
        if self.strict:
            raise exc if exc is not None else ParseError(file, line, None, message)
        self.diagnostics.append(Diagnostic("error", code, file, line, message))

    def warn(self, code: str, file: str, line: Optional[int], message: str) -> None:
        if not self.strict:
            self.diagnostics.append(Diagnostic("warning", code, file, line, message))

    def _read_lines(self, rel: str) -> Optional[list[str]]:
        path = self.dir / rel
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            self.error("MissingFile", rel, None, "file is missing", MissingFile(str(path)))
            return None
        except OSError as exc:
            self.error("IoFailure", rel, None, str(exc), IoFailure(str(exc)))
            return None
        if data.startswith(b"\xef\xbb\xbf"):
            self.error("ParseError", rel, 1, "byte order mark is not allowed")
            data = data[3:]
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            self.error("ParseError", rel, None, f"not valid UTF-8: {exc}")
            return None
        if "\r" in text:
            self.error("ParseError", rel, None, "carriage returns are not allowed; use LF endings")
            return None
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return lines

    def _unescape_field(self, raw: str, rel: str, lineno: int, col_start: int) -> Optional[str]:
        try:
            return unescape(raw)
        except EscapeSyntaxError as exc:
            self.error(
                "ParseError",
                rel,
                lineno,
                exc.reason,
                ParseError(rel, lineno, col_start + exc.offset, exc.reason),
            )
            return None

    def _list_files(self, sub: str, suffix: str) -> list[str]:
        directory = self.dir / sub
        if not directory.is_dir():
            return []
        try:
            return sorted(p.name for p in directory.iterdir() if p.suffix == suffix)
        except OSError as exc:
            self.error("IoFailure", sub, None, str(exc), IoFailure(str(exc)))
            return []

    # -- meeting.meta --

    def scan_meta(self) -> bool:
        lines = self._read_lines(META_FILE)
        if lines is None:
            return False
        values: dict[str, str] = {}
        value_lines: dict[str, int] = {}
        for lineno, line in enumerate(lines, start=1):
            if line == "":
                continue
            key, sep, raw = line.partition("=")
            if not sep:
                self.error("ParseError", META_FILE, lineno, "expected key=value")
                continue
            if key not in ("id", "media", "indent_symbol"):
                self.error("ParseError", META_FILE, lineno, f"unknown key {key!r}")
                continue
            if key in values:
                self.error("ParseError", META_FILE, lineno, f"duplicate key {key!r}")
                continue
            value = self._unescape_field(raw, META_FILE, lineno, len(key) + 2)
            if value is None:
                continue
            values[key] = value
            value_lines[key] = lineno
        if "id" not in values:
            self.error("ParseError", META_FILE, None, "missing required key 'id'")
            return False
        meeting_id = values["id"]
        if not is_valid_name(meeting_id):
            self.error(
                "InvalidName",
                META_FILE,
                value_lines.get("id"),
                f"meeting id {meeting_id!r} must match [A-Za-z0-9._-]+ without '__'",
            )
            return False
        if meeting_id != self.dir.name:
            self.warn(
                "NameMismatch",
                META_FILE,
                value_lines.get("id"),
                f"meeting id {meeting_id!r} differs from directory name {self.dir.name!r}",
            )
        symbol = values.get("indent_symbol", "-")
        if not symbol or any(c.isspace() for c in symbol):
            self.error(
                "ParseError",
                META_FILE,
                value_lines.get("indent_symbol"),
                f"indent symbol {symbol!r} must be non-empty without whitespace",
            )
            symbol = "-"
        self.meeting = Meeting(meeting_id, indent_symbol=symbol)
        media = values.get("media")
        if media is not None:
            if os.path.isabs(media) or ".." in Path(media).parts:
                self.error(
                    "ParseError",
                    META_FILE,
                    value_lines.get("media"),
                    f"media path {media!r} must be relative and stay inside the meeting directory",
                )
            else:
                self.meeting.media = media
                if not (self.dir / media).is_file():
                    self.warn(
                        "MissingMedia",
                        META_FILE,
                        value_lines.get("media"),
                        f"media file {media!r} not found",
                    )
        return True

    # -- transcripts --

    def scan_transcripts(self) -> None:
        assert self.meeting is not None
        for filename in self._list_files(TRANSCRIPTS_DIR, ".tsv"):
            rel = f"{TRANSCRIPTS_DIR}/{filename}"
            name = filename[: -len(".tsv")]
            if not is_valid_name(name):
                self.error(
                    "InvalidName", rel, None,
                    f"transcript version name {name!r} must match [A-Za-z0-9._-]+ without '__'",
                )
                continue
            lines = self._read_lines(rel)
            if lines is None:
                continue
            tv = self.meeting.add_transcript(name)
            previous_start: Optional[float] = None
            for lineno, line in enumerate(lines, start=1):
                fields = line.split("\t")
                if len(fields) != 4:
                    self.error(
                        "ParseError", rel, lineno,
                        f"expected 4 tab-separated fields, got {len(fields)}",
                    )
                    continue
                speaker = self._unescape_field(fields[0], rel, lineno, 1)
                if speaker is None:
                    continue
                if speaker == "" or "\n" in speaker:
                    self.error(
                        "ParseError", rel, lineno,
                        "speaker must be non-empty and contain no newline",
                    )
                    continue
                times: list[Optional[float]] = []
                bad_time = False
                for k in (1, 2):
                    raw = fields[k]
                    if raw == "":
                        times.append(None)
                        continue
                    try:
                        times.append(parse_time(raw))
                    except ValueError as exc:
                        col = sum(len(f) + 1 for f in fields[:k]) + 1
                        self.error(
                            "ParseError", rel, lineno, str(exc),
                            ParseError(rel, lineno, col, str(exc)),
                        )
                        bad_time = True
                        break
                if bad_time:
                    continue
                start, end = times
                if start is not None and end is not None and start > end:
                    self.error("InvalidTimes", rel, lineno, f"start {start} is after end {end}")
                    continue
                text_col = sum(len(f) + 1 for f in fields[:3]) + 1
                text = self._unescape_field(fields[3], rel, lineno, text_col)
                if text is None:
                    continue
                if text == "":
                    self.error("EmptyDaText", rel, lineno, "dialogue act text is empty")
                    continue
                tv.das.append(
                    DialogueAct(id=tv.fresh_id(), speaker=speaker, text=text, start=start, end=end)
                )
                if start is not None:
                    if previous_start is not None and start < previous_start:
                        self.warn(
                            "NonMonotonicTimestamps", rel, lineno,
                            f"start {format_time(start)} is earlier than a previous start",
                        )
                    previous_start = start

    # -- summaries --

    def scan_summaries(self) -> None:
        assert self.meeting is not None
        symbol = self.meeting.indent_symbol
        for filename in self._list_files(SUMMARIES_DIR, ".txt"):
            rel = f"{SUMMARIES_DIR}/{filename}"
            name = filename[: -len(".txt")]
            if not is_valid_name(name):
                self.error(
                    "InvalidName", rel, None,
                    f"summary version name {name!r} must match [A-Za-z0-9._-]+ without '__'",
                )
                continue
            lines = self._read_lines(rel)
            if lines is None:
                continue
            sv = self.meeting.add_summary(name)
            for line in lines:
                indent, text = _parse_summary_line(line, symbol)
                sv.points.append(SummaryPoint(id=sv.fresh_id(), text=text, indent=indent))

    # -- alignments and evaluations --

    def _resolve_pair(
        self, rel: str, tver: str, sver: str
    ) -> Optional[tuple[TranscriptVersion, SummaryVersion]]:
        assert self.meeting is not None
        if tver not in self.meeting.transcripts:
            self.error(
                "DanglingReference", rel, None,
                f"unknown transcript version {tver!r}",
                DanglingReference(f"{rel}: unknown transcript version {tver!r}"),
            )
            return None
        if sver not in self.meeting.summaries:
            self.error(
                "DanglingReference", rel, None,
                f"unknown summary version {sver!r}",
                DanglingReference(f"{rel}: unknown summary version {sver!r}"),
            )
            return None
        return self.meeting.transcripts[tver], self.meeting.summaries[sver]

    def scan_alignments(self) -> None:
        assert self.meeting is not None
        for filename in self._list_files(ALIGNMENTS_DIR, ".tsv"):
            rel = f"{ALIGNMENTS_DIR}/{filename}"
            parts = filename[: -len(".tsv")].split("__")
            if len(parts) not in (2, 3) or not all(is_valid_name(p) for p in parts):
                self.error(
                    "ParseError", rel, None,
                    "file name must be <transcript>__<summary>[__<annotator>].tsv",
                )
                continue
            resolved = self._resolve_pair(rel, parts[0], parts[1])
            if resolved is None:
                continue
            tv, sv = resolved
            annotator = parts[2] if len(parts) == 3 else None
            lines = self._read_lines(rel)
            if lines is None:
                continue
            targets: dict[str, object] = {}
            seen: dict[int, int] = {}
            for lineno, line in enumerate(lines, start=1):
                fields = line.split("\t")
                if len(fields) != 2:
                    self.error(
                        "ParseError", rel, lineno,
                        f"expected 2 tab-separated fields, got {len(fields)}",
                    )
                    continue
                raw_index, raw_target = fields
                if not raw_index.isdigit():
                    self.error("ParseError", rel, lineno, f"bad act index {raw_index!r}")
                    continue
                index = int(raw_index)
                if index >= len(tv.das):
                    self.error(
                        "DanglingReference", rel, lineno,
                        f"act index {index} outside the transcript version",
                        DanglingReference(
                            f"{rel}:{lineno}: act index {index} outside the transcript version"
                        ),
                    )
                    continue
                if index in seen:
                    self.error(
                        "DuplicateAlignment", rel, lineno,
                        f"act index {index} already aligned on line {seen[index]}",
                    )
                    continue
                target = self._parse_target(raw_target, rel, lineno, sv)
                if target is None:
                    continue
                seen[index] = lineno
                targets[tv.das[index].id] = target
            self.meeting.put_alignment(
                Alignment(
                    transcript_version=tv.name,
                    summary_version=sv.name,
                    targets=targets,  # type: ignore[arg-type]
                    annotator=annotator,
                )
            )

    def _parse_target(
        self, raw: str, rel: str, lineno: int, sv: SummaryVersion
    ) -> Optional[object]:
        if raw.startswith("P"):
            suffix = raw[1:]
            if not suffix.isdigit():
                self.error("ParseError", rel, lineno, f"bad point target {raw!r}")
                return None
            index = int(suffix)
            if index >= len(sv.points):
                self.error(
                    "DanglingReference", rel, lineno,
                    f"point index {index} outside the summary version",
                    DanglingReference(
                        f"{rel}:{lineno}: point index {index} outside the summary version"
                    ),
                )
                return None
            return PointTarget(sv.points[index].id)
        if raw.startswith("M:"):
            label = raw[2:]
            try:
                return MetaTarget(MetaLabel(label))
            except ValueError:
                allowed = ", ".join(m.value for m in MetaLabel)
                self.error(
                    "ParseError", rel, lineno,
                    f"unknown meta label {label!r}; expected one of: {allowed}",
                )
                return None
        self.error("ParseError", rel, lineno, f"bad alignment target {raw!r}")
        return None

    def scan_evaluations(self) -> None:
        assert self.meeting is not None
        for filename in self._list_files(EVALUATIONS_DIR, ".tsv"):
            rel = f"{EVALUATIONS_DIR}/{filename}"
            parts = filename[: -len(".tsv")].split("__")
            if len(parts) != 3 or not all(is_valid_name(p) for p in parts):
                self.error(
                    "ParseError", rel, None,
                    "file name must be <transcript>__<summary>__<annotator>.tsv",
                )
                continue
            resolved = self._resolve_pair(rel, parts[0], parts[1])
            if resolved is None:
                continue
            tv, sv = resolved
            annotator = parts[2]
            lines = self._read_lines(rel)
            if lines is None:
                continue
            per_point: dict[str, PointScores] = {}
            doc_adequacy: Optional[int] = None
            doc_line: Optional[int] = None
            seen: dict[int, int] = {}
            for lineno, line in enumerate(lines, start=1):
                fields = line.split("\t")
                if fields[0] == "DOC":
                    if len(fields) != 2:
                        self.error(
                            "ParseError", rel, lineno,
                            f"DOC row needs exactly 2 fields, got {len(fields)}",
                        )
                        continue
                    if doc_line is not None:
                        self.error(
                            "ParseError", rel, lineno,
                            f"duplicate DOC row (first on line {doc_line})",
                        )
                        continue
                    value = self._parse_score(fields[1], rel, lineno)
                    if value is None:
                        continue
                    doc_adequacy = value
                    doc_line = lineno
                    continue
                if len(fields) != 4:
                    self.error(
                        "ParseError", rel, lineno,
                        f"expected 4 tab-separated fields, got {len(fields)}",
                    )
                    continue
                if not fields[0].isdigit():
                    self.error("ParseError", rel, lineno, f"bad point index {fields[0]!r}")
                    continue
                index = int(fields[0])
                if index >= len(sv.points):
                    self.error(
                        "DanglingReference", rel, lineno,
                        f"point index {index} outside the summary version",
                        DanglingReference(
                            f"{rel}:{lineno}: point index {index} outside the summary version"
                        ),
                    )
                    continue
                if index in seen:
                    self.error(
                        "ParseError", rel, lineno,
                        f"point index {index} already scored on line {seen[index]}",
                    )
                    continue
                scores: list[Optional[int]] = []
                bad = False
                for k in (1, 2, 3):
                    if fields[k] == "":
                        scores.append(None)
                        continue
                    value = self._parse_score(fields[k], rel, lineno)
                    if value is None:
                        bad = True
                        break
                    scores.append(value)
                if bad:
                    continue
                if all(s is None for s in scores):
                    self.error("ParseError", rel, lineno, "score row carries no scores")
                    continue
                seen[index] = lineno
                per_point[sv.points[index].id] = PointScores(*scores)
            if per_point or doc_adequacy is not None:
                self.meeting.put_evaluation(
                    EvaluationRecord(
                        annotator=annotator,
                        transcript_version=tv.name,
                        summary_version=sv.name,
                        per_point=per_point,
                        doc_adequacy=doc_adequacy,
                    )
                )

    def _parse_score(self, raw: str, rel: str, lineno: int) -> Optional[int]:
        if not raw.isdigit() or not 1 <= int(raw) <= 5:
            self.error(
                "ScoreOutOfRange", rel, lineno,
                f"score {raw!r} must be an integer in 1..5",
                ParseError(rel, lineno, None, f"score {raw!r} must be an integer in 1..5"),
            )
            return None
        return int(raw)

    def run(self) -> None:
        if not self.scan_meta():
            return
        self.scan_transcripts()
        self.scan_summaries()
        self.scan_alignments()
        self.scan_evaluations()
        if self.meeting is not None:
            self.meeting.revision = 0


def load_meeting(meeting_dir: Path) -> Meeting:
    """Read one meeting directory; raises on the first problem found.

    Acts and points get fresh stable ids in file order.  The revision starts
    at 0: it counts runtime mutations, not history.
    """
    scanner = _Scanner(Path(meeting_dir), strict=True)
    scanner.run()
    if scanner.meeting is None:  # scan_meta raises in strict mode before this
        raise MissingFile(str(Path(meeting_dir) / META_FILE))
    return scanner.meeting


def validate(meeting_dir: Path) -> list[Diagnostic]:
    """Check one meeting directory and report every problem found.

    Never raises on content: malformed rows, dangling indices, duplicate
    alignments, and score-range problems come back as error diagnostics,
    suspect-but-legal states as warnings.
    """
    scanner = _Scanner(Path(meeting_dir), strict=False)
    scanner.run()
    return scanner.diagnostics
