"""HTTP service over a corpus directory.

Meetings load lazily and live in memory; every successful mutation is written
back to disk before the response goes out.  Writes take a per-meeting lock
and are guarded by an optimistic revision check: a request carrying a stale
expected_revision gets 409 with the current revision and changes nothing.
A request either applies all its ops or none of them.
"""

from __future__ import annotations

import mimetypes
import threading
from copy import deepcopy
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import store
from .core import (
    Alignment,
    DialogueAct,
    EvaluationRecord,
    Meeting,
    MetaLabel,
    MetaTarget,
    PointTarget,
    SummaryPoint,
    SummaryVersion,
    TranscriptVersion,
    search,
)
from .errors import (
    Conflict,
    IoFailure,
    MinalignError,
    MissingFile,
    NoMedia,
    NotFound,
    RangeNotSatisfiable,
    TooFewAnnotators,
    UnknownAnnotator,
    UnknownVersion,
)
from .metrics import pair_report


class MutationRejected(MinalignError):
    """One op in a mutation request failed; nothing was applied."""

    def __init__(self, op_index: int, kind: str, reason: str):
        self.op_index = op_index
        self.kind = kind
        self.reason = reason
        super().__init__(f"op {op_index} rejected ({kind}): {reason}")


_STATUS_CODES: dict[type, int] = {
    NotFound: 404,
    UnknownVersion: 404,
    UnknownAnnotator: 404,
    NoMedia: 404,
    MissingFile: 404,
    Conflict: 409,
    RangeNotSatisfiable: 416,
    IoFailure: 500,
}


# --- JSON shapes ---


def _da_json(da: DialogueAct) -> dict:
    return {"id": da.id, "speaker": da.speaker, "text": da.text, "start": da.start, "end": da.end}


def _transcript_json(tv: TranscriptVersion) -> dict:
    return {"name": tv.name, "das": [_da_json(da) for da in tv.das]}


def _point_json(point: SummaryPoint) -> dict:
    return {"id": point.id, "text": point.text, "indent": point.indent}


def _summary_json(sv: SummaryVersion) -> dict:
    return {
        "name": sv.name,
        "indent_symbol": sv.indent_symbol,
        "points": [_point_json(p) for p in sv.points],
    }


def _target_json(target) -> dict:
    if isinstance(target, PointTarget):
        return {"point": target.point_id}
    return {"meta": target.label.value}


def _alignment_json(alignment: Alignment) -> dict:
    return {
        "transcript_version": alignment.transcript_version,
        "summary_version": alignment.summary_version,
        "annotator": alignment.annotator,
        "targets": {da_id: _target_json(t) for da_id, t in alignment.targets.items()},
    }


def _evaluation_json(record: EvaluationRecord) -> dict:
    return {
        "annotator": record.annotator,
        "transcript_version": record.transcript_version,
        "summary_version": record.summary_version,
        "per_point": {
            point_id: {
                "adequacy": s.adequacy,
                "grammaticality": s.grammaticality,
                "fluency": s.fluency,
            }
            for point_id, s in record.per_point.items()
        },
        "doc_adequacy": record.doc_adequacy,
    }


def _meeting_json(meeting: Meeting) -> dict:
    return {
        "id": meeting.id,
        "revision": meeting.revision,
        "media": meeting.media,
        "indent_symbol": meeting.indent_symbol,
        "transcripts": {name: _transcript_json(tv) for name, tv in meeting.transcripts.items()},
        "summaries": {name: _summary_json(sv) for name, sv in meeting.summaries.items()},
        "alignments": [_alignment_json(a) for a in meeting.alignments.values()],
        "evaluations": [_evaluation_json(e) for e in meeting.evaluations.values()],
    }


# --- mutation ops ---


class MutationRequest(BaseModel):
    expected_revision: int
    ops: list[dict] = []


class _OpShape(ValueError):
    """Malformed op body (wrong type, missing key)."""


def _need(op: dict, key: str, kinds, optional: bool = False, default=None):
    if key not in op:
        if optional:
            return default
        raise _OpShape(f"missing field {key!r}")
    value = op[key]
    if value is None and optional:
        return None
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise _OpShape(f"field {key!r} has the wrong type")
    return value


def _need_target(op: dict):
    raw = _need(op, "target", dict)
    if "point" in raw:
        return PointTarget(_target_field(raw, "point"))
    if "meta" in raw:
        label = _target_field(raw, "meta")
        try:
            return MetaTarget(MetaLabel(label))
        except ValueError:
            allowed = ", ".join(m.value for m in MetaLabel)
            raise _OpShape(f"unknown meta label {label!r}; expected one of: {allowed}") from None
    raise _OpShape("target must carry either 'point' or 'meta'")


def _target_field(raw: dict, key: str) -> str:
    value = raw[key]
    if not isinstance(value, str):
        raise _OpShape(f"target field {key!r} must be a string")
    return value


def _need_ids(op: dict, key: str) -> list[str]:
    value = _need(op, key, list)
    if not all(isinstance(v, str) for v in value):
        raise _OpShape(f"field {key!r} must be a list of act ids")
    return value


def apply_op(meeting: Meeting, op: dict) -> None:
    """Run one mutation op against the meeting; raises on any problem."""
    kind = _need(op, "op", str)
    if kind == "split":
        meeting.split_da(
            _need(op, "transcript", str), _need(op, "da", str), _need(op, "offset", int)
        )
    elif kind == "merge":
        meeting.merge_das(
            _need(op, "transcript", str), _need(op, "first", str), _need(op, "second", str)
        )
    elif kind == "edit":
        kwargs: dict[str, Any] = {}
        if "speaker" in op:
            kwargs["speaker"] = _need(op, "speaker", str)
        if "text" in op:
            kwargs["text"] = _need(op, "text", str)
        if "start" in op:
            kwargs["start"] = _need(op, "start", (int, float), optional=True)
        if "end" in op:
            kwargs["end"] = _need(op, "end", (int, float), optional=True)
        meeting.edit_da(_need(op, "transcript", str), _need(op, "da", str), **kwargs)
    elif kind == "insert":
        meeting.insert_da(
            _need(op, "transcript", str),
            _need(op, "position", int),
            _need(op, "speaker", str),
            _need(op, "text", str),
            _need(op, "start", (int, float), optional=True),
            _need(op, "end", (int, float), optional=True),
        )
    elif kind == "delete":
        meeting.delete_da(_need(op, "transcript", str), _need(op, "da", str))
    elif kind == "add_point":
        meeting.add_summary_point(
            _need(op, "summary", str),
            _need(op, "position", int),
            _need(op, "text", str),
            _need(op, "indent", int, optional=True, default=0),
        )
    elif kind == "delete_point":
        meeting.delete_summary_point(_need(op, "summary", str), _need(op, "point", str))
    elif kind == "align":
        meeting.align(
            _need(op, "transcript", str),
            _need(op, "summary", str),
            _need_ids(op, "das"),
            _need_target(op),
        )
    elif kind == "unalign":
        tver = _need(op, "transcript", str)
        sver = _need(op, "summary", str)
        if "das" in op:
            meeting.unalign(tver, sver, da_ids=_need_ids(op, "das"))
        elif "point" in op:
            meeting.unalign(tver, sver, point_id=_need(op, "point", str))
        else:
            raise _OpShape("unalign needs either 'das' or 'point'")
    elif kind == "set_scores":
        meeting.set_scores(
            _need(op, "transcript", str),
            _need(op, "summary", str),
            _need(op, "annotator", str),
            _need(op, "point", str),
            adequacy=_need(op, "adequacy", int, optional=True),
            grammaticality=_need(op, "grammaticality", int, optional=True),
            fluency=_need(op, "fluency", int, optional=True),
        )
    elif kind == "set_doc_adequacy":
        meeting.set_doc_adequacy(
            _need(op, "transcript", str),
            _need(op, "summary", str),
            _need(op, "annotator", str),
            _need(op, "value", int, optional=True),
        )
    else:
        raise _OpShape(f"unknown op {kind!r}")


# --- corpus state ---


class _Entry:
    __slots__ = ("meeting", "lock")

    def __init__(self, meeting: Meeting):
        self.meeting = meeting
        self.lock = threading.Lock()


class CorpusService:
    """Meetings under one corpus root, loaded on first use."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._entries: dict[str, _Entry] = {}
        self._registry_lock = threading.Lock()

    def list_ids(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(
            d.name for d in self.root.iterdir() if (d / store.META_FILE).is_file()
        )

    def entry(self, meeting_id: str) -> _Entry:
        with self._registry_lock:
            entry = self._entries.get(meeting_id)
            if entry is not None:
                return entry
            directory = self.root / meeting_id
            if not (directory / store.META_FILE).is_file():
                raise NotFound(f"no meeting {meeting_id!r}")
            meeting = store.load_meeting(directory)
            if meeting.id != meeting_id:
                raise IoFailure(
                    f"meeting directory {meeting_id!r} declares id {meeting.id!r}"
                )
            entry = _Entry(meeting)
            self._entries[meeting_id] = entry
            return entry

    def persist(self, meeting: Meeting) -> None:
        store.save_meeting(meeting, self.root)


# --- application ---


def create_app(root: Path, ui_dir: Optional[Path] = None) -> FastAPI:
    service = CorpusService(Path(root))
    app = FastAPI(title="minalign", version="0.1.0")
    app.state.service = service

    @app.exception_handler(MinalignError)
    def domain_error(request: Request, exc: MinalignError) -> JSONResponse:
        body: dict[str, Any] = {"error": type(exc).__name__, "detail": str(exc)}
        status = _STATUS_CODES.get(type(exc), 422)
        if isinstance(exc, Conflict):
            body["current_revision"] = exc.current_revision
        if isinstance(exc, MutationRejected):
            body["op_index"] = exc.op_index
            body["kind"] = exc.kind
            body["detail"] = exc.reason
        headers = None
        if isinstance(exc, RangeNotSatisfiable):
            headers = {"Content-Range": f"bytes */{getattr(exc, 'size', 0)}"}
        return JSONResponse(status_code=status, content=body, headers=headers)

    @app.get("/meetings")
    def list_meetings() -> dict:
        return {"meetings": service.list_ids()}

    @app.get("/meetings/{meeting_id}")
    def get_meeting(meeting_id: str) -> dict:
        entry = service.entry(meeting_id)
        with entry.lock:
            return _meeting_json(entry.meeting)

    @app.get("/meetings/{meeting_id}/view")
    def get_view(meeting_id: str, t: str, s: str, annotator: Optional[str] = None) -> dict:
        entry = service.entry(meeting_id)
        with entry.lock:
            meeting = entry.meeting
            tv = meeting.transcript(t)
            sv = meeting.summary(s)
            created = meeting.alignment_for(t, s) is None
            alignment = meeting.select_pair(t, s)
            if created:
                service.persist(meeting)
            evaluation = None
            if annotator is not None:
                record = meeting.evaluations.get((t, s, annotator))
                if record is not None:
                    evaluation = _evaluation_json(record)
            return {
                "meeting": meeting.id,
                "revision": meeting.revision,
                "transcript": _transcript_json(tv),
                "summary": _summary_json(sv),
                "alignment": _alignment_json(alignment),
                "evaluation": evaluation,
            }

    @app.post("/meetings/{meeting_id}/mutations")
    def post_mutations(meeting_id: str, request: MutationRequest) -> dict:
        entry = service.entry(meeting_id)
        with entry.lock:
            meeting = entry.meeting
            if request.expected_revision != meeting.revision:
                raise Conflict(meeting.revision)
            if not request.ops:
                return {"revision": meeting.revision, "applied": 0}
            working = deepcopy(meeting)
            for index, op in enumerate(request.ops):
                try:
                    apply_op(working, op)
                except MinalignError as exc:
                    raise MutationRejected(index, type(exc).__name__, str(exc)) from exc
                except _OpShape as exc:
                    raise MutationRejected(index, "MalformedOp", str(exc)) from exc
            service.persist(working)
            entry.meeting = working
            return {"revision": working.revision, "applied": len(request.ops)}

    @app.get("/meetings/{meeting_id}/metrics")
    def get_metrics(
        meeting_id: str, t: str, s: str, annotators: Optional[str] = None
    ) -> dict:
        entry = service.entry(meeting_id)
        with entry.lock:
            names = [n for n in annotators.split(",") if n] if annotators is not None else []
            if annotators is not None and len(names) < 2:
                raise TooFewAnnotators(
                    f"agreement needs at least 2 annotators, got {len(names)}"
                )
            report = pair_report(
                entry.meeting, t, s, annotators=names, include_iaa=bool(names)
            )
            report["revision"] = entry.meeting.revision
            return report

    @app.get("/meetings/{meeting_id}/search")
    def get_search(
        meeting_id: str, t: str, pattern: str, case_sensitive: bool = True
    ) -> dict:
        entry = service.entry(meeting_id)
        with entry.lock:
            tv = entry.meeting.transcript(t)
            hits = search(tv, pattern, case_sensitive=case_sensitive)
            return {
                "revision": entry.meeting.revision,
                "matches": [
                    {"da": da_id, "start": span[0], "end": span[1]} for da_id, span in hits
                ],
            }

    @app.get("/meetings/{meeting_id}/media")
    def get_media(meeting_id: str, request: Request) -> Response:
        entry = service.entry(meeting_id)
        with entry.lock:
            media = entry.meeting.media
        if media is None:
            raise NoMedia(f"meeting {meeting_id!r} has no media recording")
        path = service.root / meeting_id / media
        if not path.is_file():
            raise NoMedia(f"media file {media!r} is missing on disk")
        size = path.stat().st_size
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        byte_range = _parse_range(request.headers.get("range"), size)
        with path.open("rb") as handle:
            if byte_range is None:
                data = handle.read()
                return Response(
                    content=data,
                    media_type=media_type,
                    headers={"Accept-Ranges": "bytes", "Content-Length": str(size)},
                )
            first, last = byte_range
            handle.seek(first)
            data = handle.read(last - first + 1)
        return Response(
            content=data,
            status_code=206,
            media_type=media_type,
            headers={
                "Accept-Ranges": "bytes",
                "Content-Range": f"bytes {first}-{last}/{size}",
                "Content-Length": str(len(data)),
            },
        )

    if ui_dir is not None:
        # same-origin hosting for the web client; keeps CORS out of the picture
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _parse_range(header: Optional[str], size: int) -> Optional[tuple[int, int]]:
    """One satisfiable byte range, or None to serve the whole file.

    Malformed and multi-range headers are ignored (full response); a
    syntactically fine but unsatisfiable range raises.
    """
    if header is None:
        return None
    value = header.strip()
    if not value.startswith("bytes="):
        return None
    spec = value[len("bytes="):]
    if "," in spec:
        return None
    first_text, sep, last_text = spec.partition("-")
    if not sep:
        return None
    first_text = first_text.strip()
    last_text = last_text.strip()
    if first_text == "" and last_text == "":
        return None
    if first_text == "":
        # suffix form: last N bytes
        if not last_text.isdigit():
            return None
        count = int(last_text)
        if count == 0 or size == 0:
            raise _unsatisfiable(size)
        count = min(count, size)
        return size - count, size - 1
    if not first_text.isdigit():
        return None
    first = int(first_text)
    if last_text == "":
        last = size - 1
    elif last_text.isdigit():
        last = int(last_text)
        if first > last:
            return None  # syntactically invalid range, header is ignored
        last = min(last, size - 1)
    else:
        return None
    if first >= size:
        raise _unsatisfiable(size)
    return first, last


def _unsatisfiable(size: int) -> RangeNotSatisfiable:
    exc = RangeNotSatisfiable(f"requested range is outside the {size}-byte media file")
    exc.size = size
    return exc
