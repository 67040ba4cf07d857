"""In-memory model for meeting annotation.

A Meeting holds named transcript versions (ordered dialogue acts), named
summary versions (ordered points), alignments between version pairs, and
per-annotator evaluation records.  All editing goes through Meeting methods;
each method validates its preconditions completely before touching state, so
a failed call leaves the meeting unchanged.  Every successful mutation bumps
the meeting revision by exactly one.

Identity rules: dialogue acts and summary points carry stable string ids
("d3", "s1") handed out by per-version counters and never reused.  Splitting
or merging retires the old ids and issues fresh ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from .errors import (
    ConflictingAlignment,
    IndexOutOfRange,
    InvalidField,
    InvalidName,
    InvalidPattern,
    InvalidScore,
    InvalidTimes,
    NotAdjacent,
    OffsetOutOfRange,
    SpeakerMismatch,
    UnknownDa,
    UnknownPoint,
    UnknownVersion,
)

# Dialect pinned for search(); named in InvalidPattern messages.
REGEX_DIALECT = "python-re"

# Names double as directory / file name components, so keep them filesystem
# safe.  "__" is reserved as the separator in pair filenames.
_NAME_RE = re.compile(r"[A-Za-z0-9._-]+\Z")


def is_valid_name(name: str) -> bool:
    # No "__" inside and no underscore at either end: file stems join names
    # with "__", and these shapes would make that separator ambiguous.
    return (
        bool(_NAME_RE.fullmatch(name))
        and "__" not in name
        and not name.startswith("_")
        and not name.endswith("_")
    )


def check_name(kind: str, name: str) -> str:
    if not is_valid_name(name):
        raise InvalidName(
            f"{kind} name {name!r} must match [A-Za-z0-9._-]+, must not contain "
            "'__', and must not start or end with '_'"
        )
    return name


def check_indent_symbol(symbol: str) -> str:
    if not symbol or any(c.isspace() for c in symbol):
        raise InvalidField(f"indent symbol {symbol!r} must be non-empty and contain no whitespace")
    return symbol


def _check_speaker(speaker: str) -> str:
    if not speaker or "\n" in speaker:
        raise InvalidField(f"speaker label {speaker!r} must be non-empty and contain no newline")
    return speaker


def _check_point_text(text: str) -> str:
    if "\n" in text:
        raise InvalidField("summary point text must not contain a raw newline")
    return text


def _check_times(start: Optional[float], end: Optional[float]) -> None:
    for value in (start, end):
        if value is not None and (value < 0 or value != value):
            raise InvalidTimes(f"timestamp {value!r} must be a finite number of seconds >= 0")
    if start is not None and end is not None and start > end:
        raise InvalidTimes(f"start {start} is after end {end}")


def _check_score(criterion: str, value: Optional[int]) -> Optional[int]:
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
        raise InvalidScore(f"{criterion} score {value!r} must be an integer in 1..5")
    return value


class MetaLabel(Enum):
    """Closed set of transcript-level labels a dialogue act can carry instead of a point."""

    SMALL_TALK = "small_talk"
    ORGANIZATIONAL = "organizational"


@dataclass(frozen=True)
class PointTarget:
    """Alignment to a summary point, by stable id."""

    point_id: str


@dataclass(frozen=True)
class MetaTarget:
    """Alignment to a meta label rather than a point."""

    label: MetaLabel


# A dialogue act maps to exactly one of these, or to nothing at all.
AlignmentTarget = Union[PointTarget, MetaTarget]


@dataclass
class DialogueAct:
    id: str
    speaker: str
    text: str
    start: Optional[float] = None
    end: Optional[float] = None


@dataclass
class TranscriptVersion:
    """Ordered dialogue acts under one version name."""

    name: str
    das: list[DialogueAct] = field(default_factory=list)
    _id_counter: int = field(default=0, repr=False, compare=False)

    def fresh_id(self) -> str:
        self._id_counter += 1
        return f"d{self._id_counter}"

    def index_of(self, da_id: str) -> int:
        for i, da in enumerate(self.das):
            if da.id == da_id:
                return i
        raise UnknownDa(f"no dialogue act {da_id!r} in transcript version {self.name!r}")

    def get(self, da_id: str) -> DialogueAct:
        return self.das[self.index_of(da_id)]

    def has(self, da_id: str) -> bool:
        return any(da.id == da_id for da in self.das)


@dataclass
class SummaryPoint:
    id: str
    text: str
    indent: int = 0


@dataclass
class SummaryVersion:
    """Ordered summary points under one version name."""

    name: str
    points: list[SummaryPoint] = field(default_factory=list)
    indent_symbol: str = "-"
    _id_counter: int = field(default=0, repr=False, compare=False)

    def fresh_id(self) -> str:
        self._id_counter += 1
        return f"s{self._id_counter}"

    def index_of(self, point_id: str) -> int:
        for i, point in enumerate(self.points):
            if point.id == point_id:
                return i
        raise UnknownPoint(f"no summary point {point_id!r} in summary version {self.name!r}")

    def get(self, point_id: str) -> SummaryPoint:
        return self.points[self.index_of(point_id)]

    def has(self, point_id: str) -> bool:
        return any(p.id == point_id for p in self.points)


@dataclass
class Alignment:
    """Partial map from dialogue act id to a single target, over one version pair.

    annotator is None for the working alignment edited through the tool;
    a named annotator marks an independent copy used for agreement.
    """

    transcript_version: str
    summary_version: str
    targets: dict[str, AlignmentTarget] = field(default_factory=dict)
    annotator: Optional[str] = None


@dataclass
class PointScores:
    adequacy: Optional[int] = None
    grammaticality: Optional[int] = None
    fluency: Optional[int] = None

    def is_empty(self) -> bool:
        return self.adequacy is None and self.grammaticality is None and self.fluency is None

    def is_complete(self) -> bool:
        return (
            self.adequacy is not None
            and self.grammaticality is not None
            and self.fluency is not None
        )


@dataclass
class EvaluationRecord:
    """One annotator's scores for one version pair.

    doc_adequacy is elicited on its own; it is never computed from the
    per-point scores.
    """

    annotator: str
    transcript_version: str
    summary_version: str
    per_point: dict[str, PointScores] = field(default_factory=dict)
    doc_adequacy: Optional[int] = None

    def is_empty(self) -> bool:
        return not self.per_point and self.doc_adequacy is None


_UNSET = object()

AlignmentKey = tuple[str, str, Optional[str]]
EvaluationKey = tuple[str, str, str]


class Meeting:
    """One meeting with all its versions, alignments, and evaluations.

    revision counts successful mutations since the object was created.  It is
    runtime state only; persistence does not carry it.
    """

    def __init__(self, meeting_id: str, indent_symbol: str = "-"):
        check_name("meeting", meeting_id)
        check_indent_symbol(indent_symbol)
        self.id = meeting_id
        self.indent_symbol = indent_symbol
        self.transcripts: dict[str, TranscriptVersion] = {}
        self.summaries: dict[str, SummaryVersion] = {}
        self.alignments: dict[AlignmentKey, Alignment] = {}
        self.evaluations: dict[EvaluationKey, EvaluationRecord] = {}
        self.media: Optional[str] = None
        self.revision = 0

    # --- lookup helpers ---

    def transcript(self, name: str) -> TranscriptVersion:
        try:
            return self.transcripts[name]
        except KeyError:
            raise UnknownVersion(f"no transcript version {name!r} in meeting {self.id!r}") from None

    def summary(self, name: str) -> SummaryVersion:
        try:
            return self.summaries[name]
        except KeyError:
            raise UnknownVersion(f"no summary version {name!r} in meeting {self.id!r}") from None

    def alignment_for(self, tver: str, sver: str, annotator: Optional[str] = None) -> Optional[Alignment]:
        return self.alignments.get((tver, sver, annotator))

    def _alignments_over_transcript(self, tver: str) -> list[Alignment]:
        return [a for a in self.alignments.values() if a.transcript_version == tver]

    def _alignments_over_summary(self, sver: str) -> list[Alignment]:
        return [a for a in self.alignments.values() if a.summary_version == sver]

    def _bump(self) -> None:
        self.revision += 1

    # --- version management (tooling layer; not part of the edit vocabulary) ---

    def add_transcript(self, name: str) -> TranscriptVersion:
        check_name("transcript version", name)
        if name in self.transcripts:
            raise InvalidName(f"transcript version {name!r} already exists")
        tv = TranscriptVersion(name=name)
        self.transcripts[name] = tv
        self._bump()
        return tv

    def add_summary(self, name: str, indent_symbol: Optional[str] = None) -> SummaryVersion:
        check_name("summary version", name)
        if name in self.summaries:
            raise InvalidName(f"summary version {name!r} already exists")
        symbol = self.indent_symbol if indent_symbol is None else check_indent_symbol(indent_symbol)
        sv = SummaryVersion(name=name, indent_symbol=symbol)
        self.summaries[name] = sv
        self._bump()
        return sv

    def append_da(
        self,
        tver: str,
        speaker: str,
        text: str,
        start: Optional[float] = None,
        end: Optional[float] = None,
    ) -> str:
        """Convenience wrapper: insert at the end."""
        return self.insert_da(tver, len(self.transcript(tver).das), speaker, text, start, end)

    def append_point(self, sver: str, text: str, indent: int = 0) -> str:
        return self.add_summary_point(sver, len(self.summary(sver).points), text, indent)

    def put_alignment(self, alignment: Alignment) -> None:
        """Register a complete alignment (used when loading annotator copies)."""
        tv = self.transcript(alignment.transcript_version)
        sv = self.summary(alignment.summary_version)
        if alignment.annotator is not None:
            check_name("annotator", alignment.annotator)
        for da_id, target in alignment.targets.items():
            if not tv.has(da_id):
                raise UnknownDa(f"alignment refers to missing dialogue act {da_id!r}")
            if isinstance(target, PointTarget) and not sv.has(target.point_id):
                raise UnknownPoint(f"alignment refers to missing summary point {target.point_id!r}")
        key = (alignment.transcript_version, alignment.summary_version, alignment.annotator)
        self.alignments[key] = alignment
        self._bump()

    def put_evaluation(self, record: EvaluationRecord) -> None:
        """Register a complete evaluation record (used when loading)."""
        check_name("annotator", record.annotator)
        self.transcript(record.transcript_version)
        sv = self.summary(record.summary_version)
        for point_id, scores in record.per_point.items():
            if not sv.has(point_id):
                raise UnknownPoint(f"evaluation refers to missing summary point {point_id!r}")
            for criterion in ("adequacy", "grammaticality", "fluency"):
                _check_score(criterion, getattr(scores, criterion))
        _check_score("doc_adequacy", record.doc_adequacy)
        key = (record.transcript_version, record.summary_version, record.annotator)
        self.evaluations[key] = record
        self._bump()

    def set_media(self, path: Optional[str]) -> None:
        self.media = path
        self._bump()

    # --- pair selection ---

    def select_pair(self, tver: str, sver: str) -> Alignment:
        """Return the working alignment for the pair, creating it empty if new.

        Creation is a mutation (revision bumps); re-selecting an existing pair
        is a pure read.
        """
        self.transcript(tver)
        self.summary(sver)
        key = (tver, sver, None)
        existing = self.alignments.get(key)
        if existing is not None:
            return existing
        alignment = Alignment(transcript_version=tver, summary_version=sver)
        self.alignments[key] = alignment
        self._bump()
        return alignment

    # --- transcript editing ---

    def split_da(self, tver: str, da_id: str, offset: int) -> tuple[str, str]:
        """Split one act into two at a character offset.

        The left part keeps the start time, the right part keeps the end time;
        interior times are unknown.  Boundary whitespace is trimmed.  Both
        halves inherit the original's target in every alignment over this
        transcript version.
        """
        tv = self.transcript(tver)
        index = tv.index_of(da_id)
        da = tv.das[index]
        if not 0 < offset < len(da.text):
            raise OffsetOutOfRange(
                f"offset {offset} must fall strictly inside text of length {len(da.text)}"
            )
        left = DialogueAct(
            id=tv.fresh_id(),
            speaker=da.speaker,
            text=da.text[:offset].rstrip(),
            start=da.start,
            end=None,
        )
        right = DialogueAct(
            id=tv.fresh_id(),
            speaker=da.speaker,
            text=da.text[offset:].lstrip(),
            start=None,
            end=da.end,
        )
        tv.das[index : index + 1] = [left, right]
        for alignment in self._alignments_over_transcript(tver):
            target = alignment.targets.pop(da_id, None)
            if target is not None:
                alignment.targets[left.id] = target
                alignment.targets[right.id] = target
        self._bump()
        return left.id, right.id

    def merge_das(self, tver: str, first_id: str, second_id: str) -> str:
        """Merge two consecutive same-speaker acts into one.

        Texts are joined with a single space.  Per alignment, the merged act
        takes whichever target is defined; differing defined targets refuse
        the merge.
        """
        tv = self.transcript(tver)
        first_index = tv.index_of(first_id)
        second_index = tv.index_of(second_id)
        if second_index != first_index + 1:
            raise NotAdjacent(
                f"dialogue act {first_id!r} does not immediately precede {second_id!r}"
            )
        first, second = tv.das[first_index], tv.das[second_index]
        if first.speaker != second.speaker:
            raise SpeakerMismatch(
                f"cannot merge {first.speaker!r} with {second.speaker!r}"
            )
        merged_targets: list[tuple[Alignment, Optional[AlignmentTarget]]] = []
        for alignment in self._alignments_over_transcript(tver):
            target_first = alignment.targets.get(first_id)
            target_second = alignment.targets.get(second_id)
            if target_first is not None and target_second is not None and target_first != target_second:
                raise ConflictingAlignment(
                    f"{first_id!r} and {second_id!r} are aligned to different targets"
                )
            merged_targets.append((alignment, target_first or target_second))
        merged = DialogueAct(
            id=tv.fresh_id(),
            speaker=first.speaker,
            text=first.text + " " + second.text,
            start=first.start,
            end=second.end,
        )
        tv.das[first_index : second_index + 1] = [merged]
        for alignment, target in merged_targets:
            alignment.targets.pop(first_id, None)
            alignment.targets.pop(second_id, None)
            if target is not None:
                alignment.targets[merged.id] = target
        self._bump()
        return merged.id

    def edit_da(
        self,
        tver: str,
        da_id: str,
        *,
        speaker=_UNSET,
        text=_UNSET,
        start=_UNSET,
        end=_UNSET,
    ) -> None:
        """Update fields in place; the act keeps its id and all its alignments.

        Omitted keyword = leave unchanged.  Passing None for start/end clears
        the timestamp.  Empty text is allowed here and flagged at save time.
        """
        tv = self.transcript(tver)
        da = tv.get(da_id)
        if speaker is not _UNSET:
            _check_speaker(speaker)
        new_start = da.start if start is _UNSET else start
        new_end = da.end if end is _UNSET else end
        _check_times(new_start, new_end)
        if speaker is not _UNSET:
            da.speaker = speaker
        if text is not _UNSET:
            da.text = text
        da.start = new_start
        da.end = new_end
        self._bump()

    def insert_da(
        self,
        tver: str,
        position: int,
        speaker: str,
        text: str,
        start: Optional[float] = None,
        end: Optional[float] = None,
    ) -> str:
        """Insert a new, unaligned act at the given position (0..length)."""
        tv = self.transcript(tver)
        if not 0 <= position <= len(tv.das):
            raise IndexOutOfRange(
                f"insert position {position} outside 0..{len(tv.das)}"
            )
        _check_speaker(speaker)
        _check_times(start, end)
        da = DialogueAct(id=tv.fresh_id(), speaker=speaker, text=text, start=start, end=end)
        tv.das.insert(position, da)
        self._bump()
        return da.id

    def delete_da(self, tver: str, da_id: str) -> None:
        """Remove an act and drop it from every alignment over this version."""
        tv = self.transcript(tver)
        index = tv.index_of(da_id)
        del tv.das[index]
        for alignment in self._alignments_over_transcript(tver):
            alignment.targets.pop(da_id, None)
        self._bump()

    # --- summary editing ---

    def add_summary_point(self, sver: str, position: int, text: str, indent: int = 0) -> str:
        sv = self.summary(sver)
        if not 0 <= position <= len(sv.points):
            raise IndexOutOfRange(
                f"insert position {position} outside 0..{len(sv.points)}"
            )
        _check_point_text(text)
        if indent < 0:
            raise InvalidField(f"indent {indent} must be >= 0")
        point = SummaryPoint(id=sv.fresh_id(), text=text, indent=indent)
        sv.points.insert(position, point)
        self._bump()
        return point.id

    def edit_summary_point(self, sver: str, point_id: str, *, text=_UNSET, indent=_UNSET) -> None:
        """Update a point's text or indent; alignments and scores stay attached."""
        sv = self.summary(sver)
        point = sv.get(point_id)
        if text is not _UNSET:
            _check_point_text(text)
        if indent is not _UNSET and indent < 0:
            raise InvalidField(f"indent {indent} must be >= 0")
        if text is not _UNSET:
            point.text = text
        if indent is not _UNSET:
            point.indent = indent
        self._bump()

    def delete_summary_point(self, sver: str, point_id: str) -> None:
        """Remove a point; its hunk becomes unaligned and its scores disappear."""
        sv = self.summary(sver)
        index = sv.index_of(point_id)
        del sv.points[index]
        target = PointTarget(point_id)
        for alignment in self._alignments_over_summary(sver):
            stale = [da_id for da_id, t in alignment.targets.items() if t == target]
            for da_id in stale:
                del alignment.targets[da_id]
        for key in list(self.evaluations):
            record = self.evaluations[key]
            if record.summary_version == sver:
                record.per_point.pop(point_id, None)
                if record.is_empty():
                    del self.evaluations[key]
        self._bump()

    # --- alignment editing (working alignment of the pair) ---

    def align(self, tver: str, sver: str, da_ids: Iterable[str], target: AlignmentTarget) -> None:
        """Point each listed act at the target, overwriting previous targets."""
        tv = self.transcript(tver)
        sv = self.summary(sver)
        ids = list(da_ids)
        for da_id in ids:
            if not tv.has(da_id):
                raise UnknownDa(f"no dialogue act {da_id!r} in transcript version {tver!r}")
        if isinstance(target, PointTarget):
            if not sv.has(target.point_id):
                raise UnknownPoint(
                    f"no summary point {target.point_id!r} in summary version {sver!r}"
                )
        elif not isinstance(target, MetaTarget):
            raise InvalidField(f"alignment target must be a point or a meta label, got {target!r}")
        alignment = self.select_pair(tver, sver)
        for da_id in ids:
            alignment.targets[da_id] = target
        self._bump()

    def unalign(
        self,
        tver: str,
        sver: str,
        da_ids: Optional[Iterable[str]] = None,
        point_id: Optional[str] = None,
    ) -> None:
        """Remove targets for the listed acts, or the whole hunk of a point.

        Unaligning an act that carries no target is a successful no-op.
        """
        if (da_ids is None) == (point_id is None):
            raise ValueError("pass exactly one of da_ids or point_id")
        tv = self.transcript(tver)
        sv = self.summary(sver)
        if da_ids is not None:
            ids = list(da_ids)
            for da_id in ids:
                if not tv.has(da_id):
                    raise UnknownDa(f"no dialogue act {da_id!r} in transcript version {tver!r}")
            alignment = self.select_pair(tver, sver)
            for da_id in ids:
                alignment.targets.pop(da_id, None)
        else:
            if not sv.has(point_id):
                raise UnknownPoint(f"no summary point {point_id!r} in summary version {sver!r}")
            alignment = self.select_pair(tver, sver)
            target = PointTarget(point_id)
            stale = [da_id for da_id, t in alignment.targets.items() if t == target]
            for da_id in stale:
                del alignment.targets[da_id]
        self._bump()

    def hunk_of(self, tver: str, sver: str, point_id: str) -> list[str]:
        """Ids of the acts aligned to the point, in transcript order."""
        tv = self.transcript(tver)
        sv = self.summary(sver)
        if not sv.has(point_id):
            raise UnknownPoint(f"no summary point {point_id!r} in summary version {sver!r}")
        alignment = self.alignments.get((tver, sver, None))
        if alignment is None:
            return []
        target = PointTarget(point_id)
        return [da.id for da in tv.das if alignment.targets.get(da.id) == target]

    # --- evaluation editing ---

    def set_scores(
        self,
        tver: str,
        sver: str,
        annotator: str,
        point_id: str,
        adequacy: Optional[int] = None,
        grammaticality: Optional[int] = None,
        fluency: Optional[int] = None,
    ) -> None:
        """Set this annotator's scores for one point; None clears a criterion.

        Clearing all three removes the entry; a record that ends up with no
        entries and no document score disappears entirely.
        """
        self.transcript(tver)
        sv = self.summary(sver)
        check_name("annotator", annotator)
        if not sv.has(point_id):
            raise UnknownPoint(f"no summary point {point_id!r} in summary version {sver!r}")
        scores = PointScores(
            adequacy=_check_score("adequacy", adequacy),
            grammaticality=_check_score("grammaticality", grammaticality),
            fluency=_check_score("fluency", fluency),
        )
        key = (tver, sver, annotator)
        record = self.evaluations.get(key)
        if scores.is_empty():
            if record is not None:
                record.per_point.pop(point_id, None)
                if record.is_empty():
                    del self.evaluations[key]
        else:
            if record is None:
                record = EvaluationRecord(
                    annotator=annotator, transcript_version=tver, summary_version=sver
                )
                self.evaluations[key] = record
            record.per_point[point_id] = scores
        self._bump()

    def set_doc_adequacy(self, tver: str, sver: str, annotator: str, value: Optional[int]) -> None:
        """Set or clear the independently judged document-level adequacy."""
        self.transcript(tver)
        self.summary(sver)
        check_name("annotator", annotator)
        _check_score("doc_adequacy", value)
        key = (tver, sver, annotator)
        record = self.evaluations.get(key)
        if value is None:
            if record is not None:
                record.doc_adequacy = None
                if record.is_empty():
                    del self.evaluations[key]
        else:
            if record is None:
                record = EvaluationRecord(
                    annotator=annotator, transcript_version=tver, summary_version=sver
                )
                self.evaluations[key] = record
            record.doc_adequacy = value
        self._bump()


def search(
    tv: TranscriptVersion, pattern: str, case_sensitive: bool = True
) -> list[tuple[str, tuple[int, int]]]:
    """Find pattern matches across a transcript.

    The pattern language is Python's re module (the python-re dialect).
    Returns (da_id, (start, end)) tuples in transcript order; within one act,
    matches are leftmost-first and non-overlapping.
    """
    flags = 0 if case_sensitive else re.IGNORECASE
    try:
        compiled = re.compile(pattern, flags)
    except re.error as exc:
        raise InvalidPattern(
            f"pattern {pattern!r} does not compile under the {REGEX_DIALECT} dialect: {exc}"
        ) from exc
    hits: list[tuple[str, tuple[int, int]]] = []
    for da in tv.das:
        for match in compiled.finditer(da.text):
            hits.append((da.id, match.span()))
    return hits
