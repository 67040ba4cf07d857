"""Shared test machinery.

The oracles here are written straight from the definitions, independently of
the library code: per-act counting loops for the metrics, and structural
comparison that looks only at positions and values, never at stable ids.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Optional

from minalign.core import (
    Alignment,
    EvaluationRecord,
    Meeting,
    MetaLabel,
    MetaTarget,
    PointScores,
    PointTarget,
    TranscriptVersion,
    is_valid_name,
)

NAME_CHARS = "abcdefghijklmnopqrstuvwxyz0123456789._-"

SPEAKER_POOL = ["A", "B", "PM", "spk\t1", "Ünñámed", "p-\\q", "observer 2"]

WORD_POOL = [
    "okay", "let's", "move", "budget", "deadline", "Ünïcode", "漢字", "naïve",
    "item", "agreed", "next", "quarter", "🙂", "review", "\\server\\share",
]

SPECIAL_CHUNKS = ["\t", "\n", "\\", "\\t", "\\n", "  ", "\\\\"]

INDENT_SYMBOLS = ["-", "*", "+", "#", "--", "•"]


def random_name(rng: random.Random, length_range=(3, 8)) -> str:
    while True:
        n = rng.randint(*length_range)
        name = "".join(rng.choice(NAME_CHARS) for _ in range(n))
        if is_valid_name(name):
            return name


def random_text(rng: random.Random, allow_newline: bool = True, allow_empty: bool = False) -> str:
    words = [rng.choice(WORD_POOL) for _ in range(rng.randint(1, 6))]
    text = " ".join(words)
    for _ in range(rng.randint(0, 2)):
        chunk = rng.choice(SPECIAL_CHUNKS)
        if chunk == "\n" and not allow_newline:
            continue
        cut = rng.randint(0, len(text))
        text = text[:cut] + chunk + text[cut:]
    if not allow_newline:
        text = text.replace("\n", " ")
    if allow_empty and rng.random() < 0.1:
        return ""
    return text or "x"


def random_meeting(rng: random.Random, meeting_id: Optional[str] = None) -> Meeting:
    """A meeting with varied versions, alignments, and partial evaluations.

    Texts deliberately include tabs, newlines, backslashes, literal escape
    lookalikes, and points that start with the indent symbol or a space.
    """
    meeting = Meeting(meeting_id or random_name(rng), indent_symbol=rng.choice(INDENT_SYMBOLS))
    names_used: set[str] = set()

    def fresh_name() -> str:
        while True:
            name = random_name(rng)
            if name not in names_used:
                names_used.add(name)
                return name

    for _ in range(rng.randint(1, 2)):
        tv = meeting.add_transcript(fresh_name())
        clock = 0.0
        for _ in range(rng.randint(0, 7)):
            start: Optional[float] = None
            end: Optional[float] = None
            shape = rng.random()
            if shape < 0.7:
                # millisecond-quantized, occasionally out of order on purpose;
                # round() keeps sums on the representable ms grid
                jump = rng.randint(-2000, 8000) if rng.random() < 0.15 else rng.randint(0, 8000)
                clock = round(max(0.0, clock + jump / 1000.0), 3)
                start = clock
                if rng.random() < 0.8:
                    end = round(start + rng.randint(0, 5000) / 1000.0, 3)
            elif shape < 0.8:
                end = rng.randint(0, 30000) / 1000.0
            meeting.append_da(
                tv.name, rng.choice(SPEAKER_POOL), random_text(rng), start, end
            )
    for _ in range(rng.randint(1, 2)):
        sv = meeting.add_summary(fresh_name())
        for _ in range(rng.randint(0, 5)):
            style = rng.random()
            if style < 0.1:
                text = ""
            elif style < 0.2:
                text = meeting.indent_symbol + random_text(rng, allow_newline=False)
            elif style < 0.3:
                text = " " + random_text(rng, allow_newline=False)
            else:
                text = random_text(rng, allow_newline=False)
            meeting.append_point(sv.name, text, indent=rng.randint(0, 3))

    annotator_pool = [random_name(rng) for _ in range(3)]
    for tv in list(meeting.transcripts.values()):
        for sv in list(meeting.summaries.values()):
            for annotator in [None] + annotator_pool:
                if annotator is None:
                    wanted = rng.random() < 0.7
                else:
                    wanted = rng.random() < 0.4
                if not wanted:
                    continue
                targets = {}
                for da in tv.das:
                    roll = rng.random()
                    if roll < 0.45 and sv.points:
                        targets[da.id] = PointTarget(rng.choice(sv.points).id)
                    elif roll < 0.6:
                        targets[da.id] = MetaTarget(rng.choice(list(MetaLabel)))
                meeting.put_alignment(
                    Alignment(
                        transcript_version=tv.name,
                        summary_version=sv.name,
                        targets=targets,
                        annotator=annotator,
                    )
                )
            for annotator in annotator_pool:
                if rng.random() >= 0.3:
                    continue
                per_point = {}
                for point in sv.points:
                    if rng.random() < 0.6:
                        continue
                    scores = PointScores(
                        adequacy=rng.randint(1, 5) if rng.random() < 0.8 else None,
                        grammaticality=rng.randint(1, 5) if rng.random() < 0.8 else None,
                        fluency=rng.randint(1, 5) if rng.random() < 0.8 else None,
                    )
                    if not scores.is_empty():
                        per_point[point.id] = scores
                doc = rng.randint(1, 5) if rng.random() < 0.5 else None
                if per_point or doc is not None:
                    meeting.put_evaluation(
                        EvaluationRecord(
                            annotator=annotator,
                            transcript_version=tv.name,
                            summary_version=sv.name,
                            per_point=per_point,
                            doc_adequacy=doc,
                        )
                    )
    if rng.random() < 0.2:
        meeting.media = "recording.wav"
    return meeting


# --- structural comparison (positions and values, not ids) ---


def _target_key(target, point_positions: dict[str, int]):
    if isinstance(target, PointTarget):
        return ("P", point_positions[target.point_id])
    return ("M", target.label.value)


def fingerprint(meeting: Meeting, include_ids: bool = False):
    """Hashable structural snapshot; equal fingerprints = equivalent meetings."""
    transcripts = []
    positions: dict[tuple[str, str], int] = {}
    for name in sorted(meeting.transcripts):
        tv = meeting.transcripts[name]
        das = []
        for i, da in enumerate(tv.das):
            positions[("d", da.id)] = i
            row = (da.speaker, da.text, da.start, da.end)
            das.append((da.id,) + row if include_ids else row)
        transcripts.append((name, tuple(das)))
    summaries = []
    point_positions: dict[str, int] = {}
    for name in sorted(meeting.summaries):
        sv = meeting.summaries[name]
        points = []
        for i, point in enumerate(sv.points):
            point_positions[point.id] = i
            row = (point.text, point.indent)
            points.append((point.id,) + row if include_ids else row)
        summaries.append((name, sv.indent_symbol, tuple(points)))
    alignments = []
    for key in sorted(meeting.alignments, key=lambda k: (k[0], k[1], k[2] or "")):
        alignment = meeting.alignments[key]
        tv = meeting.transcripts[alignment.transcript_version]
        da_positions = {da.id: i for i, da in enumerate(tv.das)}
        rows = tuple(
            sorted(
                (da_positions[da_id], _target_key(target, point_positions))
                for da_id, target in alignment.targets.items()
            )
        )
        alignments.append((key[0], key[1], key[2], rows))
    evaluations = []
    for key in sorted(meeting.evaluations):
        record = meeting.evaluations[key]
        rows = tuple(
            sorted(
                (
                    point_positions[point_id],
                    (scores.adequacy, scores.grammaticality, scores.fluency),
                )
                for point_id, scores in record.per_point.items()
            )
        )
        evaluations.append((key, rows, record.doc_adequacy))
    return (
        meeting.id,
        meeting.indent_symbol,
        meeting.media,
        meeting.revision,
        tuple(transcripts),
        tuple(summaries),
        tuple(alignments),
        tuple(evaluations),
    )


def assert_meetings_equivalent(a: Meeting, b: Meeting) -> None:
    fa = fingerprint(a)[:3] + fingerprint(a)[4:]  # revision is runtime-only
    fb = fingerprint(b)[:3] + fingerprint(b)[4:]
    assert fa == fb, f"meetings differ:\n{fa}\n{fb}"


# --- invariant checking ---


def check_invariants(meeting: Meeting) -> None:
    """Hunk partition, referential integrity, id uniqueness, score ranges."""
    for tv in meeting.transcripts.values():
        ids = [da.id for da in tv.das]
        assert len(set(ids)) == len(ids), f"duplicate act ids in {tv.name}"
    for sv in meeting.summaries.values():
        ids = [p.id for p in sv.points]
        assert len(set(ids)) == len(ids), f"duplicate point ids in {sv.name}"
    for (tver, sver, annotator), alignment in meeting.alignments.items():
        assert alignment.transcript_version == tver
        assert alignment.summary_version == sver
        assert alignment.annotator == annotator
        assert tver in meeting.transcripts, f"alignment over missing transcript {tver}"
        assert sver in meeting.summaries, f"alignment over missing summary {sver}"
        da_ids = {da.id for da in meeting.transcripts[tver].das}
        point_ids = {p.id for p in meeting.summaries[sver].points}
        for da_id, target in alignment.targets.items():
            assert da_id in da_ids, f"dangling act {da_id} in alignment {tver}/{sver}"
            if isinstance(target, PointTarget):
                assert target.point_id in point_ids, (
                    f"dangling point {target.point_id} in alignment {tver}/{sver}"
                )
            else:
                assert isinstance(target, MetaTarget)
    # hunks of distinct points are disjoint and cover exactly the point-aligned acts
    for (tver, sver, annotator), alignment in meeting.alignments.items():
        if annotator is not None:
            continue
        tv = meeting.transcripts[tver]
        seen: set[str] = set()
        for point in meeting.summaries[sver].points:
            hunk = meeting.hunk_of(tver, sver, point.id)
            hunk_set = set(hunk)
            assert len(hunk_set) == len(hunk)
            assert not (hunk_set & seen), "hunks overlap"
            seen |= hunk_set
            in_order = [da.id for da in tv.das if da.id in hunk_set]
            assert in_order == hunk, "hunk not in transcript order"
        point_aligned = {
            da_id
            for da_id, target in alignment.targets.items()
            if isinstance(target, PointTarget)
        }
        assert seen == point_aligned, "hunks do not partition the aligned acts"
    for (tver, sver, annotator), record in meeting.evaluations.items():
        assert record.annotator == annotator
        assert record.transcript_version == tver
        assert record.summary_version == sver
        assert tver in meeting.transcripts
        assert sver in meeting.summaries
        assert not record.is_empty(), "empty evaluation record kept around"
        point_ids = {p.id for p in meeting.summaries[sver].points}
        for point_id, scores in record.per_point.items():
            assert point_id in point_ids, f"scores for missing point {point_id}"
            assert not scores.is_empty()
            for value in (scores.adequacy, scores.grammaticality, scores.fluency):
                assert value is None or 1 <= value <= 5
        assert record.doc_adequacy is None or 1 <= record.doc_adequacy <= 5


# --- independent metric oracles (per-act loops, straight from the definitions) ---


def oracle_coverage(alignment: Alignment, tv: TranscriptVersion) -> tuple[float, float]:
    to_points = 0
    annotated = 0
    for da in tv.das:
        target = alignment.targets.get(da.id)
        if isinstance(target, PointTarget):
            to_points += 1
            annotated += 1
        elif isinstance(target, MetaTarget):
            annotated += 1
    return to_points / len(tv.das), annotated / len(tv.das)


def oracle_iaa(alignments, tv: TranscriptVersion) -> float:
    agreed = 0
    for da in tv.das:
        targets = [a.targets.get(da.id) for a in alignments]
        if all(isinstance(t, PointTarget) for t in targets):
            if len({t.point_id for t in targets}) == 1:
                agreed += 1
    return agreed / len(tv.das)


# --- filesystem comparison ---


def tree_bytes(directory: Path) -> dict[str, bytes]:
    directory = Path(directory)
    return {
        str(p.relative_to(directory)): p.read_bytes()
        for p in sorted(directory.rglob("*"))
        if p.is_file()
    }


def assert_trees_identical(a: Path, b: Path) -> None:
    ta, tb = tree_bytes(a), tree_bytes(b)
    assert ta.keys() == tb.keys(), (
        f"file sets differ: only in first {sorted(ta.keys() - tb.keys())}, "
        f"only in second {sorted(tb.keys() - ta.keys())}"
    )
    for rel in ta:
        assert ta[rel] == tb[rel], f"file {rel} differs"
