"""Pure computations over alignments and evaluation records.

Nothing here mutates a meeting.  All ratios are plain float divisions held at
full precision; rounding for display is the caller's business.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .core import (
    Alignment,
    EvaluationRecord,
    Meeting,
    MetaTarget,
    PointTarget,
    TranscriptVersion,
)
from .errors import (
    EmptyTranscript,
    TooFewAnnotators,
    UnknownAnnotator,
    VersionMismatch,
)


@dataclass(frozen=True)
class CoverageReport:
    total_das: int
    das_to_points: int
    das_to_meta: int
    summary_coverage: float
    annotated_coverage: float


@dataclass(frozen=True)
class DocScores:
    """Per-criterion unweighted means plus the separately judged document adequacy."""

    avg_adequacy: Optional[float]
    avg_grammaticality: Optional[float]
    avg_fluency: Optional[float]
    doc_adequacy: Optional[int]
    scored_points: int


def coverage(alignment: Alignment, tv: TranscriptVersion) -> CoverageReport:
    """Fractions of dialogue acts carrying an alignment.

    summary_coverage counts only acts aligned to a summary point;
    annotated_coverage also counts meta-labelled acts.
    """
    if alignment.transcript_version != tv.name:
        raise VersionMismatch(
            f"alignment is over transcript {alignment.transcript_version!r}, got {tv.name!r}"
        )
    total = len(tv.das)
    if total == 0:
        raise EmptyTranscript(f"transcript version {tv.name!r} has no dialogue acts")
    to_points = 0
    to_meta = 0
    for da in tv.das:
        target = alignment.targets.get(da.id)
        if isinstance(target, PointTarget):
            to_points += 1
        elif isinstance(target, MetaTarget):
            to_meta += 1
    return CoverageReport(
        total_das=total,
        das_to_points=to_points,
        das_to_meta=to_meta,
        summary_coverage=to_points / total,
        annotated_coverage=(to_points + to_meta) / total,
    )


def doc_aggregate(record: EvaluationRecord) -> DocScores:
    """Unweighted per-criterion means over the points that carry each score.

    doc_adequacy passes through untouched; it is an independent judgement,
    never derived from the per-point values.
    """
    sums = {"adequacy": 0, "grammaticality": 0, "fluency": 0}
    counts = {"adequacy": 0, "grammaticality": 0, "fluency": 0}
    for scores in record.per_point.values():
        for criterion in sums:
            value = getattr(scores, criterion)
            if value is not None:
                sums[criterion] += value
                counts[criterion] += 1

    def mean(criterion: str) -> Optional[float]:
        if counts[criterion] == 0:
            return None
        return sums[criterion] / counts[criterion]

    return DocScores(
        avg_adequacy=mean("adequacy"),
        avg_grammaticality=mean("grammaticality"),
        avg_fluency=mean("fluency"),
        doc_adequacy=record.doc_adequacy,
        scored_points=len(record.per_point),
    )


def agreement_table(
    alignments: Sequence[Alignment], tv: TranscriptVersion
) -> list[tuple[str, list[object], bool]]:
    """Per act: its id, each alignment's target (None = unaligned), and whether all agree.

    Agreement is strict: every alignment must map the act to the same summary
    point.  A meta label or a missing target anywhere disqualifies the act.
    """
    rows = []
    for da in tv.das:
        targets = [a.targets.get(da.id) for a in alignments]
        first = targets[0]
        agreed = isinstance(first, PointTarget) and all(t == first for t in targets[1:])
        rows.append((da.id, targets, agreed))
    return rows


def iaa(alignments: Sequence[Alignment], tv: TranscriptVersion) -> float:
    """Strict inter-annotator agreement over one transcript version.

    Fraction of acts that every alignment maps to the same summary point,
    out of all acts.  Unaligned or meta-labelled acts never count as agreed.
    """
    if len(alignments) < 2:
        raise TooFewAnnotators(f"agreement needs at least 2 alignments, got {len(alignments)}")
    pair = (alignments[0].transcript_version, alignments[0].summary_version)
    for a in alignments:
        if (a.transcript_version, a.summary_version) != pair:
            raise VersionMismatch(
                f"alignments span different version pairs: {pair} vs "
                f"{(a.transcript_version, a.summary_version)}"
            )
    if tv.name != pair[0]:
        raise VersionMismatch(f"alignments are over transcript {pair[0]!r}, got {tv.name!r}")
    if not tv.das:
        raise EmptyTranscript(f"transcript version {tv.name!r} has no dialogue acts")
    rows = agreement_table(alignments, tv)
    agreed = sum(1 for _, _, ok in rows if ok)
    return agreed / len(rows)


def completeness(record: EvaluationRecord, alignment: Alignment) -> float:
    """Fraction of points with a non-empty hunk that carry all three scores.

    With no non-empty hunks there is nothing to score, so the answer is 1.0.
    """
    if (record.transcript_version, record.summary_version) != (
        alignment.transcript_version,
        alignment.summary_version,
    ):
        raise VersionMismatch(
            "evaluation and alignment refer to different version pairs"
        )
    aligned_points = {
        t.point_id for t in alignment.targets.values() if isinstance(t, PointTarget)
    }
    if not aligned_points:
        return 1.0
    done = 0
    for point_id in aligned_points:
        scores = record.per_point.get(point_id)
        if scores is not None and scores.is_complete():
            done += 1
    return done / len(aligned_points)


def pair_report(
    meeting: Meeting,
    tver: str,
    sver: str,
    annotators: Sequence[str] = (),
    include_iaa: bool = False,
) -> dict:
    """Everything the CLI and the HTTP service report for one version pair.

    Coverage of the working alignment always; per-annotator coverage, score
    averages, and completeness for each named annotator (falling back to the
    working alignment when the annotator has no alignment of their own); and
    strict agreement over the named annotators' alignments when asked for.
    """
    tv = meeting.transcript(tver)
    meeting.summary(sver)
    working = meeting.alignment_for(tver, sver) or Alignment(tver, sver)
    report: dict = {
        "meeting": meeting.id,
        "transcript_version": tver,
        "summary_version": sver,
        "coverage": asdict(coverage(working, tv)),
    }
    per_annotator: dict[str, dict] = {}
    for name in annotators:
        own = meeting.alignment_for(tver, sver, name)
        basis = own if own is not None else working
        record = meeting.evaluations.get((tver, sver, name)) or EvaluationRecord(
            annotator=name, transcript_version=tver, summary_version=sver
        )
        scores = doc_aggregate(record)
        per_annotator[name] = {
            "coverage": asdict(coverage(basis, tv)) if own is not None else None,
            "scores": {
                "avg_adequacy": scores.avg_adequacy,
                "avg_grammaticality": scores.avg_grammaticality,
                "avg_fluency": scores.avg_fluency,
                "doc_adequacy": scores.doc_adequacy,
                "scored_points": scores.scored_points,
            },
            "completeness": completeness(record, basis),
        }
    report["annotators"] = per_annotator
    if include_iaa:
        if len(annotators) < 2:
            raise TooFewAnnotators(
                f"agreement needs at least 2 annotators, got {len(annotators)}"
            )
        own_alignments = []
        for name in annotators:
            own = meeting.alignment_for(tver, sver, name)
            if own is None:
                raise UnknownAnnotator(
                    f"no alignment stored for annotator {name!r} over {tver!r}/{sver!r}"
                )
            own_alignments.append(own)
        report["iaa"] = iaa(own_alignments, tv)
    return report
