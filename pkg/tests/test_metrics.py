"""Coverage, score aggregation, strict agreement, completeness."""

from __future__ import annotations

import random

import pytest

from helpers import oracle_coverage, oracle_iaa, random_meeting
from minalign.core import (
    Alignment,
    DialogueAct,
    EvaluationRecord,
    Meeting,
    MetaLabel,
    MetaTarget,
    PointScores,
    PointTarget,
    TranscriptVersion,
)
from minalign.errors import (
    EmptyTranscript,
    TooFewAnnotators,
    UnknownAnnotator,
    VersionMismatch,
)
from minalign.metrics import (
    completeness,
    coverage,
    doc_aggregate,
    iaa,
    pair_report,
)


def transcript(n: int, name: str = "t1") -> TranscriptVersion:
    # built directly so these tests stay independent of Meeting ops
    tv = TranscriptVersion(name=name)
    for i in range(n):
        tv.das.append(DialogueAct(id=f"d{i+1}", speaker="A", text=f"u{i}"))
    return tv


def alignment(targets: dict, name: str = "t1", sver: str = "s1", annotator=None) -> Alignment:
    return Alignment(
        transcript_version=name, summary_version=sver, targets=targets, annotator=annotator
    )


# --- coverage ---

def test_coverage_fixture_half_and_three_quarters():
    tv = transcript(4)
    a = alignment(
        {
            "d1": PointTarget("p1"),
            "d2": PointTarget("p1"),
            "d3": MetaTarget(MetaLabel.SMALL_TALK),
        }
    )
    report = coverage(a, tv)
    assert report.summary_coverage == 0.5
    assert report.annotated_coverage == 0.75
    assert (report.total_das, report.das_to_points, report.das_to_meta) == (4, 2, 1)


def test_coverage_full_alignment_is_exactly_one():
    tv = transcript(5)
    a = alignment({f"d{i+1}": PointTarget("p1") for i in range(5)})
    report = coverage(a, tv)
    assert report.summary_coverage == 1.0
    assert report.annotated_coverage == 1.0
    assert f"{report.summary_coverage:.2f}" == "1.00"


def test_coverage_empty_alignment_is_zero():
    tv = transcript(3)
    report = coverage(alignment({}), tv)
    assert report.summary_coverage == 0.0
    assert report.annotated_coverage == 0.0


def test_coverage_errors():
    with pytest.raises(EmptyTranscript):
        coverage(alignment({}), transcript(0))
    with pytest.raises(VersionMismatch):
        coverage(alignment({}, name="other"), transcript(3))


def test_coverage_matches_oracle_on_random_alignments():
    rng = random.Random(42)
    for _ in range(200):
        n = rng.randint(1, 8)
        tv = transcript(n)
        targets = {}
        for da in tv.das:
            roll = rng.random()
            if roll < 0.4:
                targets[da.id] = PointTarget(f"p{rng.randint(1, 3)}")
            elif roll < 0.6:
                targets[da.id] = MetaTarget(rng.choice(list(MetaLabel)))
        a = alignment(targets)
        report = coverage(a, tv)
        expected_summary, expected_annotated = oracle_coverage(a, tv)
        assert report.summary_coverage == expected_summary
        assert report.annotated_coverage == expected_annotated


# --- doc_aggregate ---

def record_for(per_point: dict, doc=None) -> EvaluationRecord:
    return EvaluationRecord(
        annotator="a1",
        transcript_version="t1",
        summary_version="s1",
        per_point=per_point,
        doc_adequacy=doc,
    )


def test_doc_aggregate_unweighted_means():
    record = record_for(
        {
            "p1": PointScores(5, 4, 5),
            "p2": PointScores(4, 4, 5),
            "p3": PointScores(3, 5, 5),
        },
        doc=2,
    )
    result = doc_aggregate(record)
    assert result.avg_adequacy == (5 + 4 + 3) / 3
    assert result.avg_grammaticality == (4 + 4 + 5) / 3
    assert result.avg_fluency == 5.0
    assert result.doc_adequacy == 2  # passed through, never recomputed
    assert result.scored_points == 3


def test_doc_aggregate_partial_criteria_average_over_present_only():
    record = record_for(
        {
            "p1": PointScores(5, None, 1),
            "p2": PointScores(2, 3, None),
            "p3": PointScores(None, 4, None),
        }
    )
    result = doc_aggregate(record)
    assert result.avg_adequacy == (5 + 2) / 2
    assert result.avg_grammaticality == (3 + 4) / 2
    assert result.avg_fluency == 1.0
    assert result.doc_adequacy is None


def test_doc_aggregate_empty_record():
    result = doc_aggregate(record_for({}))
    assert result.avg_adequacy is None
    assert result.avg_grammaticality is None
    assert result.avg_fluency is None
    assert result.doc_adequacy is None
    assert result.scored_points == 0


def test_doc_adequacy_not_derived_even_when_uniform():
    record = record_for({"p1": PointScores(5, 5, 5), "p2": PointScores(5, 5, 5)})
    assert doc_aggregate(record).doc_adequacy is None


# --- iaa ---

def test_iaa_fixture_one_quarter():
    # 4 acts, 3 annotators: only d1 agreed by everyone; d2 has a meta label
    # at one annotator, d3 is unaligned at one, d4 splits between two points.
    tv = transcript(4)
    a1 = alignment(
        {
            "d1": PointTarget("p1"),
            "d2": PointTarget("p2"),
            "d3": PointTarget("p1"),
            "d4": PointTarget("p1"),
        },
        annotator="a1",
    )
    a2 = alignment(
        {
            "d1": PointTarget("p1"),
            "d2": MetaTarget(MetaLabel.ORGANIZATIONAL),
            "d3": PointTarget("p1"),
            "d4": PointTarget("p2"),
        },
        annotator="a2",
    )
    a3 = alignment(
        {
            "d1": PointTarget("p1"),
            "d2": PointTarget("p2"),
            "d4": PointTarget("p1"),
        },
        annotator="a3",
    )
    assert iaa([a1, a2, a3], tv) == 0.25


def test_iaa_of_identical_alignments_equals_summary_coverage():
    rng = random.Random(9)
    for _ in range(50):
        n = rng.randint(1, 8)
        tv = transcript(n)
        targets = {}
        for da in tv.das:
            roll = rng.random()
            if roll < 0.5:
                targets[da.id] = PointTarget(f"p{rng.randint(1, 3)}")
            elif roll < 0.65:
                targets[da.id] = MetaTarget(rng.choice(list(MetaLabel)))
        copies = [
            alignment(dict(targets), annotator=f"a{i}") for i in range(rng.randint(2, 4))
        ]
        assert iaa(copies, tv) == coverage(copies[0], tv).summary_coverage


def test_iaa_order_does_not_matter():
    tv = transcript(5)
    rng = random.Random(3)
    alignments = []
    for i in range(3):
        targets = {
            f"d{j+1}": PointTarget(f"p{rng.randint(1, 2)}")
            for j in range(5)
            if rng.random() < 0.8
        }
        alignments.append(alignment(targets, annotator=f"a{i}"))
    baseline = iaa(alignments, tv)
    shuffled = list(alignments)
    rng.shuffle(shuffled)
    assert iaa(shuffled, tv) == baseline
    assert baseline == oracle_iaa(alignments, tv)


def test_iaa_errors():
    tv = transcript(2)
    one = alignment({}, annotator="a1")
    with pytest.raises(TooFewAnnotators):
        iaa([one], tv)
    other_pair = alignment({}, sver="s2", annotator="a2")
    with pytest.raises(VersionMismatch):
        iaa([one, other_pair], tv)
    with pytest.raises(VersionMismatch):
        iaa([one, alignment({}, annotator="a2")], transcript(2, name="t9"))
    with pytest.raises(EmptyTranscript):
        iaa([one, alignment({}, annotator="a2")], transcript(0))


# --- completeness ---

def test_completeness_counts_only_non_empty_hunks():
    a = alignment({"d1": PointTarget("p1"), "d2": PointTarget("p2")})
    record = record_for({"p1": PointScores(3, 3, 3), "p3": PointScores(5, 5, 5)})
    # p1 fully scored, p2 not scored; p3 is scored but has no hunk
    assert completeness(record, a) == 0.5


def test_completeness_requires_all_three_scores():
    a = alignment({"d1": PointTarget("p1")})
    record = record_for({"p1": PointScores(3, 3, None)})
    assert completeness(record, a) == 0.0


def test_completeness_vacuous_is_one():
    a = alignment({"d1": MetaTarget(MetaLabel.SMALL_TALK)})
    assert completeness(record_for({}), a) == 1.0


def test_completeness_version_mismatch():
    a = alignment({}, sver="s2")
    with pytest.raises(VersionMismatch):
        completeness(record_for({}), a)


# --- pair_report ---

def full_meeting() -> Meeting:
    m = Meeting("m1")
    m.add_transcript("t1")
    m.add_summary("s1")
    ids = [m.append_da("t1", "A", f"u{i}") for i in range(4)]
    p0 = m.append_point("s1", "one")
    p1 = m.append_point("s1", "two")
    m.align("t1", "s1", [ids[0], ids[1]], PointTarget(p0))
    m.align("t1", "s1", [ids[2]], MetaTarget(MetaLabel.SMALL_TALK))
    for name in ("alice", "bob"):
        m.put_alignment(
            Alignment(
                "t1", "s1",
                {ids[0]: PointTarget(p0), ids[1]: PointTarget(p0)},
                annotator=name,
            )
        )
        m.set_scores("t1", "s1", name, p0, 5, 5, 5)
    m.set_doc_adequacy("t1", "s1", "alice", 4)
    return m


def test_pair_report_sections():
    m = full_meeting()
    report = pair_report(m, "t1", "s1", annotators=["alice", "bob"], include_iaa=True)
    assert report["coverage"]["summary_coverage"] == 0.5
    assert report["coverage"]["annotated_coverage"] == 0.75
    alice = report["annotators"]["alice"]
    assert alice["coverage"]["summary_coverage"] == 0.5
    assert alice["scores"]["avg_adequacy"] == 5.0
    assert alice["scores"]["doc_adequacy"] == 4
    assert alice["completeness"] == 1.0
    assert report["iaa"] == 0.5  # both annotators agree on d1, d2 of 4


def test_pair_report_annotator_without_own_alignment_uses_working():
    m = full_meeting()
    m.set_scores("t1", "s1", "carol", points_of(m), 1, 2, 3)
    report = pair_report(m, "t1", "s1", annotators=["carol"])
    carol = report["annotators"]["carol"]
    assert carol["coverage"] is None
    assert carol["scores"]["avg_fluency"] == 3.0
    # completeness judged against the working alignment's hunks: p0 has a hunk
    # but carol scored only p0 fully, so 1/1
    assert carol["completeness"] == 1.0


def points_of(m: Meeting) -> str:
    return m.summary("s1").points[0].id


def test_pair_report_iaa_demands_annotators():
    m = full_meeting()
    with pytest.raises(TooFewAnnotators):
        pair_report(m, "t1", "s1", annotators=["alice"], include_iaa=True)
    with pytest.raises(UnknownAnnotator):
        pair_report(m, "t1", "s1", annotators=["alice", "ghost"], include_iaa=True)


def test_metrics_full_precision_no_rounding():
    record = record_for({f"p{i}": PointScores(adequacy=v, grammaticality=None, fluency=None)
                         for i, v in enumerate([1, 2, 2])})
    result = doc_aggregate(record)
    assert result.avg_adequacy == 5 / 3  # not rounded anywhere in the library


def test_random_meetings_report_cleanly():
    rng = random.Random(17)
    for _ in range(20):
        m = random_meeting(rng)
        tver = next(iter(m.transcripts))
        sver = next(iter(m.summaries))
        if not m.transcripts[tver].das:
            continue
        report = pair_report(m, tver, sver)
        cov = report["coverage"]
        assert 0.0 <= cov["summary_coverage"] <= cov["annotated_coverage"] <= 1.0
