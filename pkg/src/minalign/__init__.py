"""Backend for aligning meeting transcripts with their minutes.

Core pieces: an in-memory editing model (core), pure metrics over alignments
and evaluations (metrics), a plain-file corpus format (store), an HTTP
service with optimistic concurrency (api), and a command line front end (cli).
"""

from .core import (
    Alignment,
    AlignmentTarget,
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
    search,
)
from .metrics import completeness, coverage, doc_aggregate, iaa, pair_report
from .store import Diagnostic, load_meeting, save_meeting, validate

__all__ = [
    "Alignment",
    "AlignmentTarget",
    "DialogueAct",
    "Diagnostic",
    "EvaluationRecord",
    "Meeting",
    "MetaLabel",
    "MetaTarget",
    "PointScores",
    "PointTarget",
    "SummaryPoint",
    "SummaryVersion",
    "TranscriptVersion",
    "completeness",
    "coverage",
    "doc_aggregate",
    "iaa",
    "load_meeting",
    "pair_report",
    "save_meeting",
    "search",
    "validate",
]

__version__ = "0.1.0"
