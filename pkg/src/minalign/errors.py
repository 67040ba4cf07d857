"""Exception types shared across the package.

Every domain failure raises a subclass of MinalignError so callers (HTTP
layer, CLI) can map errors to status codes without string matching.
"""

from __future__ import annotations


class MinalignError(Exception):
    """Base class for all domain errors."""


# --- naming / field validation ---

class InvalidName(MinalignError):
    """A meeting, version, or annotator name violates the allowed pattern."""


class InvalidField(MinalignError):
    """A field value violates a structural constraint (empty speaker, raw newline, ...)."""


# --- editing operations ---

class UnknownVersion(MinalignError):
    """No transcript or summary version with the given name."""


class UnknownDa(MinalignError):
    """No dialogue act with the given id in the transcript version."""


class UnknownPoint(MinalignError):
    """No summary point with the given id in the summary version."""


class OffsetOutOfRange(MinalignError):
    """Split offset does not fall strictly inside the dialogue act text."""


class IndexOutOfRange(MinalignError):
    """Insert position outside [0, length]."""


class NotAdjacent(MinalignError):
    """Merge operands are not consecutive dialogue acts."""


class SpeakerMismatch(MinalignError):
    """Merge operands have different speakers."""


class ConflictingAlignment(MinalignError):
    """Merge operands are aligned to different targets in some alignment."""


class InvalidTimes(MinalignError):
    """Timestamps negative or start after end."""


class InvalidScore(MinalignError):
    """Evaluation score outside the 1..5 range."""


class InvalidPattern(MinalignError):
    """Search pattern does not compile under the supported regex dialect."""


# --- metrics ---

class EmptyTranscript(MinalignError):
    """Metric undefined over a transcript with no dialogue acts."""


class VersionMismatch(MinalignError):
    """Inputs refer to different version pairs."""


class TooFewAnnotators(MinalignError):
    """Agreement needs at least two alignments."""


class UnknownAnnotator(MinalignError):
    """No alignment or evaluation stored for the named annotator."""


# --- persistence ---

class IoFailure(MinalignError):
    """Filesystem operation failed while saving."""


class EmptyDaText(MinalignError):
    """A dialogue act with empty text cannot be persisted."""


class MissingFile(MinalignError):
    """A required file is absent from the corpus tree."""


class DanglingReference(MinalignError):
    """A stored index refers to a row or version that does not exist."""


class ParseError(MinalignError):
    """A stored file is malformed.

    Carries enough position information to point a person at the problem.
    """

    def __init__(self, file: str, line: int | None, column: int | None, reason: str):
        self.file = file
        self.line = line
        self.column = column
        self.reason = reason
        loc = file
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {reason}")


# --- http service ---

class NotFound(MinalignError):
    """No meeting with the given id."""


class Conflict(MinalignError):
    """Mutation based on a stale revision."""

    def __init__(self, current_revision: int):
        self.current_revision = current_revision
        super().__init__(f"stale revision, current is {current_revision}")


class NoMedia(MinalignError):
    """Meeting has no media recording attached."""


class RangeNotSatisfiable(MinalignError):
    """Requested byte range lies outside the media file."""
