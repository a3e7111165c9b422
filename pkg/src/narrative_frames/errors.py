"""Shared error types.

Every domain error raised by this package derives from NarrativeFramesError so
callers (CLI, service) can map the whole family to exit code 1 / an HTTP status
without enumerating modules.
"""

from __future__ import annotations


class NarrativeFramesError(Exception):
    """Base class for all domain errors."""

    code = "domain_error"


# --- taxonomy ---------------------------------------------------------------

class MalformedRegistry(NarrativeFramesError):
    """Registry file is not parseable as the expected JSON shape."""

    code = "malformed_registry"


class InvariantViolation(NarrativeFramesError):
    """Registry payload breaks a structural invariant."""

    code = "invariant_violation"


class UnknownFrame(NarrativeFramesError):
    """Frame slug not present in the loaded taxonomy."""

    code = "unknown_frame"


class UnmappedLabel(NarrativeFramesError):
    """Prior-study label with no crosswalk row and no matching frame id."""

    code = "unmapped_label"


# --- statements -------------------------------------------------------------

class NoCopula(NarrativeFramesError):
    """Statement contains no standalone 'is'/'are' token."""

    code = "no_copula"


class EmptySide(NarrativeFramesError):
    """Copula sits at the edge, leaving topic or vehicle empty."""

    code = "empty_side"


class NoFrameEvidence(NarrativeFramesError):
    """Vehicle domain matched no lexeme of any frame."""

    code = "no_frame_evidence"


# --- analytics --------------------------------------------------------------

class ForeignAssignment(NarrativeFramesError):
    """Assignment references a document outside the corpus under analysis."""

    code = "foreign_assignment"


class TaxonomyMismatch(NarrativeFramesError):
    """Comparison requested across different taxonomy versions."""

    code = "taxonomy_mismatch"


class ItemMismatch(NarrativeFramesError):
    """Agreement requested over decision lists that do not cover the same items."""

    code = "item_mismatch"


class DegenerateMarginals(NarrativeFramesError):
    """Expected agreement is 1, kappa undefined for this label distribution."""

    code = "degenerate_marginals"


# --- store ------------------------------------------------------------------

class UnknownCorpus(NarrativeFramesError):
    code = "unknown_corpus"


class UnknownDocument(NarrativeFramesError):
    code = "unknown_document"


class UnknownAssignment(NarrativeFramesError):
    code = "unknown_assignment"


class DuplicateDocument(NarrativeFramesError):
    """doc_id already ingested (doc ids are unique per store)."""

    code = "duplicate_document"


class CorpusExists(NarrativeFramesError):
    """Import would overwrite an existing corpus id."""

    code = "corpus_exists"


class ConflictingConcurrentWrite(NarrativeFramesError):
    """Writer lost an optimistic-concurrency race and must re-read."""

    code = "conflicting_concurrent_write"


class MalformedArchive(NarrativeFramesError):
    """Export archive is unreadable or missing required members."""

    code = "malformed_archive"


class InvalidDecision(NarrativeFramesError):
    """Decision verb unknown, or reassign without a target frame."""

    code = "invalid_decision"
