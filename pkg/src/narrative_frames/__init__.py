"""Frame-based metaphor analysis for text corpora.

The package identifies figurative language by matching a curated lexicon of
49 narrative frames against lemmatized text, codes TOPIC-is-VEHICLE
statements, detects frame blends, and supports the full review workflow:
append-only assignment storage, adjudication with an audit trail,
distribution and keyness reports, and inter-annotator agreement.
"""

from .analytics import (REJECT, ComparisonResult, ComparisonRow,
                        FrameDistribution, FrameStat, KappaResult,
                        cohens_kappa, compare_corpora, frame_distribution)
from .annotator import (AnnotatorConfig, AnnotationResult, BlendInstance,
                        CandidateMetaphor, FrameAssignment, PhraseIndex,
                        annotate_document, classify_candidates, detect_blends,
                        identify_candidates, load_annotator_config)
from .corpus import Corpus, Document, read_documents
from .errors import (ConflictingConcurrentWrite, CorpusExists,
                     DegenerateMarginals, DuplicateDocument, EmptySide,
                     ForeignAssignment, InvalidDecision, InvariantViolation,
                     ItemMismatch, MalformedArchive, MalformedRegistry,
                     NarrativeFramesError, NoCopula, NoFrameEvidence,
                     TaxonomyMismatch, UnknownAssignment, UnknownCorpus,
                     UnknownDocument, UnknownFrame, UnmappedLabel)
from .statements import (CodedStatement, ParsedStatement, code_statement,
                         parse_statement)
from .store import CorpusStore
from .taxonomy import (Frame, Lexeme, Taxonomy, load_default_taxonomy,
                       load_taxonomy, normalize_label, parse_taxonomy,
                       serialize_taxonomy)

__version__ = "0.1.0"

__all__ = [
    "AnnotationResult", "AnnotatorConfig", "BlendInstance",
    "CandidateMetaphor", "CodedStatement", "ComparisonResult",
    "ComparisonRow", "ConflictingConcurrentWrite", "Corpus", "CorpusExists",
    "CorpusStore", "DegenerateMarginals", "Document", "DuplicateDocument",
    "EmptySide", "ForeignAssignment", "Frame", "FrameAssignment",
    "FrameDistribution", "FrameStat", "InvalidDecision",
    "InvariantViolation", "ItemMismatch", "KappaResult", "Lexeme",
    "MalformedArchive", "MalformedRegistry", "NarrativeFramesError",
    "NoCopula", "NoFrameEvidence", "ParsedStatement", "PhraseIndex",
    "REJECT", "Taxonomy", "TaxonomyMismatch", "UnknownAssignment",
    "UnknownCorpus", "UnknownDocument", "UnknownFrame", "UnmappedLabel",
    "annotate_document", "classify_candidates", "code_statement",
    "cohens_kappa", "compare_corpora", "detect_blends", "frame_distribution",
    "identify_candidates", "load_annotator_config", "load_default_taxonomy",
    "load_taxonomy", "normalize_label", "parse_statement", "parse_taxonomy",
    "read_documents", "serialize_taxonomy",
]
