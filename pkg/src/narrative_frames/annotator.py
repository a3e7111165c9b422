"""Lexicon-driven frame annotation.

The annotator walks a document's lemmas and marks every longest match
against the taxonomy lexicons (identify_candidates), picks a winning frame
per span (classify_candidates), and pairs nearby assignments whose frames
habitually combine (detect_blends).  annotate_document chains the three.

Matching is greedy left to right over lemma sequences.  Multi-word lexemes
never cross a sentence boundary.  A candidate whose owning frame is listed
in the run configuration's literal_topics is kept but flagged suppressed:
when a corpus is literally about war reporting, "invasion" is coverage, not
metaphor, and it must not count toward frame statistics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import UnknownFrame
from .text_pipeline import segment

DEFAULT_BLEND_WINDOW = 2


# --- configuration --------------------------------------------------------------

@dataclass(frozen=True)
class AnnotatorConfig:
    """Per-run knobs for the annotator.

    literal_topics suppresses frames the corpus discusses literally.
    blend_window_sentences is the maximum sentence distance between two
    assignments that can still form a blend.  min_score drops assignments
    whose matched weight falls below the threshold.
    """

    literal_topics: tuple = ()
    blend_window_sentences: int = DEFAULT_BLEND_WINDOW
    min_score: float = 0.0


def load_annotator_config(path):
    """Read an AnnotatorConfig from a JSON file; missing keys take defaults."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(payload, dict):
        raise ValueError("annotator config must be a JSON object")
    known = {"literal_topics", "blend_window_sentences", "min_score"}
    unknown = set(payload) - known
    if unknown:
        raise ValueError(f"unknown annotator config keys: {sorted(unknown)}")
    topics = payload.get("literal_topics", [])
    if not isinstance(topics, list) or any(not isinstance(t, str) for t in topics):
        raise ValueError("literal_topics must be a list of frame ids")
    window = payload.get("blend_window_sentences", DEFAULT_BLEND_WINDOW)
    if not isinstance(window, int) or isinstance(window, bool) or window < 0:
        raise ValueError("blend_window_sentences must be a non-negative integer")
    min_score = payload.get("min_score", 0.0)
    if not isinstance(min_score, (int, float)) or isinstance(min_score, bool):
        raise ValueError("min_score must be a number")
    return AnnotatorConfig(literal_topics=tuple(topics),
                           blend_window_sentences=window,
                           min_score=float(min_score))


# --- analysis products ------------------------------------------------------------

@dataclass(frozen=True)
class CandidateMetaphor:
    """A lexicon hit in running text, prior to frame classification."""

    doc_id: str
    sentence_index: int
    char_start: int
    char_end: int
    surface: str
    matched_lexeme: str
    key: tuple
    frames: tuple
    suppressed: bool


@dataclass(frozen=True)
class FrameAssignment:
    """A classified candidate: one span, one winning frame.

    status starts at "suggested"; review decisions move it to accepted,
    rejected, or reassigned.  decided_at stays None until a human decides.
    created_at is None for pure analysis output and is stamped by the store
    at ingest time, keeping analysis runs byte-for-byte reproducible.
    """

    assignment_id: str
    doc_id: str
    frame: str
    char_start: int
    char_end: int
    surface: str
    matched_lexeme: str
    sentence_index: int
    score: float
    alternates: tuple
    rationale: str
    status: str = "suggested"
    assigned_frame_after_review: object = None
    annotator_id: object = None
    created_at: object = None
    decided_at: object = None
    revision: int = 1


@dataclass(frozen=True)
class BlendInstance:
    """Two frames joined in close quarters, e.g. an arms-race construction."""

    doc_id: str
    frame_a: str
    frame_b: str
    sentence_start: int
    sentence_end: int
    assignment_ids: tuple


@dataclass(frozen=True)
class AnnotationResult:
    doc_id: str
    candidates: tuple
    assignments: tuple
    blends: tuple


# --- phrase matching ---------------------------------------------------------------

class PhraseIndex:
    """Longest-match lookup of taxonomy lexemes over lemma sequences.

    Keys are tuples of lemmas.  Entries preserve registry order, so the
    first owner of a shared key is the first frame that declared it.
    """

    def __init__(self, taxonomy):
        owners = {}
        for fr in taxonomy.frames:
            for lex in fr.lexemes:
                owners.setdefault(lex.key, []).append((fr.id, lex))
        self._owners = {key: tuple(entries) for key, entries in owners.items()}
        by_first = {}
        for key in self._owners:
            by_first.setdefault(key[0], []).append(key)
        # longest first so greedy scanning prefers the widest span
        self._by_first = {first: tuple(sorted(keys, key=len, reverse=True))
                          for first, keys in by_first.items()}

    def owners(self, key):
        return self._owners.get(key, ())

    def scan(self, tokens):
        """Yield (start, end, key, entries) over a token list, greedily.

        start/end index into tokens; end is exclusive.  Multi-token matches
        must sit inside a single sentence.
        """
        matches = []
        i = 0
        n = len(tokens)
        while i < n:
            candidates = self._by_first.get(tokens[i].lemma)
            hit = None
            if candidates:
                for key in candidates:
                    j = i + len(key)
                    if j > n:
                        continue
                    if any(tokens[i + k].lemma != key[k] for k in range(1, len(key))):
                        continue
                    if tokens[j - 1].sentence_index != tokens[i].sentence_index:
                        continue
                    hit = key
                    break
            if hit is None:
                i += 1
                continue
            end = i + len(hit)
            matches.append((i, end, hit, self._owners[hit]))
            i = end
        return matches


def identify_candidates(document, taxonomy, config=None, index=None):
    """Find every lexicon match in a document, including suppressed ones."""
    if config is None:
        config = AnnotatorConfig()
    if index is None:
        index = PhraseIndex(taxonomy)
    literal = set(config.literal_topics)
    tokens = segment(document.text)
    out = []
    for start, end, key, entries in index.scan(tokens):
        first, last = tokens[start], tokens[end - 1]
        frames = tuple(frame_id for frame_id, _ in entries)
        out.append(CandidateMetaphor(
            doc_id=document.doc_id,
            sentence_index=first.sentence_index,
            char_start=first.char_start,
            char_end=last.char_end,
            surface=document.text[first.char_start:last.char_end],
            matched_lexeme=entries[0][1].text,
            key=key,
            frames=frames,
            suppressed=any(frame_id in literal for frame_id in frames),
        ))
    return out


# --- classification ---------------------------------------------------------------

def _lexeme_for(taxonomy, frame_id, key):
    for lex in taxonomy.frames_by_id[frame_id].lexemes:
        if lex.key == key:
            return lex
    raise UnknownFrame(f"frame {frame_id} does not own lexeme key {key!r}")


def classify_candidates(candidates, taxonomy):
    """Pick a winning frame per unsuppressed candidate.

    When a span's lexeme is owned by several frames the nested frame beats
    its own parent, then higher weight wins, then lower salience_rank, then
    registry order.  Alternates carry the losers, best first.
    """
    assignments = []
    for cand in candidates:
        if cand.suppressed:
            continue
        owners = list(cand.frames)
        parents = {taxonomy.frames_by_id[f].parent for f in owners}
        contenders = [f for f in owners if f not in parents]
        nested_pruned = len(contenders) < len(owners)

        scored = []
        for frame_id in contenders:
            lex = _lexeme_for(taxonomy, frame_id, cand.key)
            scored.append((frame_id, lex))
        scored.sort(key=lambda pair: (-pair[1].weight,
                                      pair[1].salience_rank,
                                      taxonomy.order_index[pair[0]]))
        winner, winner_lex = scored[0]

        if len(cand.frames) == 1:
            rationale = "sole lexicon owner"
        elif nested_pruned and len(contenders) == 1:
            rationale = "nested frame preferred over parent"
        elif len(scored) > 1 and winner_lex.weight > scored[1][1].weight:
            rationale = "highest lexeme weight among owners"
        elif len(scored) > 1 and winner_lex.salience_rank < scored[1][1].salience_rank:
            rationale = "salience rank among tied owners"
        else:
            rationale = "registry order among tied owners"

        alternates = tuple(frame_id for frame_id, _ in scored[1:])
        assignments.append(FrameAssignment(
            assignment_id=f"{cand.doc_id}:{cand.char_start}-{cand.char_end}",
            doc_id=cand.doc_id,
            frame=winner,
            char_start=cand.char_start,
            char_end=cand.char_end,
            surface=cand.surface,
            matched_lexeme=cand.matched_lexeme,
            sentence_index=cand.sentence_index,
            score=winner_lex.weight,
            alternates=alternates,
            rationale=rationale,
        ))
    return assignments


# --- blend detection ---------------------------------------------------------------

def _effective_frame(assignment):
    if assignment.status == "rejected":
        return None
    if assignment.status == "reassigned":
        return assignment.assigned_frame_after_review
    return assignment.frame


def detect_blends(assignments, taxonomy, window_sentences=DEFAULT_BLEND_WINDOW):
    """Pair assignments whose frames list each other as blend partners.

    Only suggested, accepted, and reassigned assignments participate;
    rejected ones are out.  Two assignments blend when they sit within
    window_sentences of each other in the same document and either frame
    names the other in its blend_affinities.  Duplicate (pair, window)
    combinations collapse into one instance with merged evidence.
    """
    live = []
    for a in assignments:
        frame_id = _effective_frame(a)
        if frame_id is not None and frame_id in taxonomy.frames_by_id:
            live.append((a, frame_id))
    live.sort(key=lambda pair: (pair[0].doc_id, pair[0].char_start,
                                pair[0].char_end, pair[1]))

    found = {}
    order = []
    for i, (a, fa) in enumerate(live):
        for b, fb in live[i + 1:]:
            if b.doc_id != a.doc_id:
                continue
            if abs(b.sentence_index - a.sentence_index) > window_sentences:
                continue
            if fa == fb:
                continue
            affinity = (fb in taxonomy.frames_by_id[fa].blend_affinities
                        or fa in taxonomy.frames_by_id[fb].blend_affinities)
            if not affinity:
                continue
            first, second = sorted(
                (fa, fb), key=lambda f: taxonomy.order_index[f])
            lo = min(a.sentence_index, b.sentence_index)
            hi = max(a.sentence_index, b.sentence_index)
            dedup_key = (a.doc_id, first, second, lo, hi)
            if dedup_key in found:
                merged = set(found[dedup_key].assignment_ids)
                merged.update((a.assignment_id, b.assignment_id))
                found[dedup_key] = replace(found[dedup_key],
                                           assignment_ids=tuple(sorted(merged)))
            else:
                found[dedup_key] = BlendInstance(
                    doc_id=a.doc_id, frame_a=first, frame_b=second,
                    sentence_start=lo, sentence_end=hi,
                    assignment_ids=tuple(sorted((a.assignment_id,
                                                 b.assignment_id))))
                order.append(dedup_key)
    return [found[key] for key in sorted(
        order, key=lambda k: (k[0], k[3], k[4], k[1], k[2]))]


def annotate_document(document, taxonomy, config=None, index=None):
    """Run the full pipeline on one document."""
    if config is None:
        config = AnnotatorConfig()
    candidates = identify_candidates(document, taxonomy, config, index=index)
    assignments = [a for a in classify_candidates(candidates, taxonomy)
                   if a.score >= config.min_score]
    blends = detect_blends(assignments, taxonomy,
                           window_sentences=config.blend_window_sentences)
    return AnnotationResult(doc_id=document.doc_id,
                            candidates=tuple(candidates),
                            assignments=tuple(assignments),
                            blends=tuple(blends))


# --- serialization -----------------------------------------------------------------
# Row helpers are the single source of field names for JSONL and the service.

def candidate_to_row(cand):
    return {
        "doc_id": cand.doc_id,
        "sentence_index": cand.sentence_index,
        "char_start": cand.char_start,
        "char_end": cand.char_end,
        "surface": cand.surface,
        "matched_lexeme": cand.matched_lexeme,
        "key": list(cand.key),
        "frames": list(cand.frames),
        "suppressed": cand.suppressed,
    }


def candidate_from_row(row):
    return CandidateMetaphor(
        doc_id=row["doc_id"],
        sentence_index=row["sentence_index"],
        char_start=row["char_start"],
        char_end=row["char_end"],
        surface=row["surface"],
        matched_lexeme=row["matched_lexeme"],
        key=tuple(row["key"]),
        frames=tuple(row["frames"]),
        suppressed=row["suppressed"],
    )


def assignment_to_row(assignment):
    return {
        "assignment_id": assignment.assignment_id,
        "doc_id": assignment.doc_id,
        "frame": assignment.frame,
        "char_start": assignment.char_start,
        "char_end": assignment.char_end,
        "surface": assignment.surface,
        "matched_lexeme": assignment.matched_lexeme,
        "sentence_index": assignment.sentence_index,
        "score": assignment.score,
        "alternates": list(assignment.alternates),
        "rationale": assignment.rationale,
        "status": assignment.status,
        "assigned_frame_after_review": assignment.assigned_frame_after_review,
        "annotator_id": assignment.annotator_id,
        "created_at": assignment.created_at,
        "decided_at": assignment.decided_at,
        "revision": assignment.revision,
    }


def assignment_from_row(row):
    return FrameAssignment(
        assignment_id=row["assignment_id"],
        doc_id=row["doc_id"],
        frame=row["frame"],
        char_start=row["char_start"],
        char_end=row["char_end"],
        surface=row["surface"],
        matched_lexeme=row["matched_lexeme"],
        sentence_index=row["sentence_index"],
        score=row["score"],
        alternates=tuple(row["alternates"]),
        rationale=row["rationale"],
        status=row.get("status", "suggested"),
        assigned_frame_after_review=row.get("assigned_frame_after_review"),
        annotator_id=row.get("annotator_id"),
        created_at=row.get("created_at"),
        decided_at=row.get("decided_at"),
        revision=row.get("revision", 1),
    )


def blend_to_row(blend):
    return {
        "doc_id": blend.doc_id,
        "frame_a": blend.frame_a,
        "frame_b": blend.frame_b,
        "sentence_start": blend.sentence_start,
        "sentence_end": blend.sentence_end,
        "assignment_ids": list(blend.assignment_ids),
    }


def blend_from_row(row):
    return BlendInstance(
        doc_id=row["doc_id"],
        frame_a=row["frame_a"],
        frame_b=row["frame_b"],
        sentence_start=row["sentence_start"],
        sentence_end=row["sentence_end"],
        assignment_ids=tuple(row["assignment_ids"]),
    )
