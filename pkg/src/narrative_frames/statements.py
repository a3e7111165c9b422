"""Coding of conceptual-metaphor statements of the form "TOPIC is VEHICLE".

parse_statement splits the statement at the first standalone copula and
code_statement scores the vehicle phrase against the frame lexicons.  Ties
go first to the frame whose evidence contains the vehicle's head noun, then
to the better salience rank, then to registry order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .annotator import PhraseIndex
from .errors import EmptySide, NoCopula, NoFrameEvidence
from .text_pipeline import segment

_COPULA_RE = re.compile(r"\b(?:is|are)\b", re.IGNORECASE)

# head-noun extraction: cut the vehicle at its first preposition, then drop
# determiners; the last token left is the head
_PREPOSITIONS = frozenset((
    "of", "to", "for", "against", "in", "on", "at", "by", "with", "from",
    "into", "over", "under", "toward", "through", "along", "across",
    "within", "without", "upon", "about", "between", "behind", "beyond",
))
_DETERMINERS = frozenset(("a", "an", "the", "this", "that", "these", "those"))


@dataclass(frozen=True)
class ParsedStatement:
    text: str
    topic: str
    vehicle: str
    ambiguous_split: bool


@dataclass(frozen=True)
class CodedStatement:
    topic: str
    vehicle: str
    frame: str
    score: float
    alternates: tuple
    rationale: str
    ambiguous_split: bool


def parse_statement(text):
    """Split a statement at its first standalone "is" or "are".

    Sets ambiguous_split when more than one copula is present; the split
    still happens at the first one.  Raises NoCopula or EmptySide.
    """
    hits = list(_COPULA_RE.finditer(text))
    if not hits:
        raise NoCopula(f"no standalone 'is' or 'are' in {text!r}")
    first = hits[0]
    topic = text[:first.start()].strip()
    vehicle = text[first.end():].strip()
    if not topic:
        raise EmptySide(f"empty topic side in {text!r}")
    if not vehicle:
        raise EmptySide(f"empty vehicle side in {text!r}")
    return ParsedStatement(text=text, topic=topic, vehicle=vehicle,
                           ambiguous_split=len(hits) > 1)


def _head_lemma(tokens):
    kept = []
    for tok in tokens:
        if tok.lemma in _PREPOSITIONS:
            break
        kept.append(tok)
    kept = [tok for tok in kept if tok.lemma not in _DETERMINERS]
    if not kept:
        return None
    return kept[-1].lemma


def code_statement(statement, taxonomy, index=None):
    """Code one statement onto the taxonomy.

    Accepts either raw text or a ParsedStatement.  Every frame whose lexemes
    match inside the vehicle phrase is scored by summed lexeme weight; the
    losers end up in alternates, best first.  Raises NoFrameEvidence when
    the vehicle offers nothing to score.
    """
    if isinstance(statement, str):
        statement = parse_statement(statement)
    if index is None:
        index = PhraseIndex(taxonomy)

    tokens = segment(statement.vehicle)
    scores = {}
    matched_keys = {}
    matched_ranks = {}
    for start, end, key, entries in index.scan(tokens):
        for frame_id, lex in entries:
            scores[frame_id] = scores.get(frame_id, 0.0) + lex.weight
            matched_keys.setdefault(frame_id, set()).add(key)
            best = matched_ranks.get(frame_id)
            if best is None or lex.salience_rank < best:
                matched_ranks[frame_id] = lex.salience_rank

    if not scores:
        raise NoFrameEvidence(
            f"no lexicon evidence in vehicle {statement.vehicle!r}")

    top = max(scores.values())
    tied = [f for f, s in scores.items() if s == top]
    tied.sort(key=lambda f: taxonomy.order_index[f])

    if len(tied) == 1:
        winner = tied[0]
        rationale = "lexicon match"
    else:
        head = _head_lemma(tokens)
        by_head = [f for f in tied
                   if head is not None
                   and any(head in key for key in matched_keys[f])]
        if len(by_head) == 1:
            winner = by_head[0]
            rationale = "head noun salience"
        else:
            pool = by_head if by_head else tied
            best_rank = min(matched_ranks[f] for f in pool)
            by_rank = [f for f in pool if matched_ranks[f] == best_rank]
            winner = by_rank[0]
            rationale = ("salience rank" if len(by_rank) == 1
                         else "registry order")

    alternates = tuple(sorted(
        (f for f in scores if f != winner),
        key=lambda f: (-scores[f], taxonomy.order_index[f])))

    return CodedStatement(
        topic=statement.topic,
        vehicle=statement.vehicle,
        frame=winner,
        score=scores[winner],
        alternates=alternates,
        rationale=rationale,
        ambiguous_split=statement.ambiguous_split,
    )


def coded_statement_to_row(coded):
    return {
        "topic": coded.topic,
        "vehicle": coded.vehicle,
        "frame": coded.frame,
        "score": coded.score,
        "alternates": list(coded.alternates),
        "rationale": coded.rationale,
        "ambiguous_split": coded.ambiguous_split,
    }
