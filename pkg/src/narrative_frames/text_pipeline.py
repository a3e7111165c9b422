"""Deterministic segmentation and lemmatization.

Everything downstream (lexicon matching, token counts, densities) depends on
this module producing the same output for the same input, every run, on any
machine. No ML models, no locale calls: a compiled token regex, a punctuation
sentence splitter with an abbreviation guard, and a rule lemmatizer backed by
an exception table.

Lemmatization runs suffix rules to a fixpoint, which makes it idempotent by
construction: lemmatize(lemmatize(s)) == lemmatize(s) for every string.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

# --- tokenization -----------------------------------------------------------

# Word tokens: letter/digit runs, keeping internal hyphens and apostrophes so
# "open-source", "fast-track" and "we're" stay single tokens. Underscore is
# excluded from the word class on purpose.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")

# Sentence terminators followed by whitespace; the next printable character
# decides whether the run is a real boundary.
_TERMINATOR_RE = re.compile(r"[.!?]+")
_OPENERS = "\"'“”‘’«([{"

# Words that take a trailing period without ending the sentence.
_ABBREVIATIONS = frozenset({
    "dr", "mr", "mrs", "ms", "prof", "rev", "gen", "sen", "rep", "hon",
    "jr", "sr", "st", "vs", "etc", "al", "fig", "inc", "ltd", "co", "corp",
    "dept", "approx", "cf", "ca",
})


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    char_start: int
    char_end: int
    sentence_index: int


def _is_boundary(text: str, term_end: int, word_before: str) -> bool:
    """Decide whether the terminator ending at term_end closes a sentence."""
    if "." in text[term_end - 1] and word_before:
        low = word_before.lower()
        if low in _ABBREVIATIONS or len(word_before) == 1:
            return False
    i = term_end
    n = len(text)
    if i >= n or not text[i].isspace():
        return False
    while i < n and text[i].isspace():
        i += 1
    while i < n and text[i] in _OPENERS:
        i += 1
    return i < n and text[i].isupper()


def _sentence_starts(text: str) -> list[int]:
    """Offsets where sentences 2..n begin (sentence 1 starts at 0)."""
    starts = []
    for m in _TERMINATOR_RE.finditer(text):
        wm = None
        for wmatch in _TOKEN_RE.finditer(text, max(0, m.start() - 40), m.start()):
            wm = wmatch
        word_before = wm.group() if wm is not None and wm.end() == m.start() else ""
        if not _is_boundary(text, m.end(), word_before):
            continue
        i = m.end()
        n = len(text)
        while i < n and text[i].isspace():
            i += 1
        starts.append(i)
    return starts


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Half-open character spans of sentences, covering the whole text."""
    if not text:
        return []
    starts = [0] + _sentence_starts(text)
    spans = []
    for i, s in enumerate(starts):
        e = starts[i + 1] if i + 1 < len(starts) else len(text)
        spans.append((s, e))
    return spans


def segment(text: str) -> list[Token]:
    """Split text into word tokens with char offsets and sentence indices."""
    starts = _sentence_starts(text)
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        sent = bisect_right(starts, m.start())
        tokens.append(Token(
            surface=m.group(),
            lemma=lemmatize(m.group()),
            char_start=m.start(),
            char_end=m.end(),
            sentence_index=sent,
        ))
    return tokens


def count_tokens(text: str) -> int:
    return sum(1 for _ in _TOKEN_RE.finditer(text))


def count_sentences(text: str) -> int:
    if not text.strip():
        return 0
    return len(_sentence_starts(text)) + 1


# --- lemmatization ----------------------------------------------------------

_VOWELS = set("aeiouy")

# Irregular forms plus every registry inflection the suffix rules mangle.
# Identity entries protect words that merely look inflected ("sibling",
# "canvas", "sacred") from the rules.
_EXCEPTIONS = {
    # copulas and high-frequency irregulars
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "being": "be", "been": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "goes": "go", "went": "go", "gone": "go", "going": "go",
    "says": "say", "said": "say", "saying": "say",
    "made": "make", "making": "make",
    "got": "get", "gotten": "get", "getting": "get",
    "came": "come", "coming": "come",
    "gave": "give", "given": "give", "giving": "give",
    "knew": "know", "known": "know", "knowing": "know",
    "thought": "think", "saw": "see", "seen": "see",
    "ran": "run", "took": "take", "taken": "take", "taking": "take",
    "stood": "stand", "understood": "understand",
    "held": "hold", "found": "find", "felt": "feel",
    "fell": "fall", "fallen": "fall",
    "spoke": "speak", "spoken": "speak",
    "broke": "break", "broken": "break",
    "grew": "grow", "grown": "grow",
    "built": "build", "wrote": "write", "written": "write",
    "writing": "write", "rewrote": "rewrite", "rewritten": "rewrite",
    "rewriting": "rewrite",
    "won": "win", "lost": "lose", "losing": "lose",
    "bought": "buy", "sold": "sell",
    "dying": "die", "lying": "lie", "tying": "tie",
    "men": "man", "women": "woman", "children": "child",
    "feet": "foot", "teeth": "tooth", "mice": "mouse", "wolves": "wolf",
    # combat vocabulary
    "fought": "fight", "shot": "shoot", "led": "lead", "sped": "speed",
    "overcame": "overcome", "overcoming": "overcome",
    "marshalling": "marshal", "marshalled": "marshal",
    "marshaling": "marshal", "marshaled": "marshal",
    "combating": "combat", "combated": "combat",
    "combatting": "combat", "combatted": "combat",
    "damaging": "damage", "damaged": "damage",
    "invading": "invade", "invaded": "invade",
    # movement and race vocabulary
    "accelerating": "accelerate", "accelerated": "accelerate",
    "raced": "race", "navigating": "navigate", "navigated": "navigate",
    # other registry verbs the rules cannot restore
    "taming": "tame", "tamed": "tame",
    "faked": "fake", "faking": "fake",
    "baked": "bake", "baking": "bake",
    "staged": "stage", "staging": "stage",
    "traded": "trade", "trading": "trade",
    "quarantined": "quarantine", "quarantining": "quarantine",
    "cultivating": "cultivate", "cultivated": "cultivate",
    "renovating": "renovate", "renovated": "renovate",
    "litigating": "litigate", "litigated": "litigate",
    "micromanaged": "micromanage", "micromanaging": "micromanage",
    "emancipated": "emancipate", "emancipating": "emancipate",
    "orchestrated": "orchestrate", "orchestrating": "orchestrate",
    "crystallized": "crystallize", "crystallizing": "crystallize",
    "patrolled": "patrol", "patrolling": "patrol",
    "united": "unite",
    # words the suffix rules would mangle; map to themselves
    "sibling": "sibling", "siblings": "sibling",
    "uncharted": "uncharted", "untamed": "untamed", "half-baked": "half-baked",
    "canvas": "canvas", "achilles": "achilles", "sacred": "sacred",
    "lens": "lens", "bias": "bias", "news": "news",
    "series": "series", "species": "species", "movies": "movie",
    "during": "during", "nothing": "nothing", "something": "something",
    "anything": "anything", "everything": "everything",
    "morning": "morning", "evening": "evening", "ceiling": "ceiling",
    "hundred": "hundred", "indeed": "indeed", "hatred": "hatred",
    "kindred": "kindred", "wicked": "wicked", "beloved": "beloved",
    "always": "always", "perhaps": "perhaps", "whereas": "whereas",
}


def _restore_e(stem: str) -> str:
    """Undo e-dropping after stripping -ing/-ed where it is safe to guess."""
    if stem.endswith(("c", "v", "u")):
        return stem + "e"
    # consonant cluster + l: battl -> battle, shackl -> shackle
    if (len(stem) >= 3 and stem[-1] == "l"
            and stem[-2] not in _VOWELS and stem[-3] not in _VOWELS):
        return stem + "e"
    return stem


def _strip_once(word: str) -> str:
    """One pass of suffix rules; returns the input when nothing applies."""
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]
    if word.endswith("ies") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("ied") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("es") and len(word) >= 4 and (
            word[-3] in "sxz" or word[-4:-2] in ("ch", "sh")):
        stem = word[:-2]
        # -ze verbs take -zes (crystallizes, blazes); keep the e
        if stem.endswith("z") and not stem.endswith("zz"):
            return stem + "e"
        return stem
    if (word.endswith("s") and len(word) >= 4
            and not word.endswith(("ss", "us", "is", "'s", "’s"))):
        return word[:-1]
    if word.endswith("ing") and len(word) >= 6:
        stem = word[:-3]
        if _VOWELS & set(stem):
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
                return stem[:-1]
            return _restore_e(stem)
        return word
    if word.endswith("ed") and len(word) >= 6:
        stem = word[:-2]
        if _VOWELS & set(stem):
            if stem.endswith("e"):
                return stem  # freed -> free, agreed -> agree
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
                return stem[:-1]
            return _restore_e(stem)
        return word
    return word


@lru_cache(maxsize=262144)
def lemmatize(surface: str) -> str:
    """Lowercased dictionary form of a single token. Total and idempotent."""
    word = surface.lower()
    if word.endswith(("'s", "’s")) and len(word) > 2:
        word = word[:-2]
    # run to fixpoint so a second lemmatize call can never change the result
    for _ in range(len(word) + 1):
        nxt = _strip_once(word)
        if nxt == word:
            break
        word = nxt
    return word


def lemma_key(phrase: str) -> tuple[str, ...]:
    """Lemma sequence for a lexicon entry, using the same rules as free text."""
    return tuple(lemmatize(m.group()) for m in _TOKEN_RE.finditer(phrase))
