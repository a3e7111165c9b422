"""Frame taxonomy registry: loading, validation, serialization, normalization.

The registry is a JSON document carrying a 49-frame typology.  Each frame
owns a weighted lexicon and an optional parent (one level of nesting only),
plus a sketch of the framing work the frame performs and the frames it
habitually blends with.  A crosswalk table maps frame labels used by earlier
coding schemes onto this typology.

All structural rules are enforced at load time so downstream code can take a
well-formed taxonomy for granted.  Syntax problems raise MalformedRegistry;
semantic problems raise InvariantViolation with a message naming the
offending frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

from .errors import InvariantViolation, MalformedRegistry, UnknownFrame, UnmappedLabel
from .text_pipeline import lemma_key

EXPECTED_FRAME_COUNT = 49

_REGISTRY_RESOURCE = "narrative_frames_registry.json"

_FRAME_KEYS = ("id", "parent", "description", "lexemes", "framing_functions",
               "blend_affinities")
_LEXEME_KEYS = ("text", "weight", "salience_rank", "provenance")
_CROSSWALK_KEYS = ("label", "frame", "provisional", "source_note")


# --- data model ---------------------------------------------------------------

@dataclass(frozen=True)
class Lexeme:
    """One lexicon entry.  `key` is the lemmatized phrase used for matching."""

    text: str
    weight: float
    salience_rank: int
    provenance: str
    key: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", lemma_key(self.text))


@dataclass(frozen=True)
class Frame:
    id: str
    parent: Union[str, None]
    description: str
    lexemes: tuple
    framing_functions: str
    blend_affinities: tuple


@dataclass(frozen=True)
class CrosswalkEntry:
    label: str
    frame: str
    provisional: bool
    source_note: str


@dataclass(frozen=True)
class LabelMapping:
    """Result of normalizing an external label against the taxonomy."""

    label: str
    frame: str
    provisional: bool
    source_note: str


@dataclass(frozen=True)
class Taxonomy:
    """A validated registry.  Equality covers version, frames, and crosswalk."""

    version: str
    frames: tuple
    crosswalk: tuple
    frames_by_id: dict = field(init=False, compare=False, repr=False)
    order_index: dict = field(init=False, compare=False, repr=False)
    top_level: tuple = field(init=False, compare=False, repr=False)
    children: dict = field(init=False, compare=False, repr=False)
    crosswalk_index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        by_id = {fr.id: fr for fr in self.frames}
        order = {fr.id: pos for pos, fr in enumerate(self.frames)}
        tops = tuple(fr.id for fr in self.frames if fr.parent is None)
        kids = {}
        for fr in self.frames:
            if fr.parent is not None:
                kids.setdefault(fr.parent, []).append(fr.id)
        object.__setattr__(self, "frames_by_id", by_id)
        object.__setattr__(self, "order_index", order)
        object.__setattr__(self, "top_level", tops)
        object.__setattr__(self, "children",
                           {parent: tuple(ids) for parent, ids in kids.items()})
        object.__setattr__(self, "crosswalk_index",
                           {entry.label.casefold(): entry for entry in self.crosswalk})

    def __contains__(self, frame_id):
        return frame_id in self.frames_by_id

    def frame(self, frame_id):
        try:
            return self.frames_by_id[frame_id]
        except KeyError:
            raise UnknownFrame(f"no frame with id {frame_id!r}") from None

    def frame_ids(self):
        return tuple(fr.id for fr in self.frames)


# --- shape checks -------------------------------------------------------------

def _require(condition, message):
    if not condition:
        raise MalformedRegistry(message)


def _as_mapping(value, where):
    _require(isinstance(value, dict), f"{where} must be a JSON object")
    return value


def _field(mapping, key, where):
    _require(key in mapping, f"{where} is missing required key {key!r}")
    return mapping[key]


def _text_field(mapping, key, where):
    value = _field(mapping, key, where)
    _require(isinstance(value, str), f"{where}.{key} must be a string")
    return value


# --- parsing and validation ---------------------------------------------------

def parse_taxonomy(payload):
    """Validate a parsed registry payload and build a Taxonomy from it.

    Raises MalformedRegistry when the payload is the wrong shape and
    InvariantViolation when a structural rule is broken.
    """
    root = _as_mapping(payload, "registry root")
    version = _text_field(root, "version", "registry")
    _require(version.strip() != "", "registry.version must be non-empty")

    raw_frames = _field(root, "frames", "registry")
    _require(isinstance(raw_frames, list), "registry.frames must be a list")
    raw_crosswalk = _field(root, "crosswalk", "registry")
    _require(isinstance(raw_crosswalk, list), "registry.crosswalk must be a list")

    frames = tuple(_parse_frame(entry, pos) for pos, entry in enumerate(raw_frames))
    crosswalk = tuple(_parse_crosswalk_entry(entry, pos)
                      for pos, entry in enumerate(raw_crosswalk))

    if len(frames) != EXPECTED_FRAME_COUNT:
        raise InvariantViolation(
            f"frame count {len(frames)} ≠ {EXPECTED_FRAME_COUNT}")

    seen = set()
    for fr in frames:
        if fr.id in seen:
            raise InvariantViolation(f"duplicate frame id {fr.id}")
        seen.add(fr.id)

    by_id = {fr.id: fr for fr in frames}
    for fr in frames:
        if fr.parent is None:
            continue
        if fr.parent == fr.id:
            raise InvariantViolation(f"frame {fr.id}: parent refers to itself")
        if fr.parent not in by_id:
            raise InvariantViolation(f"frame {fr.id}: orphan parent {fr.parent}")
        if by_id[fr.parent].parent is not None:
            raise InvariantViolation(
                f"frame {fr.id}: parent {fr.parent} is itself nested")

    for fr in frames:
        _check_lexicon(fr)
        for other in fr.blend_affinities:
            if other == fr.id:
                raise InvariantViolation(
                    f"frame {fr.id}: blend affinity refers to itself")
            if other not in by_id:
                raise InvariantViolation(
                    f"frame {fr.id}: blend affinity {other} is not a frame id")

    seen_labels = set()
    for entry in crosswalk:
        folded = entry.label.casefold()
        if folded in seen_labels:
            raise InvariantViolation(f"duplicate crosswalk label {entry.label!r}")
        seen_labels.add(folded)
        if entry.frame not in by_id:
            raise InvariantViolation(
                f"crosswalk label {entry.label!r} maps to unknown frame {entry.frame}")

    return Taxonomy(version=version, frames=frames, crosswalk=crosswalk)


def _parse_frame(entry, pos):
    where = f"frames[{pos}]"
    mapping = _as_mapping(entry, where)
    frame_id = _text_field(mapping, "id", where)
    _require(frame_id.strip() != "", f"{where}.id must be non-empty")

    parent = _field(mapping, "parent", where)
    _require(parent is None or isinstance(parent, str),
             f"{where}.parent must be null or a string")

    description = _text_field(mapping, "description", where)
    functions = _text_field(mapping, "framing_functions", where)

    raw_lexemes = _field(mapping, "lexemes", where)
    _require(isinstance(raw_lexemes, list), f"{where}.lexemes must be a list")
    lexemes = tuple(_parse_lexeme(item, f"{where}.lexemes[{i}]")
                    for i, item in enumerate(raw_lexemes))

    raw_affinities = _field(mapping, "blend_affinities", where)
    _require(isinstance(raw_affinities, list),
             f"{where}.blend_affinities must be a list")
    for item in raw_affinities:
        _require(isinstance(item, str),
                 f"{where}.blend_affinities entries must be strings")

    return Frame(id=frame_id, parent=parent, description=description,
                 lexemes=lexemes, framing_functions=functions,
                 blend_affinities=tuple(raw_affinities))


def _parse_lexeme(entry, where):
    mapping = _as_mapping(entry, where)
    text = _text_field(mapping, "text", where)
    weight = _field(mapping, "weight", where)
    _require(isinstance(weight, (int, float)) and not isinstance(weight, bool),
             f"{where}.weight must be a number")
    rank = _field(mapping, "salience_rank", where)
    _require(isinstance(rank, int) and not isinstance(rank, bool),
             f"{where}.salience_rank must be an integer")
    provenance = _text_field(mapping, "provenance", where)
    return Lexeme(text=text, weight=float(weight), salience_rank=rank,
                  provenance=provenance)


def _parse_crosswalk_entry(entry, pos):
    where = f"crosswalk[{pos}]"
    mapping = _as_mapping(entry, where)
    label = _text_field(mapping, "label", where)
    _require(label.strip() != "", f"{where}.label must be non-empty")
    frame = _text_field(mapping, "frame", where)
    provisional = _field(mapping, "provisional", where)
    _require(isinstance(provisional, bool), f"{where}.provisional must be a boolean")
    note = _text_field(mapping, "source_note", where)
    return CrosswalkEntry(label=label, frame=frame, provisional=provisional,
                          source_note=note)


def _check_lexicon(frame):
    if not frame.lexemes:
        raise InvariantViolation(f"frame {frame.id}: no lexemes")
    ranks = set()
    keys = {}
    for lex in frame.lexemes:
        if lex.text.strip() == "":
            raise InvariantViolation(f"frame {frame.id}: empty lexeme text")
        if lex.weight <= 0:
            raise InvariantViolation(
                f"frame {frame.id}: lexeme {lex.text!r} has nonpositive weight")
        if lex.salience_rank < 1:
            raise InvariantViolation(
                f"frame {frame.id}: lexeme {lex.text!r} has salience_rank < 1")
        if lex.salience_rank in ranks:
            raise InvariantViolation(
                f"frame {frame.id}: duplicate salience_rank {lex.salience_rank}")
        ranks.add(lex.salience_rank)
        if not lex.key:
            raise InvariantViolation(
                f"frame {frame.id}: lexeme {lex.text!r} normalizes to nothing")
        if lex.key in keys:
            raise InvariantViolation(
                f"frame {frame.id}: lexemes {keys[lex.key]!r} and {lex.text!r}"
                f" normalize to the same phrase")
        keys[lex.key] = lex.text


# --- i/o ----------------------------------------------------------------------

def load_taxonomy(source):
    """Read a registry JSON document from a path or file object and validate it."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRegistry(f"registry is not valid JSON: {exc}") from exc
    return parse_taxonomy(payload)


def serialize_taxonomy(taxonomy):
    """Render a Taxonomy back to the registry JSON shape.

    The output round-trips: serializing a loaded registry reproduces the
    parsed payload exactly.
    """
    return {
        "version": taxonomy.version,
        "frames": [
            {
                "id": fr.id,
                "parent": fr.parent,
                "description": fr.description,
                "lexemes": [
                    {
                        "text": lex.text,
                        "weight": lex.weight,
                        "salience_rank": lex.salience_rank,
                        "provenance": lex.provenance,
                    }
                    for lex in fr.lexemes
                ],
                "framing_functions": fr.framing_functions,
                "blend_affinities": list(fr.blend_affinities),
            }
            for fr in taxonomy.frames
        ],
        "crosswalk": [
            {
                "label": entry.label,
                "frame": entry.frame,
                "provisional": entry.provisional,
                "source_note": entry.source_note,
            }
            for entry in taxonomy.crosswalk
        ],
    }


def default_registry_path():
    """Filesystem path of the registry shipped with the package."""
    resource = resources.files(__package__) / "registry_data" / _REGISTRY_RESOURCE
    return Path(str(resource))


def load_default_taxonomy():
    resource = resources.files(__package__) / "registry_data" / _REGISTRY_RESOURCE
    return parse_taxonomy(json.loads(resource.read_text(encoding="utf-8")))


# --- label normalization --------------------------------------------------------

def normalize_label(taxonomy, label):
    """Map an external frame label onto this taxonomy.

    Lookup is case-insensitive against the crosswalk first, then falls back
    to an exact frame id match.  Raises UnmappedLabel when neither applies.
    """
    needle = label.strip()
    entry = taxonomy.crosswalk_index.get(needle.casefold())
    if entry is not None:
        return LabelMapping(label=needle, frame=entry.frame,
                            provisional=entry.provisional,
                            source_note=entry.source_note)
    if needle in taxonomy.frames_by_id:
        return LabelMapping(label=needle, frame=needle, provisional=False,
                            source_note="exact frame id match")
    raise UnmappedLabel(f"no mapping for label {needle!r}")
