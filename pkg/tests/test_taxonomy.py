"""Registry parsing, validation, and crosswalk tests."""

from __future__ import annotations

import copy
import json

import pytest

from narrative_frames.errors import (InvariantViolation, MalformedRegistry,
                                     UnknownFrame, UnmappedLabel)
from narrative_frames.taxonomy import (default_registry_path, load_taxonomy,
                                       normalize_label, parse_taxonomy,
                                       serialize_taxonomy)


@pytest.fixture()
def payload():
    with open(default_registry_path(), encoding="utf-8") as handle:
        return json.load(handle)


def test_registry_loads(taxonomy):
    assert len(taxonomy.frames) == 49
    top = [f for f in taxonomy.frames if f.parent is None]
    nested = [f for f in taxonomy.frames if f.parent is not None]
    assert len(top) == 22
    assert len(nested) == 27


def test_every_nested_frame_id_starts_with_parent(taxonomy):
    for frame in taxonomy.frames:
        if frame.parent is not None:
            assert frame.id.startswith(frame.parent + "/")


def test_every_frame_has_lexemes_and_functions(taxonomy):
    for frame in taxonomy.frames:
        assert frame.lexemes, frame.id
        assert frame.framing_functions, frame.id


def test_blend_affinities_are_symmetric(taxonomy):
    for frame in taxonomy.frames:
        for other in frame.blend_affinities:
            assert frame.id in taxonomy.frame(other).blend_affinities


def test_frame_lookup(taxonomy):
    assert taxonomy.frame("WAR").id == "WAR"
    assert "JOURNEY/RACE" in taxonomy
    with pytest.raises(UnknownFrame):
        taxonomy.frame("PEACE")


def test_serialize_round_trip(taxonomy, payload):
    assert serialize_taxonomy(taxonomy) == payload
    reparsed = parse_taxonomy(serialize_taxonomy(taxonomy))
    assert serialize_taxonomy(reparsed) == payload


def test_load_from_file_object(tmp_path, payload):
    path = tmp_path / "registry.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with open(path, encoding="utf-8") as handle:
        parsed = load_taxonomy(handle)
    assert len(parsed.frames) == 49


# --- mutation rejection ------------------------------------------------------

def test_dropped_frame_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"].pop(3)
    with pytest.raises(InvariantViolation, match="frame count 48"):
        parse_taxonomy(broken)


def test_duplicate_frame_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][-1] = copy.deepcopy(broken["frames"][0])
    dup = broken["frames"][0]["id"]
    with pytest.raises(InvariantViolation, match=f"duplicate frame id {dup}"):
        parse_taxonomy(broken)


def test_orphan_parent_rejected(payload):
    broken = copy.deepcopy(payload)
    victim = next(f for f in broken["frames"] if f["parent"] is not None)
    victim["parent"] = "NO SUCH FRAME"
    with pytest.raises(InvariantViolation,
                       match=f"{victim['id']}: orphan parent"):
        parse_taxonomy(broken)


def test_self_parent_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][0]["parent"] = broken["frames"][0]["id"]
    with pytest.raises(InvariantViolation):
        parse_taxonomy(broken)


def test_nested_under_nested_rejected(payload):
    broken = copy.deepcopy(payload)
    victim = next(f for f in broken["frames"] if f["parent"] is not None)
    nested_ids = [f["id"] for f in broken["frames"]
                  if f["parent"] is not None and f["id"] != victim["id"]]
    victim["parent"] = nested_ids[0]
    with pytest.raises(InvariantViolation):
        parse_taxonomy(broken)


def test_empty_lexicon_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][0]["lexemes"] = []
    with pytest.raises(InvariantViolation, match="no lexemes"):
        parse_taxonomy(broken)


def test_nonpositive_weight_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][0]["lexemes"][0]["weight"] = 0
    with pytest.raises(InvariantViolation, match="weight"):
        parse_taxonomy(broken)


def test_duplicate_salience_rank_rejected(payload):
    broken = copy.deepcopy(payload)
    lexemes = broken["frames"][0]["lexemes"]
    lexemes[1]["salience_rank"] = lexemes[0]["salience_rank"]
    with pytest.raises(InvariantViolation, match="salience_rank"):
        parse_taxonomy(broken)


def test_duplicate_lexeme_key_rejected(payload):
    broken = copy.deepcopy(payload)
    lexemes = broken["frames"][0]["lexemes"]
    clone = dict(lexemes[0])
    clone["salience_rank"] = max(l["salience_rank"] for l in lexemes) + 1
    # different surface, same lemma key after normalization
    clone["text"] = lexemes[0]["text"].upper()
    lexemes.append(clone)
    with pytest.raises(InvariantViolation, match="normalize to the same phrase"):
        parse_taxonomy(broken)


def test_unknown_blend_affinity_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][0]["blend_affinities"] = ["NOT A FRAME"]
    with pytest.raises(InvariantViolation, match="blend affinity"):
        parse_taxonomy(broken)


def test_duplicate_crosswalk_label_rejected(payload):
    broken = copy.deepcopy(payload)
    clone = dict(broken["crosswalk"][0])
    clone["label"] = clone["label"].lower()
    broken["crosswalk"].append(clone)
    with pytest.raises(InvariantViolation, match="crosswalk"):
        parse_taxonomy(broken)


def test_crosswalk_to_unknown_frame_rejected(payload):
    broken = copy.deepcopy(payload)
    broken["crosswalk"][0]["frame"] = "NOT A FRAME"
    with pytest.raises(InvariantViolation):
        parse_taxonomy(broken)


def test_malformed_payload_shapes():
    with pytest.raises(MalformedRegistry):
        parse_taxonomy([])
    with pytest.raises(MalformedRegistry):
        parse_taxonomy({"version": "1.0.0"})
    with pytest.raises(MalformedRegistry):
        parse_taxonomy({"version": "1.0.0", "frames": "nope", "crosswalk": []})


def test_malformed_lexeme_shape(payload):
    broken = copy.deepcopy(payload)
    broken["frames"][0]["lexemes"][0] = "war"
    with pytest.raises(MalformedRegistry):
        parse_taxonomy(broken)


# --- label normalization -----------------------------------------------------

def test_normalize_label_crosswalk_hit(taxonomy):
    mapping = normalize_label(taxonomy, "CONFLICT")
    assert mapping.frame == "WAR"
    assert mapping.provisional is False


def test_normalize_label_case_and_whitespace(taxonomy):
    assert normalize_label(taxonomy, "  conflict ").frame == "WAR"
    assert normalize_label(taxonomy, "Battle").frame == "WAR"


def test_normalize_label_exact_frame_id(taxonomy):
    mapping = normalize_label(taxonomy, "JOURNEY/RACE")
    assert mapping.frame == "JOURNEY/RACE"
    assert mapping.provisional is False


def test_normalize_label_unmapped(taxonomy):
    with pytest.raises(UnmappedLabel):
        normalize_label(taxonomy, "FIRE")
    with pytest.raises(UnmappedLabel):
        normalize_label(taxonomy, "")
