"""TOPIC-is-VEHICLE statement parsing and coding tests."""

from __future__ import annotations

import pytest

from narrative_frames.errors import EmptySide, NoCopula, NoFrameEvidence
from narrative_frames.statements import (code_statement, parse_statement)


def test_parse_basic():
    parsed = parse_statement("ARGUMENT is WAR")
    assert parsed.topic == "ARGUMENT"
    assert parsed.vehicle == "WAR"
    assert parsed.ambiguous_split is False


def test_parse_are_and_case():
    parsed = parse_statement("ARGUMENTS ARE WAR")
    assert parsed.topic == "ARGUMENTS"
    assert parsed.vehicle == "WAR"


def test_parse_splits_at_first_copula():
    parsed = parse_statement("LIFE is WHAT is GIVEN")
    assert parsed.topic == "LIFE"
    assert parsed.vehicle == "WHAT is GIVEN"
    assert parsed.ambiguous_split is True


def test_parse_no_copula():
    with pytest.raises(NoCopula):
        parse_statement("ARGUMENT as WAR")
    # 'is' inside a word does not count
    with pytest.raises(NoCopula):
        parse_statement("CRISIS was MISMANAGED")


def test_parse_empty_side():
    with pytest.raises(EmptySide):
        parse_statement("is WAR")
    with pytest.raises(EmptySide):
        parse_statement("ARGUMENT is")


def test_code_simple_lexicon_match(taxonomy, index):
    coded = code_statement("ARGUMENT is WAR", taxonomy, index=index)
    assert coded.frame == "WAR"
    assert coded.rationale == "lexicon match"
    assert coded.alternates == ()


def test_code_accepts_parsed_statement(taxonomy, index):
    parsed = parse_statement("ARGUMENT is WAR")
    coded = code_statement(parsed, taxonomy, index=index)
    assert coded.frame == "WAR"


def test_code_head_noun_breaks_tie(taxonomy, index):
    coded = code_statement("FUTURE OF A NATION is THE PATH OF A BOAT",
                           taxonomy, index=index)
    assert coded.frame == "JOURNEY"
    assert coded.alternates == ("MACHINE/TRANSIT",)
    assert coded.rationale == "head noun salience"


def test_code_head_noun_structure(taxonomy, index):
    coded = code_statement(
        "GOVERNMENT'S HARMFUL TREATMENT OF RIGHTS is"
        " DAMAGING A PHYSICAL STRUCTURE", taxonomy, index=index)
    assert coded.frame == "BUILDING"
    assert coded.alternates == ("WAR",)
    assert coded.rationale == "head noun salience"


def test_code_no_evidence(taxonomy, index):
    with pytest.raises(NoFrameEvidence):
        code_statement("POLICY is NUANCE", taxonomy, index=index)


def test_code_multiple_evidence_sums_weights(taxonomy, index):
    coded = code_statement("DEBATE is A BATTLE OF ENEMY ATTACKS",
                           taxonomy, index=index)
    assert coded.frame == "WAR"
    # three WAR lexemes matched; score is their summed weight
    assert coded.score == pytest.approx(3.0)


def test_code_alternates_sorted_by_score(taxonomy, index):
    coded = code_statement("PROGRESS is A RACE THROUGH A MINEFIELD WAR",
                           taxonomy, index=index)
    assert coded.frame == "WAR"
    assert "JOURNEY/RACE" in coded.alternates


def test_code_ambiguous_flag_carried(taxonomy, index):
    coded = code_statement("LIFE is WHAT is A JOURNEY", taxonomy, index=index)
    assert coded.ambiguous_split is True
    assert coded.frame == "JOURNEY"
