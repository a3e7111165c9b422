"""Event-log store tests: persistence, adjudication, export/import."""

from __future__ import annotations

import json

import pytest

from narrative_frames.analytics import REJECT
from narrative_frames.annotator import AnnotatorConfig
from narrative_frames.corpus import Document
from narrative_frames.errors import (ConflictingConcurrentWrite, CorpusExists,
                                     DuplicateDocument, InvalidDecision,
                                     MalformedArchive, TaxonomyMismatch,
                                     UnknownAssignment, UnknownCorpus,
                                     UnknownDocument, UnknownFrame)
from narrative_frames.store import CorpusStore

WAR_TEXT = "The war began. They chose to deploy reserves."
RACE_TEXT = "A sprint to the finish line."
BLEND_TEXT = "The AI arms race between great powers is heating up."


@pytest.fixture()
def store(tmp_path, taxonomy):
    with CorpusStore(tmp_path / "store", taxonomy) as s:
        yield s


def _seed(store, corpus_id="c1", texts=None):
    texts = texts if texts is not None else {"d1": WAR_TEXT}
    store.create_corpus(corpus_id)
    store.add_documents(corpus_id, [Document(doc_id=k, text=v)
                                    for k, v in texts.items()])
    return store.analyze(corpus_id)


# --- corpora and documents ------------------------------------------------------

def test_create_corpus(store):
    store.create_corpus("c1")
    assert store.corpora() == ["c1"]
    with pytest.raises(CorpusExists):
        store.create_corpus("c1")


def test_corpus_id_validation(store):
    # path-traversal shapes are caller misuse, not domain state
    with pytest.raises(ValueError):
        store.create_corpus("../evil")
    with pytest.raises(ValueError):
        store.create_corpus("")


def test_unknown_corpus(store):
    with pytest.raises(UnknownCorpus):
        store.documents("nope")
    with pytest.raises(UnknownCorpus):
        store.analyze("nope")


def test_add_documents_and_lookup(store):
    store.create_corpus("c1")
    added = store.add_documents("c1", [Document(doc_id="d1", text="A war.")])
    assert added == 1
    corpus_id, doc = store.get_document("d1")
    assert corpus_id == "c1"
    assert doc.text == "A war."
    with pytest.raises(UnknownDocument):
        store.get_document("d2")


def test_doc_ids_unique_across_corpora(store):
    store.create_corpus("c1")
    store.create_corpus("c2")
    store.add_documents("c1", [Document(doc_id="d1", text="x")])
    with pytest.raises(DuplicateDocument):
        store.add_documents("c2", [Document(doc_id="d1", text="y")])


def test_token_count(store):
    store.create_corpus("c1")
    store.add_documents("c1", [Document(doc_id="d1", text="one two three")])
    assert store.token_count("c1") == 3
    store.add_documents("c1", [Document(doc_id="d2", text="four five")])
    assert store.token_count("c1") == 5


# --- analyze ---------------------------------------------------------------------

def test_analyze_persists_assignments(store):
    created = _seed(store)
    assert len(created) == 2
    views = store.assignments("c1")
    assert [v.frame for v in views] == ["WAR", "WAR"]
    assert all(v.created_at is not None for v in views)
    assert all(v.revision == 1 for v in views)


def test_analyze_is_idempotent(store):
    _seed(store)
    again = store.analyze("c1")
    assert again == []
    assert len(store.assignments("c1")) == 2


def test_analyze_only_adds_new_documents(store):
    _seed(store)
    store.add_documents("c1", [Document(doc_id="d2", text=RACE_TEXT)])
    created = store.analyze("c1")
    assert {a.doc_id for a in created} == {"d2"}


def test_analyze_honors_config(store, taxonomy):
    store.create_corpus("c1")
    store.add_documents("c1", [Document(doc_id="d1", text=WAR_TEXT)])
    config = AnnotatorConfig(literal_topics=("WAR",))
    assert store.analyze("c1", config) == []


# --- decisions --------------------------------------------------------------------

def test_accept_decision(store):
    created = _seed(store)
    aid = created[0].assignment_id
    view = store.record_decision(aid, "accept", "alice")
    assert view.status == "accepted"
    assert view.revision == 2
    assert view.annotator_id == "alice"
    assert view.decided_at is not None
    events = store.history(aid)
    assert [e["type"] for e in events] == ["created", "decision"]


def test_reject_decision(store):
    created = _seed(store)
    view = store.record_decision(created[0].assignment_id, "reject", "alice")
    assert view.status == "rejected"


def test_reassign_decision(store):
    created = _seed(store)
    view = store.record_decision(created[0].assignment_id, "reassign",
                                 "alice", frame="GAME")
    assert view.status == "reassigned"
    assert view.assigned_frame_after_review == "GAME"
    assert view.frame == created[0].frame


def test_decision_validation(store):
    created = _seed(store)
    aid = created[0].assignment_id
    with pytest.raises(UnknownAssignment):
        store.record_decision("ghost:0-1", "accept", "alice")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "promote", "alice")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "accept", "")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "accept", "alice", frame="GAME")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "reassign", "alice")
    with pytest.raises(UnknownFrame):
        store.record_decision(aid, "reassign", "alice", frame="NOPE")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "reassign", "alice", frame=created[0].frame)


def test_expected_revision_conflict(store):
    created = _seed(store)
    aid = created[0].assignment_id
    store.record_decision(aid, "accept", "alice", expected_revision=1)
    with pytest.raises(ConflictingConcurrentWrite):
        store.record_decision(aid, "reject", "bob", expected_revision=1)
    view = store.record_decision(aid, "reject", "bob", expected_revision=2)
    assert view.revision == 3
    assert view.status == "rejected"


def test_request_id_replay(store):
    created = _seed(store)
    aid = created[0].assignment_id
    first = store.record_decision(aid, "accept", "alice", request_id="r1")
    replay = store.record_decision(aid, "accept", "alice", request_id="r1")
    assert first == replay
    assert len(store.history(aid)) == 2


def test_request_id_payload_mismatch(store):
    created = _seed(store)
    aid = created[0].assignment_id
    store.record_decision(aid, "accept", "alice", request_id="r1")
    with pytest.raises(InvalidDecision):
        store.record_decision(aid, "reject", "alice", request_id="r1")


def test_replay_returns_state_at_that_event(store):
    created = _seed(store)
    aid = created[0].assignment_id
    store.record_decision(aid, "accept", "alice", request_id="r1")
    store.record_decision(aid, "reject", "bob")
    replayed = store.record_decision(aid, "accept", "alice", request_id="r1")
    assert replayed.status == "accepted"
    assert replayed.revision == 2
    assert store.get_assignment(aid).status == "rejected"


def test_decision_sequence_folds(store):
    created = _seed(store)
    aid = created[0].assignment_id
    store.record_decision(aid, "reassign", "alice", frame="GAME")
    store.record_decision(aid, "accept", "bob")
    view = store.get_assignment(aid)
    assert view.status == "accepted"
    assert view.assigned_frame_after_review == "GAME"
    assert view.revision == 3


# --- persistence and reload --------------------------------------------------------

def test_reload_reproduces_state(tmp_path, taxonomy):
    root = tmp_path / "store"
    with CorpusStore(root, taxonomy) as store:
        created = _seed(store)
        aid = created[0].assignment_id
        store.record_decision(aid, "reassign", "alice", frame="GAME")
        before = [store.get_assignment(a.assignment_id) for a in created]
    with CorpusStore(root, taxonomy) as reloaded:
        after = [reloaded.get_assignment(a.assignment_id) for a in created]
        assert before == after
        assert reloaded.token_count("c1") == 8


def test_store_rejects_other_taxonomy_version(tmp_path, taxonomy):
    from dataclasses import replace
    root = tmp_path / "store"
    with CorpusStore(root, taxonomy):
        pass
    other = replace(taxonomy, version="0.0.1")
    with pytest.raises(TaxonomyMismatch):
        CorpusStore(root, other)


def test_decisions_never_rewrite_assignments_file(tmp_path, taxonomy):
    root = tmp_path / "store"
    with CorpusStore(root, taxonomy) as store:
        created = _seed(store)
        assignment_bytes = (root / "c1" / "assignments.jsonl").read_bytes()
        history_bytes = (root / "c1" / "history.jsonl").read_bytes()
        store.record_decision(created[0].assignment_id, "accept", "alice")
        assert (root / "c1" / "assignments.jsonl").read_bytes() == \
            assignment_bytes
        grown = (root / "c1" / "history.jsonl").read_bytes()
        assert grown.startswith(history_bytes)
        assert len(grown) > len(history_bytes)


# --- analytics wiring ----------------------------------------------------------------

def test_distribution_via_store(store):
    _seed(store, texts={"d1": WAR_TEXT, "d2": RACE_TEXT})
    dist = store.distribution("c1")
    assert dist.corpus_id == "c1"
    assert dist.per_frame["WAR"].count == 2
    assert dist.per_frame["JOURNEY/RACE"].count == 2
    assert dist.token_count == store.token_count("c1")


def test_distribution_accepted_only(store):
    created = _seed(store)
    store.record_decision(created[0].assignment_id, "accept", "alice")
    dist = store.distribution("c1", accepted_only=True)
    assert dist.total == 1


def test_blends_via_store(store):
    _seed(store, texts={"d1": BLEND_TEXT})
    blends = store.blends("c1")
    assert len(blends) == 1
    assert (blends[0].frame_a, blends[0].frame_b) == ("WAR", "JOURNEY/RACE")


def test_decision_labels(store):
    created = _seed(store, texts={"d1": WAR_TEXT, "d2": RACE_TEXT})
    a1, a2 = created[0].assignment_id, created[1].assignment_id
    store.record_decision(a1, "accept", "alice")
    store.record_decision(a2, "reject", "alice")
    store.record_decision(a1, "reassign", "bob", frame="GAME")
    labels = store.decision_labels("c1", "alice")
    assert labels == {a1: "WAR", a2: REJECT}
    assert store.decision_labels("c1", "bob") == {a1: "GAME"}


def test_joint_labels(store):
    created = _seed(store)
    a1, a2 = created[0].assignment_id, created[1].assignment_id
    store.record_decision(a1, "accept", "alice")
    store.record_decision(a1, "accept", "bob")
    store.record_decision(a2, "accept", "alice")
    la, lb = store.joint_labels("c1", "alice", "bob")
    assert set(la) == set(lb) == {a1}


# --- export / import ------------------------------------------------------------------

def test_export_is_deterministic(tmp_path, store):
    _seed(store)
    out1 = tmp_path / "one.tar.gz"
    out2 = tmp_path / "two.tar.gz"
    store.export_corpus("c1", out1)
    store.export_corpus("c1", out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_export_import_round_trip(tmp_path, taxonomy, store):
    created = _seed(store)
    store.record_decision(created[0].assignment_id, "reassign", "alice",
                          frame="GAME")
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)

    with CorpusStore(tmp_path / "fresh", taxonomy) as fresh:
        result = fresh.import_corpus(archive)
        assert result.corpus_id == "c1"
        assert result.documents == 1
        assert result.assignments == 2
        assert result.warnings == ()
        original = store.assignments("c1")
        imported = fresh.assignments("c1")
        assert imported == original

        # re-export of imported data is byte-identical
        second = tmp_path / "again.tar.gz"
        fresh.export_corpus("c1", second)
        assert second.read_bytes() == archive.read_bytes()


def test_import_rejects_existing_corpus(tmp_path, store):
    _seed(store)
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)
    with pytest.raises(CorpusExists):
        store.import_corpus(archive)


def test_import_under_new_name(tmp_path, taxonomy, store):
    _seed(store)
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)
    with CorpusStore(tmp_path / "fresh", taxonomy) as fresh:
        result = fresh.import_corpus(archive, corpus_id="mirror")
        assert result.corpus_id == "mirror"
        assert len(fresh.assignments("mirror")) == 2


def test_import_rejects_missing_member(tmp_path, taxonomy, store):
    import tarfile
    import gzip
    _seed(store)
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)
    # rebuild the archive without history.jsonl
    broken = tmp_path / "broken.tar.gz"
    with tarfile.open(archive, "r:gz") as src, \
            tarfile.open(broken, "w:gz") as dst:
        for member in src.getmembers():
            if member.name == "history.jsonl":
                continue
            dst.addfile(member, src.extractfile(member))
    with CorpusStore(tmp_path / "fresh", taxonomy) as fresh:
        with pytest.raises(MalformedArchive):
            fresh.import_corpus(broken)


def test_import_warns_on_version_skew(tmp_path, taxonomy, store):
    import io
    import tarfile
    _seed(store)
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)
    skewed = tmp_path / "skew.tar.gz"
    with tarfile.open(archive, "r:gz") as src, \
            tarfile.open(skewed, "w:gz") as dst:
        for member in src.getmembers():
            data = src.extractfile(member).read()
            if member.name == "taxonomy_version.txt":
                data = b"0.0.9\n"
                member.size = len(data)
            dst.addfile(member, io.BytesIO(data))
    with CorpusStore(tmp_path / "fresh", taxonomy) as fresh:
        result = fresh.import_corpus(skewed)
        assert any(w.startswith("VersionMismatch:") for w in result.warnings)


def test_import_decision_replay_still_guarded(tmp_path, taxonomy, store):
    created = _seed(store)
    aid = created[0].assignment_id
    store.record_decision(aid, "accept", "alice", request_id="r7")
    archive = tmp_path / "c1.tar.gz"
    store.export_corpus("c1", archive)
    with CorpusStore(tmp_path / "fresh", taxonomy) as fresh:
        fresh.import_corpus(archive)
        replay = fresh.record_decision(aid, "accept", "alice", request_id="r7")
        assert replay.revision == 2
        with pytest.raises(InvalidDecision):
            fresh.record_decision(aid, "reject", "alice", request_id="r7")


def test_assignments_jsonl_rows_match_views(tmp_path, taxonomy):
    root = tmp_path / "store"
    with CorpusStore(root, taxonomy) as store:
        _seed(store)
        rows = [json.loads(line) for line in
                (root / "c1" / "assignments.jsonl").read_text().splitlines()]
        assert all(r["status"] == "suggested" for r in rows)
        assert {r["assignment_id"] for r in rows} == \
            {a.assignment_id for a in store.assignments("c1")}
