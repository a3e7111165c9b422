"""Append-only persistence for corpora, assignments, and review decisions.

Layout under the store root:

    taxonomy_version.txt
    <corpus_id>/documents.jsonl      one document per line
    <corpus_id>/assignments.jsonl    immutable creation records
    <corpus_id>/history.jsonl        creation + decision events

Nothing is ever rewritten in place.  The current state of an assignment is a
fold over its creation record and its decision events, so the full
adjudication trail survives.  Every append is flushed and fsynced before the
call returns.  A per-store advisory file lock plus an optional
expected_revision argument guard against concurrent writers.
"""

from __future__ import annotations

import fcntl
import gzip
import io
import json
import os
import re
import tarfile
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .annotator import (AnnotatorConfig, PhraseIndex, annotate_document,
                        assignment_from_row, assignment_to_row, detect_blends)
from .corpus import Document
from .analytics import frame_distribution
from .errors import (ConflictingConcurrentWrite, CorpusExists,
                     DuplicateDocument, InvalidDecision, MalformedArchive,
                     TaxonomyMismatch, UnknownAssignment, UnknownCorpus,
                     UnknownDocument, UnknownFrame)
from .text_pipeline import count_tokens

_CORPUS_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_DECISIONS = ("accept", "reject", "reassign")
_ARCHIVE_MEMBERS = ("documents.jsonl", "assignments.jsonl", "history.jsonl",
                    "taxonomy_version.txt")


def _now():
    return datetime.now(timezone.utc).isoformat()


def _dump(row):
    return json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n"


@dataclass(frozen=True)
class ImportResult:
    corpus_id: str
    documents: int
    assignments: int
    events: int
    warnings: tuple


class CorpusStore:
    """Event-log store for one taxonomy's worth of annotation work."""

    def __init__(self, root, taxonomy):
        self.root = Path(root)
        self.taxonomy = taxonomy
        self.root.mkdir(parents=True, exist_ok=True)
        self._mutex = threading.RLock()
        self._lock_handle = open(self.root / ".lock", "a+")

        version_file = self.root / "taxonomy_version.txt"
        if version_file.exists():
            stored = version_file.read_text(encoding="utf-8").strip()
            if stored != taxonomy.version:
                raise TaxonomyMismatch(
                    f"store was created with taxonomy {stored!r},"
                    f" got {taxonomy.version!r}")
        else:
            version_file.write_text(taxonomy.version + "\n", encoding="utf-8")

        # in-memory fold of the on-disk logs
        self._docs = {}               # doc_id -> (corpus_id, Document)
        self._corpus_docs = {}        # corpus_id -> [doc_id, ...]
        self._creations = {}          # assignment_id -> FrameAssignment (rev 1)
        self._corpus_assignments = {} # corpus_id -> [assignment_id, ...]
        self._assignment_corpus = {}  # assignment_id -> corpus_id
        self._history = {}            # assignment_id -> [event, ...]
        self._token_counts = {}       # corpus_id -> int (lazy)
        self._load()

    # --- locking -------------------------------------------------------------

    def _locked(self):
        return _StoreLock(self)

    def close(self):
        if not self._lock_handle.closed:
            self._lock_handle.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
        return False

    # --- bootstrap -----------------------------------------------------------

    def _load(self):
        for entry in sorted(self.root.iterdir()):
            if not entry.is_dir():
                continue
            corpus_id = entry.name
            self._corpus_docs[corpus_id] = []
            self._corpus_assignments[corpus_id] = []
            for row in self._read_jsonl(entry / "documents.jsonl"):
                doc = Document(doc_id=row["doc_id"], text=row["text"],
                               metadata=row.get("metadata", {}))
                self._docs[doc.doc_id] = (corpus_id, doc)
                self._corpus_docs[corpus_id].append(doc.doc_id)
            for row in self._read_jsonl(entry / "assignments.jsonl"):
                assignment = assignment_from_row(row)
                self._creations[assignment.assignment_id] = assignment
                self._assignment_corpus[assignment.assignment_id] = corpus_id
                self._corpus_assignments[corpus_id].append(
                    assignment.assignment_id)
            for event in self._read_jsonl(entry / "history.jsonl"):
                self._history.setdefault(event["assignment_id"], []).append(event)

    @staticmethod
    def _read_jsonl(path):
        if not path.exists():
            return []
        rows = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    rows.append(json.loads(line))
        return rows

    @staticmethod
    def _append(path, row):
        with open(path, "a", encoding="utf-8") as handle:
            handle.write(_dump(row))
            handle.flush()
            os.fsync(handle.fileno())

    @staticmethod
    def _append_many(path, rows):
        # one open/fsync per batch; per-row fsync makes large analyses crawl
        with open(path, "a", encoding="utf-8") as handle:
            handle.write("".join(_dump(row) for row in rows))
            handle.flush()
            os.fsync(handle.fileno())

    def _corpus_dir(self, corpus_id):
        if corpus_id not in self._corpus_docs:
            raise UnknownCorpus(f"no corpus {corpus_id!r}")
        return self.root / corpus_id

    # --- corpora and documents --------------------------------------------------

    def corpora(self):
        return sorted(self._corpus_docs)

    def create_corpus(self, corpus_id):
        if not _CORPUS_ID_RE.match(corpus_id or ""):
            raise ValueError(
                f"corpus id {corpus_id!r} must match {_CORPUS_ID_RE.pattern}")
        with self._mutex, self._locked():
            if corpus_id in self._corpus_docs or (self.root / corpus_id).exists():
                raise CorpusExists(f"corpus {corpus_id!r} already exists")
            target = self.root / corpus_id
            target.mkdir()
            for name in ("documents.jsonl", "assignments.jsonl", "history.jsonl"):
                (target / name).touch()
            self._corpus_docs[corpus_id] = []
            self._corpus_assignments[corpus_id] = []
        return corpus_id

    def add_documents(self, corpus_id, documents):
        """Append documents to a corpus.  Doc ids are unique store-wide."""
        with self._mutex, self._locked():
            target = self._corpus_dir(corpus_id)
            for doc in documents:
                if doc.doc_id in self._docs:
                    raise DuplicateDocument(
                        f"doc_id {doc.doc_id!r} already exists in corpus"
                        f" {self._docs[doc.doc_id][0]!r}")
            for doc in documents:
                self._append(target / "documents.jsonl",
                             {"doc_id": doc.doc_id, "text": doc.text,
                              "metadata": doc.metadata})
                self._docs[doc.doc_id] = (corpus_id, doc)
                self._corpus_docs[corpus_id].append(doc.doc_id)
            self._token_counts.pop(corpus_id, None)
        return len(documents)

    def documents(self, corpus_id):
        self._corpus_dir(corpus_id)
        return [self._docs[doc_id][1] for doc_id in self._corpus_docs[corpus_id]]

    def get_document(self, doc_id):
        try:
            return self._docs[doc_id]
        except KeyError:
            raise UnknownDocument(f"no document {doc_id!r}") from None

    def token_count(self, corpus_id):
        self._corpus_dir(corpus_id)
        if corpus_id not in self._token_counts:
            self._token_counts[corpus_id] = sum(
                count_tokens(self._docs[d][1].text)
                for d in self._corpus_docs[corpus_id])
        return self._token_counts[corpus_id]

    # --- analysis -----------------------------------------------------------------

    def analyze(self, corpus_id, config=None, index=None):
        """Annotate every document and persist new assignments.

        Re-running is idempotent: spans that already have an assignment are
        skipped, so adjudication work is never clobbered.
        """
        if config is None:
            config = AnnotatorConfig()
        if index is None:
            index = PhraseIndex(self.taxonomy)
        created = []
        rows = []
        events = []
        with self._mutex, self._locked():
            target = self._corpus_dir(corpus_id)
            stamp = _now()
            for doc_id in self._corpus_docs[corpus_id]:
                doc = self._docs[doc_id][1]
                result = annotate_document(doc, self.taxonomy, config, index=index)
                for assignment in result.assignments:
                    if assignment.assignment_id in self._creations:
                        continue
                    assignment = replace(assignment, created_at=stamp)
                    rows.append(assignment_to_row(assignment))
                    event = {"type": "created",
                             "assignment_id": assignment.assignment_id,
                             "at": stamp}
                    events.append(event)
                    self._creations[assignment.assignment_id] = assignment
                    self._assignment_corpus[assignment.assignment_id] = corpus_id
                    self._corpus_assignments[corpus_id].append(
                        assignment.assignment_id)
                    self._history.setdefault(
                        assignment.assignment_id, []).append(event)
                    created.append(assignment)
            if rows:
                self._append_many(target / "assignments.jsonl", rows)
                self._append_many(target / "history.jsonl", events)
        return created

    # --- assignment state ------------------------------------------------------------

    def _fold(self, assignment_id, upto=None):
        creation = self._creations[assignment_id]
        state = creation
        revision = 1
        for event in self._history.get(assignment_id, []):
            if event["type"] != "decision":
                continue
            revision += 1
            decision = event["decision"]
            changes = {"decided_at": event["at"],
                       "annotator_id": event["annotator_id"],
                       "revision": revision}
            if decision == "accept":
                changes["status"] = "accepted"
            elif decision == "reject":
                changes["status"] = "rejected"
            else:
                changes["status"] = "reassigned"
                changes["assigned_frame_after_review"] = event["frame"]
            state = replace(state, **changes)
            if upto is not None and event is upto:
                break
        return state

    def get_assignment(self, assignment_id):
        if assignment_id not in self._creations:
            raise UnknownAssignment(f"no assignment {assignment_id!r}")
        return self._fold(assignment_id)

    def assignments(self, corpus_id, doc_id=None, status=None):
        self._corpus_dir(corpus_id)
        views = []
        for assignment_id in self._corpus_assignments[corpus_id]:
            view = self._fold(assignment_id)
            if doc_id is not None and view.doc_id != doc_id:
                continue
            if status is not None and view.status != status:
                continue
            views.append(view)
        views.sort(key=lambda a: (a.doc_id, a.char_start, a.char_end))
        return views

    def history(self, assignment_id):
        if assignment_id not in self._creations:
            raise UnknownAssignment(f"no assignment {assignment_id!r}")
        return [dict(event) for event in self._history.get(assignment_id, [])]

    # --- adjudication ---------------------------------------------------------------

    def record_decision(self, assignment_id, decision, annotator_id,
                        frame=None, request_id=None, expected_revision=None):
        """Append one review decision and return the updated assignment view.

        accept and reject take no frame; reassign requires a frame different
        from the one originally suggested.  request_id makes retries safe: a
        decision already recorded under the same id is replayed, not
        repeated.  expected_revision, when given, must match the current
        fold or the write is refused.
        """
        with self._mutex, self._locked():
            if assignment_id not in self._creations:
                raise UnknownAssignment(f"no assignment {assignment_id!r}")

            if request_id is not None:
                for event in self._history.get(assignment_id, []):
                    if (event["type"] == "decision"
                            and event.get("request_id") == request_id):
                        same = (event["decision"] == decision
                                and event.get("frame") == frame
                                and event["annotator_id"] == annotator_id)
                        if not same:
                            raise InvalidDecision(
                                f"request_id {request_id!r} was already used"
                                f" for a different decision")
                        return self._fold(assignment_id, upto=event)

            if decision not in _DECISIONS:
                raise InvalidDecision(
                    f"decision must be one of {', '.join(_DECISIONS)};"
                    f" got {decision!r}")
            if not annotator_id or not isinstance(annotator_id, str):
                raise InvalidDecision("annotator_id must be a non-empty string")
            creation = self._creations[assignment_id]
            if decision == "reassign":
                if frame is None:
                    raise InvalidDecision("reassign requires a frame")
                if frame not in self.taxonomy.frames_by_id:
                    raise UnknownFrame(f"no frame with id {frame!r}")
                if frame == creation.frame:
                    raise InvalidDecision(
                        f"reassign must change the frame; assignment already"
                        f" suggests {frame}")
            elif frame is not None:
                raise InvalidDecision(f"decision {decision!r} takes no frame")

            current = self._fold(assignment_id)
            if (expected_revision is not None
                    and expected_revision != current.revision):
                raise ConflictingConcurrentWrite(
                    f"assignment {assignment_id} is at revision"
                    f" {current.revision}, caller expected {expected_revision}")

            corpus_id = self._assignment_corpus[assignment_id]
            event = {"type": "decision",
                     "assignment_id": assignment_id,
                     "decision": decision,
                     "frame": frame,
                     "annotator_id": annotator_id,
                     "at": _now(),
                     "request_id": request_id,
                     "revision": current.revision + 1}
            self._append(self.root / corpus_id / "history.jsonl", event)
            self._history.setdefault(assignment_id, []).append(event)
            return self._fold(assignment_id)

    # --- analytics views ----------------------------------------------------------------

    def distribution(self, corpus_id, accepted_only=False):
        views = self.assignments(corpus_id)
        return frame_distribution(
            views, self.taxonomy, self.token_count(corpus_id),
            corpus_id=corpus_id,
            doc_ids=set(self._corpus_docs[corpus_id]),
            accepted_only=accepted_only)

    def blends(self, corpus_id, window_sentences=None):
        from .annotator import DEFAULT_BLEND_WINDOW
        if window_sentences is None:
            window_sentences = DEFAULT_BLEND_WINDOW
        views = self.assignments(corpus_id)
        return detect_blends(views, self.taxonomy,
                             window_sentences=window_sentences)

    def decision_labels(self, corpus_id, annotator_id):
        """Label per assignment from this annotator's latest decision.

        accept endorses the frame in force at that event (the original
        suggestion, or the reassigned frame if one was set earlier); reject
        maps to the REJECT label; reassign labels with its target frame.
        """
        from .analytics import REJECT
        self._corpus_dir(corpus_id)
        labels = {}
        for assignment_id in self._corpus_assignments[corpus_id]:
            chosen = None
            for event in self._history.get(assignment_id, []):
                if (event["type"] == "decision"
                        and event["annotator_id"] == annotator_id):
                    chosen = event
            if chosen is None:
                continue
            if chosen["decision"] == "reject":
                labels[assignment_id] = REJECT
            elif chosen["decision"] == "reassign":
                labels[assignment_id] = chosen["frame"]
            else:
                at_event = self._fold(assignment_id, upto=chosen)
                labels[assignment_id] = (at_event.assigned_frame_after_review
                                         or at_event.frame)
        return labels

    def joint_labels(self, corpus_id, annotator_a, annotator_b):
        """Label maps for the assignments both annotators have decided."""
        labels_a = self.decision_labels(corpus_id, annotator_a)
        labels_b = self.decision_labels(corpus_id, annotator_b)
        shared = sorted(set(labels_a) & set(labels_b))
        return ({item: labels_a[item] for item in shared},
                {item: labels_b[item] for item in shared})

    # --- archive export / import ------------------------------------------------------

    def export_corpus(self, corpus_id, out_path):
        """Write one corpus as a deterministic gzipped tar archive.

        Member bytes are the on-disk logs verbatim, so timestamps inside
        survive a round trip and re-exporting an imported archive is
        byte-identical.
        """
        target = self._corpus_dir(corpus_id)
        members = [
            ("documents.jsonl", (target / "documents.jsonl").read_bytes()),
            ("assignments.jsonl", (target / "assignments.jsonl").read_bytes()),
            ("history.jsonl", (target / "history.jsonl").read_bytes()),
            ("taxonomy_version.txt",
             (self.taxonomy.version + "\n").encode("utf-8")),
        ]
        raw = io.BytesIO()
        with tarfile.open(fileobj=raw, mode="w",
                          format=tarfile.USTAR_FORMAT) as tar:
            for name, payload in members:
                info = tarfile.TarInfo(name=name)
                info.size = len(payload)
                info.mtime = 0
                info.mode = 0o644
                info.uid = 0
                info.gid = 0
                info.uname = ""
                info.gname = ""
                tar.addfile(info, io.BytesIO(payload))
        out_path = Path(out_path)
        with open(out_path, "wb") as handle:
            # filename="" keeps the gzip header free of the output path, so
            # archives with identical contents are identical bytes
            with gzip.GzipFile(filename="", fileobj=handle, mode="wb",
                               mtime=0) as gz:
                gz.write(raw.getvalue())
            handle.flush()
            os.fsync(handle.fileno())
        return out_path

    def import_corpus(self, archive_path, corpus_id=None):
        """Load a corpus archive produced by export_corpus.

        The archive's log bytes are written through unchanged.  A taxonomy
        version difference is reported as a warning, not an error; frames
        that no longer exist surface later as orphans in distributions.
        """
        archive_path = Path(archive_path)
        if corpus_id is None:
            corpus_id = archive_path.name.split(".")[0]
        if not _CORPUS_ID_RE.match(corpus_id or ""):
            raise ValueError(
                f"corpus id {corpus_id!r} must match {_CORPUS_ID_RE.pattern}")

        try:
            with tarfile.open(archive_path, mode="r:gz") as tar:
                names = tar.getnames()
                if sorted(names) != sorted(_ARCHIVE_MEMBERS):
                    raise MalformedArchive(
                        f"archive must contain exactly"
                        f" {list(_ARCHIVE_MEMBERS)}; found {sorted(names)}")
                blobs = {name: tar.extractfile(name).read() for name in names}
        except (tarfile.TarError, gzip.BadGzipFile, OSError) as exc:
            if isinstance(exc, MalformedArchive):
                raise
            raise MalformedArchive(
                f"{archive_path} is not a readable archive: {exc}") from exc

        warnings = []
        archive_version = blobs["taxonomy_version.txt"].decode("utf-8").strip()
        if archive_version != self.taxonomy.version:
            warnings.append(
                f"VersionMismatch: archive taxonomy {archive_version!r},"
                f" store taxonomy {self.taxonomy.version!r}")

        def parse_lines(name):
            rows = []
            for lineno, line in enumerate(
                    blobs[name].decode("utf-8").splitlines(), start=1):
                if not line.strip():
                    continue
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise MalformedArchive(
                        f"{name} line {lineno} is not valid JSON: {exc}") from exc
            return rows

        doc_rows = parse_lines("documents.jsonl")
        assignment_rows = parse_lines("assignments.jsonl")
        event_rows = parse_lines("history.jsonl")

        doc_ids = set()
        for row in doc_rows:
            if "doc_id" not in row or "text" not in row:
                raise MalformedArchive("documents.jsonl rows need doc_id and text")
            doc_ids.add(row["doc_id"])
        assignment_ids = set()
        for row in assignment_rows:
            try:
                assignment = assignment_from_row(row)
            except KeyError as exc:
                raise MalformedArchive(
                    f"assignments.jsonl row missing field {exc}") from exc
            if assignment.doc_id not in doc_ids:
                raise MalformedArchive(
                    f"assignment {assignment.assignment_id} references"
                    f" document {assignment.doc_id!r} not in archive")
            assignment_ids.add(assignment.assignment_id)
            if assignment.frame not in self.taxonomy.frames_by_id:
                warnings.append(
                    f"OrphanFrame: assignment {assignment.assignment_id}"
                    f" uses {assignment.frame!r}, unknown to this taxonomy")
        for event in event_rows:
            if event.get("assignment_id") not in assignment_ids:
                raise MalformedArchive(
                    f"history event references unknown assignment"
                    f" {event.get('assignment_id')!r}")

        with self._mutex, self._locked():
            if corpus_id in self._corpus_docs or (self.root / corpus_id).exists():
                raise CorpusExists(f"corpus {corpus_id!r} already exists")
            for doc_id in doc_ids:
                if doc_id in self._docs:
                    raise DuplicateDocument(
                        f"doc_id {doc_id!r} already exists in corpus"
                        f" {self._docs[doc_id][0]!r}")
            target = self.root / corpus_id
            target.mkdir()
            for name in ("documents.jsonl", "assignments.jsonl", "history.jsonl"):
                with open(target / name, "wb") as handle:
                    handle.write(blobs[name])
                    handle.flush()
                    os.fsync(handle.fileno())

            self._corpus_docs[corpus_id] = []
            self._corpus_assignments[corpus_id] = []
            for row in doc_rows:
                doc = Document(doc_id=row["doc_id"], text=row["text"],
                               metadata=row.get("metadata", {}))
                self._docs[doc.doc_id] = (corpus_id, doc)
                self._corpus_docs[corpus_id].append(doc.doc_id)
            for row in assignment_rows:
                assignment = assignment_from_row(row)
                self._creations[assignment.assignment_id] = assignment
                self._assignment_corpus[assignment.assignment_id] = corpus_id
                self._corpus_assignments[corpus_id].append(
                    assignment.assignment_id)
            for event in event_rows:
                self._history.setdefault(
                    event["assignment_id"], []).append(event)

        return ImportResult(corpus_id=corpus_id, documents=len(doc_rows),
                            assignments=len(assignment_rows),
                            events=len(event_rows), warnings=tuple(warnings))


class _StoreLock:
    """Advisory whole-store file lock held for the duration of a mutation."""

    def __init__(self, store):
        self._handle = store._lock_handle

    def __enter__(self):
        fcntl.flock(self._handle.fileno(), fcntl.LOCK_EX)
        return self

    def __exit__(self, *exc_info):
        fcntl.flock(self._handle.fileno(), fcntl.LOCK_UN)
        return False
