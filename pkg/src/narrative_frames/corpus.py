"""Corpus and document containers plus the two supported input formats.

Documents arrive either as JSONL (one object per line with doc_id and text)
or as a directory of plain .txt files whose stems become document ids.  Text
is normalized to NFC on the way in so offsets and token counts are stable no
matter how the source files were encoded.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateDocument, MalformedArchive, UnknownDocument


@dataclass(frozen=True, eq=True)
class Document:
    doc_id: str
    text: str
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=True)
class Corpus:
    corpus_id: str
    documents: tuple

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise DuplicateDocument(
                    f"corpus {self.corpus_id}: duplicate doc_id {doc.doc_id}")
            seen.add(doc.doc_id)

    def document(self, doc_id):
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise UnknownDocument(f"no document {doc_id!r} in corpus {self.corpus_id}")


def _make_document(doc_id, text, metadata):
    return Document(doc_id=doc_id,
                    text=unicodedata.normalize("NFC", text),
                    metadata=metadata)


def read_documents_jsonl(path):
    """Read documents from a JSONL file.

    Each line must be an object with at least doc_id and text; any other
    keys are kept as metadata.  Line order is preserved.
    """
    docs = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedArchive(
                    f"{path}: line {lineno} is not valid JSON: {exc}") from exc
            if not isinstance(row, dict) or "doc_id" not in row or "text" not in row:
                raise MalformedArchive(
                    f"{path}: line {lineno} must be an object with doc_id and text")
            doc_id = row["doc_id"]
            text = row["text"]
            if not isinstance(doc_id, str) or not isinstance(text, str):
                raise MalformedArchive(
                    f"{path}: line {lineno}: doc_id and text must be strings")
            if doc_id in seen:
                raise DuplicateDocument(f"{path}: duplicate doc_id {doc_id}")
            seen.add(doc_id)
            metadata = {k: v for k, v in row.items() if k not in ("doc_id", "text")}
            docs.append(_make_document(doc_id, text, metadata))
    return docs


def read_documents_dir(path):
    """Read every *.txt file under a directory, sorted by filename.

    The filename stem becomes the doc_id.
    """
    root = Path(path)
    docs = []
    for entry in sorted(root.glob("*.txt")):
        text = entry.read_text(encoding="utf-8")
        docs.append(_make_document(entry.stem, text, {"source_file": entry.name}))
    stems = [d.doc_id for d in docs]
    if len(stems) != len(set(stems)):
        raise DuplicateDocument(f"{root}: duplicate document stems")
    return docs


def read_documents(path):
    """Dispatch on the path: directory of .txt files or a JSONL file."""
    target = Path(path)
    if target.is_dir():
        return read_documents_dir(target)
    return read_documents_jsonl(target)
