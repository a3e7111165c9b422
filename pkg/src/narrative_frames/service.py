"""HTTP review service.

A thin JSON layer over CorpusStore for the adjudication workflow: browse
documents and their suggested assignments, record decisions, pull
distribution and agreement reports.  All state lives in the store; the
service holds no caches beyond a shared phrase index.

Error contract: every failure body is {"error": {"code", "message"}}.
Unknown resources map to 404, semantic rejections to 422, optimistic
concurrency losses to 409, unreadable JSON bodies to 400.
"""

from __future__ import annotations

import base64
import binascii
import json

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analytics
from .annotator import (AnnotatorConfig, PhraseIndex, assignment_to_row,
                        candidate_to_row, identify_candidates)
from .errors import (ConflictingConcurrentWrite, CorpusExists,
                     DegenerateMarginals, DuplicateDocument, InvalidDecision,
                     ItemMismatch, NarrativeFramesError, TaxonomyMismatch,
                     UnknownAssignment, UnknownCorpus, UnknownDocument,
                     UnknownFrame, UnmappedLabel)
from .taxonomy import serialize_taxonomy
from .text_pipeline import sentence_spans

_DEFAULT_PAGE_SIZE = 50
_MAX_PAGE_SIZE = 500

_HTTP_STATUS = {
    UnknownCorpus: 404,
    UnknownDocument: 404,
    UnknownAssignment: 404,
    UnmappedLabel: 404,
    ConflictingConcurrentWrite: 409,
    CorpusExists: 409,
    DuplicateDocument: 409,
    TaxonomyMismatch: 409,
    UnknownFrame: 422,
    InvalidDecision: 422,
    ItemMismatch: 422,
    DegenerateMarginals: 422,
}


class ApiError(Exception):
    """Request-level failure with an explicit HTTP status."""

    def __init__(self, http_status, code, message):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message


def _error_body(code, message):
    return {"error": {"code": code, "message": message}}


def _encode_page_token(offset):
    return base64.urlsafe_b64encode(str(offset).encode("ascii")).decode("ascii")


def _decode_page_token(token):
    try:
        offset = int(base64.urlsafe_b64decode(token.encode("ascii")))
    except (ValueError, binascii.Error):
        raise ApiError(400, "bad_page_token",
                       f"unreadable page token {token!r}") from None
    if offset < 0:
        raise ApiError(400, "bad_page_token",
                       f"unreadable page token {token!r}")
    return offset


def _snippet(text, spans, sentence_index):
    """The assignment's sentence with one sentence of context each side."""
    if not spans:
        return ""
    lo = max(0, sentence_index - 1)
    hi = min(len(spans) - 1, sentence_index + 1)
    return text[spans[lo][0]:spans[hi][1]].strip()


def create_app(store, taxonomy, config=None, ui_dir=None):
    if config is None:
        config = AnnotatorConfig()
    index = PhraseIndex(taxonomy)
    app = FastAPI(title="narrative-frames", docs_url=None, redoc_url=None)

    @app.exception_handler(NarrativeFramesError)
    async def domain_error(request, exc):
        status = _HTTP_STATUS.get(type(exc), 422)
        return JSONResponse(status_code=status,
                            content=_error_body(exc.code, str(exc)))

    @app.exception_handler(ApiError)
    async def api_error(request, exc):
        return JSONResponse(status_code=exc.http_status,
                            content=_error_body(exc.code, exc.message))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request, exc):
        return JSONResponse(status_code=422,
                            content=_error_body("validation_error", str(exc)))

    # --- taxonomy and corpora -------------------------------------------------------

    @app.get("/taxonomy")
    async def get_taxonomy():
        return serialize_taxonomy(taxonomy)

    @app.get("/corpora")
    async def get_corpora():
        rows = []
        for corpus_id in store.corpora():
            rows.append({
                "corpus_id": corpus_id,
                "documents": len(store.documents(corpus_id)),
                "assignments": len(store.assignments(corpus_id)),
                "token_count": store.token_count(corpus_id),
            })
        return {"corpora": rows}

    @app.get("/corpora/{corpus_id}/distribution")
    async def get_distribution(corpus_id: str, accepted_only: bool = False):
        dist = store.distribution(corpus_id, accepted_only=accepted_only)
        return analytics.distribution_to_row(dist)

    # --- documents and review queue ---------------------------------------------------

    @app.get("/documents/{doc_id}")
    async def get_document(doc_id: str):
        corpus_id, doc = store.get_document(doc_id)
        return {"doc_id": doc.doc_id, "corpus_id": corpus_id,
                "text": doc.text, "metadata": doc.metadata}

    @app.get("/documents/{doc_id}/candidates")
    async def get_candidates(doc_id: str, status: str = None,
                             page_token: str = None,
                             page_size: int = _DEFAULT_PAGE_SIZE):
        if not 1 <= page_size <= _MAX_PAGE_SIZE:
            raise ApiError(422, "bad_page_size",
                           f"page_size must be 1..{_MAX_PAGE_SIZE}")
        corpus_id, doc = store.get_document(doc_id)
        views = store.assignments(corpus_id, doc_id=doc_id, status=status)
        offset = _decode_page_token(page_token) if page_token else 0

        spans = sentence_spans(doc.text)
        page = views[offset:offset + page_size]
        items = []
        for view in page:
            row = assignment_to_row(view)
            row["snippet"] = _snippet(doc.text, spans, view.sentence_index)
            items.append(row)

        next_token = None
        if offset + page_size < len(views):
            next_token = _encode_page_token(offset + page_size)

        suppressed = [
            candidate_to_row(c)
            for c in identify_candidates(doc, taxonomy, config, index=index)
            if c.suppressed
        ]
        return {"doc_id": doc_id, "corpus_id": corpus_id, "items": items,
                "total": len(views), "next_page_token": next_token,
                "suppressed_candidates": suppressed}

    # --- adjudication -----------------------------------------------------------------

    @app.post("/assignments/{assignment_id}/decision")
    async def post_decision(assignment_id: str, request: Request):
        raw = await request.body()
        try:
            payload = json.loads(raw) if raw else None
        except json.JSONDecodeError:
            raise ApiError(400, "malformed_json",
                           "request body is not valid JSON") from None
        if not isinstance(payload, dict):
            raise ApiError(400, "malformed_json",
                           "request body must be a JSON object")
        expected_revision = payload.get("expected_revision")
        if expected_revision is not None and not isinstance(
                expected_revision, int):
            raise ApiError(422, "invalid_decision",
                           "expected_revision must be an integer")
        request_id = (request.headers.get("x-request-id")
                      or payload.get("request_id"))
        view = store.record_decision(
            assignment_id,
            payload.get("decision"),
            payload.get("annotator_id"),
            frame=payload.get("frame"),
            request_id=request_id,
            expected_revision=expected_revision)
        return assignment_to_row(view)

    # --- reports ----------------------------------------------------------------------

    @app.get("/reports/agreement")
    async def get_agreement(corpus: str, a: str, b: str):
        labels_a, labels_b = store.joint_labels(corpus, a, b)
        result = analytics.cohens_kappa(labels_a, labels_b)
        return analytics.kappa_to_row(result)

    @app.get("/reports/compare")
    async def get_compare(a: str, b: str, accepted_only: bool = False):
        dist_a = store.distribution(a, accepted_only=accepted_only)
        dist_b = store.distribution(b, accepted_only=accepted_only)
        result = analytics.compare_corpora(dist_a, dist_b)
        return analytics.comparison_to_row(result)

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app
