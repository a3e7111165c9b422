"""Regenerate the JSON fixtures under tests/fixtures.

Everything the UI tests assert against comes from the real annotation
service: a corpus is built in a temp store, served through the HTTP app,
and every captured response is written verbatim. The CLI report for the
same store is captured too, so the dashboard test can check the UI's
numbers against the command-line ones.

Run from frontend/: python3 scripts/make_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from narrative_frames.annotator import AnnotatorConfig
from narrative_frames.cli import main as cli_main
from narrative_frames.corpus import Document
from narrative_frames.service import create_app
from narrative_frames.store import CorpusStore
from narrative_frames.taxonomy import load_default_taxonomy

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DOC_MAIN = (
    "We're being blitzed by open-source models. "
    "The war on fraud is a minefield. "
    "Racing to the top, teams overcome obstacles. "
    "Regulation is a gamble worth taking."
)
DOC_EMPTY = "Nothing figurative appears in this memo."

# the review session the UI tests replay: accept, reject, then a reassign
SESSION_PLAN = [
    ("blitzed", {"decision": "accept"}),
    ("war", {"decision": "reject"}),
    ("Racing to the top", {"decision": "reassign", "frame": "JOURNEY"}),
]


def write(name, payload):
    path = FIXTURES / name
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(Path.cwd())}")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    taxonomy = load_default_taxonomy()
    config = AnnotatorConfig(literal_topics=("GAME",))

    with tempfile.TemporaryDirectory() as tmp:
        store_dir = Path(tmp) / "store"
        with CorpusStore(store_dir, taxonomy) as store:
            store.create_corpus("review-demo")
            store.add_documents("review-demo", [
                Document(doc_id="d1", text=DOC_MAIN),
                Document(doc_id="d2", text=DOC_EMPTY),
            ])
            store.analyze("review-demo", config=config)

            client = TestClient(create_app(store, taxonomy, config=config))

            write("taxonomy.json", client.get("/taxonomy").json())
            write("corpora.json", client.get("/corpora").json())
            write("document_d1.json", client.get("/documents/d1").json())
            write("document_d2.json", client.get("/documents/d2").json())
            candidates = client.get("/documents/d1/candidates?page_size=500")
            write("candidates_d1.json", candidates.json())
            write("candidates_d2.json",
                  client.get("/documents/d2/candidates").json())

            by_surface = {item["surface"]: item
                          for item in candidates.json()["items"]}
            steps = []
            for serial, (surface, verdict) in enumerate(SESSION_PLAN, start=1):
                row = by_surface[surface]
                body = dict(verdict)
                body["annotator_id"] = "analyst"
                body["expected_revision"] = row["revision"]
                request_id = f"ui-{serial:04d}"
                response = client.post(
                    f"/assignments/{row['assignment_id']}/decision",
                    json=body, headers={"X-Request-Id": request_id})
                if response.status_code != 200:
                    sys.exit(f"decision on {surface!r} failed: "
                             f"{response.status_code} {response.text}")
                steps.append({
                    "request": {
                        "method": "POST",
                        "path": f"/assignments/{row['assignment_id']}/decision",
                        "request_id": request_id,
                        "body": body,
                    },
                    "response": {
                        "status": response.status_code,
                        "body": response.json(),
                    },
                })
            write("decision_session.json", {"steps": steps})

            write("candidates_d1_after.json",
                  client.get("/documents/d1/candidates?page_size=500").json())
            write("distribution_accepted.json",
                  client.get("/corpora/review-demo/distribution"
                             "?accepted_only=true").json())

        # same store through the CLI, for the dashboard equality check
        import contextlib
        import io

        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout):
            code = cli_main(["report", "--store", str(store_dir),
                             "--corpus", "review-demo",
                             "--accepted-only", "--format", "json"])
        if code != 0:
            sys.exit(f"cli report failed with exit code {code}")
        write("report_accepted_cli.json", json.loads(stdout.getvalue()))


if __name__ == "__main__":
    main()
