"""Command-line interface.

Exit codes: 0 on success, 1 when a domain rule rejects the input (ungrouped
labels, malformed registries, unknown corpora, and the like), 2 for usage
errors.  Line-oriented subcommands (code-statements, crosswalk) keep going
past a bad line and report failure at the end, so one typo does not waste a
batch run.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytics
from .annotator import AnnotatorConfig, PhraseIndex, annotate_document, \
    assignment_to_row, load_annotator_config
from .corpus import read_documents
from .errors import NarrativeFramesError, UnmappedLabel
from .statements import code_statement, coded_statement_to_row
from .store import CorpusStore
from .taxonomy import (default_registry_path, load_taxonomy, normalize_label)

_FORMATS = ("json", "text", "csv")


def _build_parser():
    # The shared flags are accepted both before and after the subcommand.
    # SUPPRESS keeps a subparser's unset default from clobbering a value the
    # top-level parser already read.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", metavar="PATH",
                        default=argparse.SUPPRESS,
                        help="registry JSON (default: the packaged one)")
    common.add_argument("--config", metavar="PATH",
                        default=argparse.SUPPRESS,
                        help="annotator config JSON")
    common.add_argument("--format", choices=_FORMATS,
                        default=argparse.SUPPRESS,
                        help="output format for tabular results")

    parser = argparse.ArgumentParser(
        prog="narrative-frames", parents=[common],
        description="Frame-based metaphor analysis over text corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tax = sub.add_parser("taxonomy", help="registry inspection")
    tax_sub = p_tax.add_subparsers(dest="taxonomy_command", required=True)
    tax_sub.add_parser("validate", parents=[common],
                       help="validate the registry and print counts")

    p_code = sub.add_parser("code-statements", parents=[common],
                            help="code TOPIC-is-VEHICLE statements, one per line")
    p_code.add_argument("input", nargs="?", metavar="FILE",
                        help="statement file (default: stdin)")

    p_ingest = sub.add_parser("ingest", parents=[common],
                              help="add documents to a corpus")
    p_ingest.add_argument("--store", required=True, metavar="DIR")
    p_ingest.add_argument("--corpus", required=True, metavar="ID")
    p_ingest.add_argument("input", metavar="PATH",
                          help="JSONL file or directory of .txt files")

    p_analyze = sub.add_parser("analyze", parents=[common],
                               help="run the annotator")
    p_analyze.add_argument("--store", metavar="DIR",
                           help="persist assignments into this store")
    p_analyze.add_argument("--corpus", metavar="ID")
    p_analyze.add_argument("input", nargs="?", metavar="PATH",
                           help="documents to annotate without a store")

    p_report = sub.add_parser("report", parents=[common],
                              help="frame distribution for a corpus")
    p_report.add_argument("--store", required=True, metavar="DIR")
    p_report.add_argument("--corpus", required=True, metavar="ID")
    p_report.add_argument("--accepted-only", action="store_true",
                          help="count only reviewed-and-kept assignments")

    p_compare = sub.add_parser("compare", parents=[common],
                               help="log-odds keyness between corpora")
    p_compare.add_argument("--store", required=True, metavar="DIR")
    p_compare.add_argument("--corpus-a", required=True, metavar="ID")
    p_compare.add_argument("--corpus-b", required=True, metavar="ID")
    p_compare.add_argument("--accepted-only", action="store_true")

    p_cross = sub.add_parser("crosswalk", parents=[common],
                             help="normalize external frame labels")
    p_cross.add_argument("labels", nargs="*", metavar="LABEL")
    p_cross.add_argument("--file", metavar="PATH",
                         help="file of labels, one per line")

    p_kappa = sub.add_parser("kappa", parents=[common],
                             help="inter-annotator agreement")
    p_kappa.add_argument("file_a", metavar="FILE_A",
                         help='JSONL of {"item": ..., "label": ...}')
    p_kappa.add_argument("file_b", metavar="FILE_B")

    p_serve = sub.add_parser("serve", parents=[common],
                             help="run the HTTP review service")
    p_serve.add_argument("--store", required=True, metavar="DIR")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui", metavar="DIR",
                         help="static review UI to mount at /ui")

    return parser


def _format(args):
    return getattr(args, "format", "text")


def _load_registry(args):
    path = getattr(args, "registry", None)
    return load_taxonomy(path if path else default_registry_path())


def _load_config(args):
    path = getattr(args, "config", None)
    if path:
        return load_annotator_config(path)
    return AnnotatorConfig()


# --- subcommand handlers -----------------------------------------------------------

def _cmd_taxonomy_validate(args):
    taxonomy = _load_registry(args)
    top = sum(1 for fr in taxonomy.frames if fr.parent is None)
    nested = len(taxonomy.frames) - top
    print(f"{len(taxonomy.frames)} frames ({top} top-level, {nested} nested)")
    print(f"version {taxonomy.version}, {len(taxonomy.crosswalk)} crosswalk rows")
    return 0


def _cmd_code_statements(args):
    taxonomy = _load_registry(args)
    index = PhraseIndex(taxonomy)
    if args.input:
        lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    else:
        lines = sys.stdin.read().splitlines()

    failed = False
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            coded = code_statement(line, taxonomy, index=index)
        except NarrativeFramesError as exc:
            print(f"error: {line!r}: {exc}", file=sys.stderr)
            failed = True
            continue
        if _format(args) == "json":
            print(json.dumps(coded_statement_to_row(coded), ensure_ascii=False))
        elif _format(args) == "csv":
            alts = ";".join(coded.alternates)
            print(f"{coded.frame},{coded.score:g},{alts},{coded.rationale}")
        else:
            flag = " (ambiguous split)" if coded.ambiguous_split else ""
            print(f"{coded.frame}\t{coded.score:g}\t{coded.topic} | "
                  f"{coded.vehicle}\t[{coded.rationale}]{flag}")
    return 1 if failed else 0


def _cmd_ingest(args):
    taxonomy = _load_registry(args)
    docs = read_documents(args.input)
    with CorpusStore(args.store, taxonomy) as store:
        if args.corpus not in store.corpora():
            store.create_corpus(args.corpus)
        added = store.add_documents(args.corpus, docs)
        summary = {
            "corpus": args.corpus,
            "documents_added": added,
            "total_documents": len(store.documents(args.corpus)),
            "token_count": store.token_count(args.corpus),
        }
    print(json.dumps(summary))
    return 0


def _cmd_analyze(args):
    taxonomy = _load_registry(args)
    config = _load_config(args)
    if args.store and args.corpus:
        with CorpusStore(args.store, taxonomy) as store:
            created = store.analyze(args.corpus, config)
            total = len(store.assignments(args.corpus))
        print(json.dumps({"corpus": args.corpus,
                          "new_assignments": len(created),
                          "total_assignments": total}))
        return 0
    if not args.input:
        print("error: analyze needs either --store/--corpus or an input path",
              file=sys.stderr)
        return 2
    docs = read_documents(args.input)
    index = PhraseIndex(taxonomy)
    rows = []
    for doc in docs:
        result = annotate_document(doc, taxonomy, config, index=index)
        rows.extend(assignment_to_row(a) for a in result.assignments)
    rows.sort(key=lambda row: (row["doc_id"], row["char_start"]))
    for row in rows:
        print(json.dumps(row, ensure_ascii=False))
    return 0


def _cmd_report(args):
    taxonomy = _load_registry(args)
    with CorpusStore(args.store, taxonomy) as store:
        dist = store.distribution(args.corpus, accepted_only=args.accepted_only)
    sys.stdout.write(analytics.render_distribution(dist, _format(args)))
    return 0


def _cmd_compare(args):
    taxonomy = _load_registry(args)
    with CorpusStore(args.store, taxonomy) as store:
        dist_a = store.distribution(args.corpus_a,
                                    accepted_only=args.accepted_only)
        dist_b = store.distribution(args.corpus_b,
                                    accepted_only=args.accepted_only)
    result = analytics.compare_corpora(dist_a, dist_b)
    sys.stdout.write(analytics.render_comparison(result, _format(args)))
    return 0


def _cmd_crosswalk(args):
    taxonomy = _load_registry(args)
    labels = list(args.labels)
    if args.file:
        labels.extend(line.strip()
                      for line in Path(args.file).read_text(
                          encoding="utf-8").splitlines()
                      if line.strip())
    if not labels:
        print("error: no labels given", file=sys.stderr)
        return 2

    failed = False
    for label in labels:
        try:
            mapping = normalize_label(taxonomy, label)
        except UnmappedLabel as exc:
            print(f"error: {exc}", file=sys.stderr)
            failed = True
            continue
        print(json.dumps({"label": mapping.label, "frame": mapping.frame,
                          "provisional": mapping.provisional,
                          "source_note": mapping.source_note},
                         ensure_ascii=False))
    return 1 if failed else 0


def _read_label_file(path):
    labels = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise NarrativeFramesError(
                f"{path} line {lineno}: {exc}") from exc
        if not isinstance(row, dict) or "item" not in row or "label" not in row:
            raise NarrativeFramesError(
                f"{path} line {lineno}: rows need item and label")
        labels[row["item"]] = row["label"]
    return labels


def _cmd_kappa(args):
    result = analytics.cohens_kappa(_read_label_file(args.file_a),
                                    _read_label_file(args.file_b))
    sys.stdout.write(analytics.render_kappa(result, _format(args)))
    return 0


def _cmd_serve(args):
    import uvicorn

    from .service import create_app

    taxonomy = _load_registry(args)
    config = _load_config(args)
    store = CorpusStore(args.store, taxonomy)
    app = create_app(store, taxonomy, config, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_HANDLERS = {
    "code-statements": _cmd_code_statements,
    "ingest": _cmd_ingest,
    "analyze": _cmd_analyze,
    "report": _cmd_report,
    "compare": _cmd_compare,
    "crosswalk": _cmd_crosswalk,
    "kappa": _cmd_kappa,
    "serve": _cmd_serve,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        if args.command == "taxonomy":
            return _cmd_taxonomy_validate(args)
        return _HANDLERS[args.command](args)
    except NarrativeFramesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
