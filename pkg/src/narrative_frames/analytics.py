"""Corpus-level statistics over frame assignments.

Three products live here: per-frame distribution tables (with explicit
absence lists, since a frame nobody reached for is itself a finding),
between-corpus keyness via smoothed log-odds, and inter-annotator agreement
as Cohen's kappa computed in exact rational arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateMarginals, ForeignAssignment, ItemMismatch,
                     TaxonomyMismatch)

# adjudication label for rejected assignments in agreement data
REJECT = "REJECT"

_SMOOTHING = 0.5


# --- frame distribution -----------------------------------------------------------

@dataclass(frozen=True)
class FrameStat:
    count: int
    share: float
    density: float


@dataclass(frozen=True)
class FrameDistribution:
    corpus_id: object
    taxonomy_version: str
    token_count: int
    total: int
    accepted_only: bool
    per_frame: dict
    present: tuple
    absent: tuple
    orphaned: tuple


def _effective_frame(assignment, accepted_only):
    status = assignment.status
    if status == "rejected":
        return None
    if status == "reassigned":
        return assignment.assigned_frame_after_review
    if status == "accepted":
        return assignment.frame
    # suggested
    return None if accepted_only else assignment.frame


def frame_distribution(assignments, taxonomy, token_count, corpus_id=None,
                       doc_ids=None, accepted_only=False):
    """Tabulate effective frame counts over a corpus.

    Every taxonomy frame appears in per_frame, zero or not; present and
    absent partition the full frame inventory.  Rejected assignments never
    count, reassigned ones count under their review frame, and suggested
    ones count only when accepted_only is off.  Assignments whose frame no
    longer exists in the taxonomy are reported in orphaned rather than
    silently dropped.  When doc_ids is given, an assignment from any other
    document raises ForeignAssignment.
    """
    counts = {frame_id: 0 for frame_id in taxonomy.frames_by_id}
    orphans = {}
    total = 0
    for a in assignments:
        if doc_ids is not None and a.doc_id not in doc_ids:
            raise ForeignAssignment(
                f"assignment {a.assignment_id} belongs to document {a.doc_id},"
                f" which is not in corpus {corpus_id!r}")
        frame_id = _effective_frame(a, accepted_only)
        if frame_id is None:
            continue
        if frame_id in counts:
            counts[frame_id] += 1
            total += 1
        else:
            orphans[frame_id] = orphans.get(frame_id, 0) + 1

    per_frame = {}
    for frame_id in taxonomy.frames_by_id:
        count = counts[frame_id]
        share = count / total if total else 0.0
        density = 1000.0 * count / token_count if token_count else 0.0
        per_frame[frame_id] = FrameStat(count=count, share=share, density=density)

    present = tuple(f for f in taxonomy.frame_ids() if counts[f] > 0)
    absent = tuple(f for f in taxonomy.frame_ids() if counts[f] == 0)
    return FrameDistribution(
        corpus_id=corpus_id,
        taxonomy_version=taxonomy.version,
        token_count=token_count,
        total=total,
        accepted_only=accepted_only,
        per_frame=per_frame,
        present=present,
        absent=absent,
        orphaned=tuple(sorted(orphans.items())),
    )


# --- corpus comparison ------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    frame: str
    count_a: int
    count_b: int
    log_odds: float


@dataclass(frozen=True)
class ComparisonResult:
    corpus_a: object
    corpus_b: object
    taxonomy_version: str
    total_a: int
    total_b: int
    rows: tuple


def _logit(count, total):
    return math.log((count + _SMOOTHING) / (total - count + _SMOOTHING))


def compare_corpora(dist_a, dist_b):
    """Per-frame keyness between two distributions.

    Uses log-odds with 0.5 smoothing on assignment counts, where each
    corpus total is its overall assignment count.  Computed as a difference
    of per-corpus logits, so swapping the corpora flips every sign exactly.
    Rows come back sorted by log-odds, highest (most corpus-a-leaning)
    first, ties by frame id.
    """
    if dist_a.taxonomy_version != dist_b.taxonomy_version:
        raise TaxonomyMismatch(
            f"distributions use taxonomy versions {dist_a.taxonomy_version!r}"
            f" and {dist_b.taxonomy_version!r}")
    if set(dist_a.per_frame) != set(dist_b.per_frame):
        raise TaxonomyMismatch("distributions cover different frame inventories")

    rows = []
    for frame_id in dist_a.per_frame:
        count_a = dist_a.per_frame[frame_id].count
        count_b = dist_b.per_frame[frame_id].count
        score = _logit(count_a, dist_a.total) - _logit(count_b, dist_b.total)
        rows.append(ComparisonRow(frame=frame_id, count_a=count_a,
                                  count_b=count_b, log_odds=score))
    rows.sort(key=lambda row: (-row.log_odds, row.frame))
    return ComparisonResult(
        corpus_a=dist_a.corpus_id,
        corpus_b=dist_b.corpus_id,
        taxonomy_version=dist_a.taxonomy_version,
        total_a=dist_a.total,
        total_b=dist_b.total,
        rows=tuple(rows),
    )


# --- agreement ---------------------------------------------------------------------

@dataclass(frozen=True)
class KappaResult:
    n_items: int
    observed_agreement: float
    expected_agreement: float
    kappa: float
    per_frame: dict


def _as_label_map(labels, side):
    if hasattr(labels, "items"):
        return dict(labels.items())
    out = {}
    for item, label in labels:
        if item in out:
            raise ItemMismatch(f"annotator {side}: duplicate item {item!r}")
        out[item] = label
    return out


def _kappa_fraction(pairs):
    """Exact Cohen's kappa over (label_a, label_b) pairs.

    Returns a Fraction; raises DegenerateMarginals when chance agreement
    is total and the statistic is undefined.
    """
    n = len(pairs)
    if n == 0:
        raise DegenerateMarginals("no items to compare")
    agree = sum(1 for a, b in pairs if a == b)
    count_a = {}
    count_b = {}
    for a, b in pairs:
        count_a[a] = count_a.get(a, 0) + 1
        count_b[b] = count_b.get(b, 0) + 1
    p_o = Fraction(agree, n)
    p_e = sum((Fraction(count_a[label], n) * Fraction(count_b.get(label, 0), n)
               for label in count_a), Fraction(0))
    if p_e == 1:
        raise DegenerateMarginals(
            "both annotators used a single identical label; kappa undefined")
    return (p_o - p_e) / (1 - p_e)


def cohens_kappa(labels_a, labels_b):
    """Cohen's kappa between two annotators' label maps.

    Inputs are mappings (or pair iterables) from item id to label; the
    REJECT constant is a legal label.  Item sets must match exactly, else
    ItemMismatch.  The headline statistic is exact rational arithmetic
    converted to float at the end; per_frame holds one-vs-rest kappas for
    every non-REJECT label observed, with None where a one-vs-rest table
    is degenerate.
    """
    map_a = _as_label_map(labels_a, "a")
    map_b = _as_label_map(labels_b, "b")
    if set(map_a) != set(map_b):
        only_a = sorted(set(map_a) - set(map_b))[:5]
        only_b = sorted(set(map_b) - set(map_a))[:5]
        raise ItemMismatch(
            f"annotators labeled different items (only a: {only_a},"
            f" only b: {only_b})")

    items = sorted(map_a)
    pairs = [(map_a[item], map_b[item]) for item in items]
    kappa = _kappa_fraction(pairs)

    n = len(pairs)
    agree = sum(1 for a, b in pairs if a == b)
    p_o = Fraction(agree, n)
    count_a = {}
    count_b = {}
    for a, b in pairs:
        count_a[a] = count_a.get(a, 0) + 1
        count_b[b] = count_b.get(b, 0) + 1
    p_e = sum((Fraction(count_a[label], n) * Fraction(count_b.get(label, 0), n)
               for label in count_a), Fraction(0))

    labels = sorted(set(count_a) | set(count_b))
    per_frame = {}
    for label in labels:
        if label == REJECT:
            continue
        collapsed = [(a == label, b == label) for a, b in pairs]
        try:
            per_frame[label] = float(_kappa_fraction(collapsed))
        except DegenerateMarginals:
            per_frame[label] = None

    return KappaResult(
        n_items=n,
        observed_agreement=float(p_o),
        expected_agreement=float(p_e),
        kappa=float(kappa),
        per_frame=per_frame,
    )


# --- rendering ---------------------------------------------------------------------

def distribution_to_row(dist):
    return {
        "corpus_id": dist.corpus_id,
        "taxonomy_version": dist.taxonomy_version,
        "token_count": dist.token_count,
        "total": dist.total,
        "accepted_only": dist.accepted_only,
        "per_frame": {
            frame_id: {"count": stat.count, "share": stat.share,
                       "density": stat.density}
            for frame_id, stat in dist.per_frame.items()
        },
        "present": list(dist.present),
        "absent": list(dist.absent),
        "orphaned": [[frame_id, count] for frame_id, count in dist.orphaned],
    }


def comparison_to_row(result):
    return {
        "corpus_a": result.corpus_a,
        "corpus_b": result.corpus_b,
        "taxonomy_version": result.taxonomy_version,
        "total_a": result.total_a,
        "total_b": result.total_b,
        "rows": [
            {"frame": row.frame, "count_a": row.count_a,
             "count_b": row.count_b, "log_odds": row.log_odds}
            for row in result.rows
        ],
    }


def kappa_to_row(result):
    return {
        "n_items": result.n_items,
        "observed_agreement": result.observed_agreement,
        "expected_agreement": result.expected_agreement,
        "kappa": result.kappa,
        "per_frame": dict(result.per_frame),
    }


_RENDER_FORMATS = ("json", "csv", "text")


def _check_format(fmt):
    if fmt not in _RENDER_FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of "
                         + ", ".join(_RENDER_FORMATS))


def render_distribution(dist, fmt="text"):
    _check_format(fmt)
    if fmt == "json":
        return json.dumps(distribution_to_row(dist), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["frame", "count", "share", "density_per_1000"])
        for frame_id, stat in dist.per_frame.items():
            writer.writerow([frame_id, stat.count,
                             f"{stat.share:.6f}", f"{stat.density:.6f}"])
        return buf.getvalue()
    lines = [
        f"corpus: {dist.corpus_id}",
        f"taxonomy: {dist.taxonomy_version}"
        + ("  (accepted only)" if dist.accepted_only else ""),
        f"tokens: {dist.token_count}  assignments: {dist.total}",
        "",
        f"{'frame':<34} {'count':>6} {'share':>8} {'per 1000':>9}",
    ]
    for frame_id, stat in dist.per_frame.items():
        if stat.count == 0:
            continue
        lines.append(f"{frame_id:<34} {stat.count:>6} "
                     f"{stat.share:>8.4f} {stat.density:>9.4f}")
    lines.append("")
    lines.append(f"absent frames ({len(dist.absent)}): "
                 + (", ".join(dist.absent) if dist.absent else "none"))
    if dist.orphaned:
        lines.append("orphaned (not in this taxonomy): "
                     + ", ".join(f"{f}×{c}" for f, c in dist.orphaned))
    return "\n".join(lines) + "\n"


def render_comparison(result, fmt="text"):
    _check_format(fmt)
    if fmt == "json":
        return json.dumps(comparison_to_row(result), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["frame", "count_a", "count_b", "log_odds"])
        for row in result.rows:
            writer.writerow([row.frame, row.count_a, row.count_b,
                             f"{row.log_odds:.9f}"])
        return buf.getvalue()
    lines = [
        f"corpus a: {result.corpus_a} ({result.total_a} assignments)",
        f"corpus b: {result.corpus_b} ({result.total_b} assignments)",
        "",
        f"{'frame':<34} {'a':>6} {'b':>6} {'log-odds':>10}",
    ]
    for row in result.rows:
        if row.count_a == 0 and row.count_b == 0:
            continue
        lines.append(f"{row.frame:<34} {row.count_a:>6} {row.count_b:>6} "
                     f"{row.log_odds:>10.4f}")
    return "\n".join(lines) + "\n"


def render_kappa(result, fmt="text"):
    _check_format(fmt)
    if fmt == "json":
        return json.dumps(kappa_to_row(result), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["frame", "kappa"])
        writer.writerow(["__overall__", f"{result.kappa:.12f}"])
        for label, value in sorted(result.per_frame.items()):
            writer.writerow([label, "" if value is None else f"{value:.12f}"])
        return buf.getvalue()
    lines = [
        f"items: {result.n_items}",
        f"observed agreement: {result.observed_agreement:.6f}",
        f"expected agreement: {result.expected_agreement:.6f}",
        f"kappa: {result.kappa:.6f}",
    ]
    if result.per_frame:
        lines.append("")
        lines.append("one-vs-rest:")
        for label, value in sorted(result.per_frame.items()):
            shown = "n/a" if value is None else f"{value:.6f}"
            lines.append(f"  {label:<32} {shown}")
    return "\n".join(lines) + "\n"
