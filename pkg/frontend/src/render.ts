// DOM builders. Everything here is a pure function from data to elements;
// no fetching, no state, so the whole module runs under jsdom.

import type { FrameNode } from "./state.js";
import type {
  AssignmentRow,
  DistributionPayload,
  SuppressedRow,
} from "./types.js";

const STATUS_CLASS: Record<string, string> = {
  suggested: "span-suggested",
  accepted: "span-accepted",
  rejected: "span-rejected",
  reassigned: "span-reassigned",
};

// The frame shown on a chip: the review verdict when there is one,
// otherwise the engine's suggestion.
export function effectiveFrame(row: AssignmentRow): string {
  if (row.status === "reassigned" && row.assigned_frame_after_review) {
    return row.assigned_frame_after_review;
  }
  return row.frame;
}

interface Piece {
  start: number;
  end: number;
  assignment?: AssignmentRow;
  suppressed?: SuppressedRow;
}

export function renderDocumentView(
  text: string,
  assignments: AssignmentRow[],
  suppressed: SuppressedRow[],
  focusedId: string | null,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "document-view";

  if (assignments.length === 0 && suppressed.length === 0) {
    const note = document.createElement("p");
    note.className = "empty-state";
    note.textContent = "no candidates";
    container.appendChild(note);
  }

  const pieces: Piece[] = [
    ...assignments.map((a) => ({
      start: a.char_start,
      end: a.char_end,
      assignment: a,
    })),
    ...suppressed.map((s) => ({
      start: s.char_start,
      end: s.char_end,
      suppressed: s,
    })),
  ].sort((a, b) => a.start - b.start);

  const body = document.createElement("p");
  body.className = "document-text";
  let pos = 0;
  for (const piece of pieces) {
    if (piece.start > pos) {
      body.appendChild(document.createTextNode(text.slice(pos, piece.start)));
    }
    if (piece.assignment) {
      body.appendChild(renderAssignmentSpan(text, piece.assignment, focusedId));
    } else if (piece.suppressed) {
      body.appendChild(renderSuppressedSpan(text, piece.suppressed));
    }
    pos = piece.end;
  }
  if (pos < text.length) {
    body.appendChild(document.createTextNode(text.slice(pos)));
  }
  container.appendChild(body);
  return container;
}

function renderAssignmentSpan(
  text: string,
  row: AssignmentRow,
  focusedId: string | null,
): HTMLElement {
  const mark = document.createElement("mark");
  mark.className = `span ${STATUS_CLASS[row.status] ?? "span-suggested"}`;
  if (row.assignment_id === focusedId) mark.classList.add("focused");
  mark.dataset.assignmentId = row.assignment_id;
  mark.appendChild(
    document.createTextNode(text.slice(row.char_start, row.char_end)),
  );
  const chip = document.createElement("span");
  chip.className = "chip";
  chip.textContent = effectiveFrame(row);
  mark.appendChild(chip);
  mark.title = `${row.rationale} (lexeme: ${row.matched_lexeme})`;
  return mark;
}

function renderSuppressedSpan(
  text: string,
  row: SuppressedRow,
): HTMLElement {
  const span = document.createElement("span");
  span.className = "span-suppressed";
  span.dataset.suppressed = "true";
  span.title = `literal topic: ${row.frames.join(", ")}`;
  span.textContent = text.slice(row.char_start, row.char_end);
  return span;
}

// ---------------------------------------------------------------- frame tree

export function renderFrameTree(
  nodes: FrameNode[],
  onPick: (frameId: string) => void,
): HTMLElement {
  const list = document.createElement("ul");
  list.className = "frame-tree";
  for (const node of nodes) {
    list.appendChild(renderFrameNode(node, onPick));
  }
  return list;
}

function renderFrameNode(
  node: FrameNode,
  onPick: (frameId: string) => void,
): HTMLElement {
  const item = document.createElement("li");
  const button = document.createElement("button");
  button.type = "button";
  button.className = "frame-pick";
  button.dataset.frameId = node.frame.id;
  button.textContent = node.frame.id;
  button.title = node.frame.description;
  button.addEventListener("click", (event) => {
    event.preventDefault();
    onPick(node.frame.id);
  });

  if (node.children.length === 0) {
    item.appendChild(button);
    return item;
  }
  const details = document.createElement("details");
  const summary = document.createElement("summary");
  summary.appendChild(button);
  details.appendChild(summary);
  const children = document.createElement("ul");
  for (const child of node.children) {
    children.appendChild(renderFrameNode(child, onPick));
  }
  details.appendChild(children);
  item.appendChild(details);
  return item;
}

// ----------------------------------------------------------------- dashboard

export function renderDashboard(dist: DistributionPayload): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "dashboard";

  const heading = document.createElement("h3");
  heading.textContent = dist.accepted_only
    ? "Distribution (accepted only)"
    : "Distribution (all unrejected)";
  panel.appendChild(heading);

  const meta = document.createElement("p");
  meta.className = "dashboard-meta";
  meta.textContent =
    `${dist.total} assignments over ${dist.token_count} tokens` +
    ` (registry ${dist.taxonomy_version})`;
  panel.appendChild(meta);

  const rows = dist.present
    .map((frame) => ({ frame, stat: dist.per_frame[frame] }))
    .sort(
      (a, b) =>
        b.stat.count - a.stat.count || a.frame.localeCompare(b.frame),
    );

  const table = document.createElement("table");
  table.className = "dashboard-table";
  for (const { frame, stat } of rows) {
    const tr = document.createElement("tr");
    tr.dataset.frame = frame;
    tr.dataset.count = String(stat.count);

    const name = document.createElement("td");
    name.className = "dash-frame";
    name.textContent = frame;
    tr.appendChild(name);

    const count = document.createElement("td");
    count.className = "dash-count";
    count.textContent = String(stat.count);
    tr.appendChild(count);

    const barCell = document.createElement("td");
    barCell.className = "dash-bar-cell";
    const bar = document.createElement("div");
    bar.className = "dash-bar";
    bar.style.width = `${Math.round(stat.share * 100)}%`;
    bar.title = `share ${(stat.share * 100).toFixed(1)}%, ` +
      `${stat.density.toFixed(2)} per 1000 tokens`;
    barCell.appendChild(bar);
    tr.appendChild(barCell);

    table.appendChild(tr);
  }
  panel.appendChild(table);

  const absent = document.createElement("p");
  absent.className = "dashboard-absent";
  absent.textContent = dist.absent.length
    ? `absent (${dist.absent.length}): ${dist.absent.join(", ")}`
    : "absent (0)";
  panel.appendChild(absent);

  return panel;
}

// -------------------------------------------------------------------- banner

export function renderBanner(
  message: string,
  kind: "error" | "info",
): HTMLElement {
  const banner = document.createElement("div");
  banner.className = `banner banner-${kind}`;
  banner.setAttribute("role", kind === "error" ? "alert" : "status");
  banner.textContent = message;
  return banner;
}
