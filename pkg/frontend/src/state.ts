// Review session state: the frame tree, the cursor over a document's
// assignments, and the queue of decisions awaiting server acknowledgement.

import { ServiceError } from "./api.js";
import type {
  AssignmentRow,
  CandidatesPage,
  DecisionBody,
  DocumentPayload,
  FrameRow,
  SuppressedRow,
  TaxonomyPayload,
} from "./types.js";

// ---------------------------------------------------------------- frame tree

export interface FrameNode {
  frame: FrameRow;
  children: FrameNode[];
}

// The service lists frames in schema order with every parent ahead of its
// children, so a single pass builds the tree without reordering anything.
export function buildFrameTree(taxonomy: TaxonomyPayload): FrameNode[] {
  const roots: FrameNode[] = [];
  const byId = new Map<string, FrameNode>();
  for (const frame of taxonomy.frames) {
    const node: FrameNode = { frame, children: [] };
    byId.set(frame.id, node);
    if (frame.parent === null) {
      roots.push(node);
    } else {
      const parent = byId.get(frame.parent);
      if (!parent) {
        throw new Error(`frame ${frame.id} arrived before parent ${frame.parent}`);
      }
      parent.children.push(node);
    }
  }
  return roots;
}

export function countNodes(nodes: FrameNode[]): number {
  let total = 0;
  for (const node of nodes) {
    total += 1 + countNodes(node.children);
  }
  return total;
}

export function flattenTree(nodes: FrameNode[]): string[] {
  const out: string[] = [];
  for (const node of nodes) {
    out.push(node.frame.id);
    out.push(...flattenTree(node.children));
  }
  return out;
}

// -------------------------------------------------------------- review state

export interface ReviewState {
  corpusId: string | null;
  docId: string | null;
  text: string;
  assignments: AssignmentRow[];
  suppressed: SuppressedRow[];
  cursor: number; // index into assignments, -1 when there are none
}

export function emptyState(): ReviewState {
  return {
    corpusId: null,
    docId: null,
    text: "",
    assignments: [],
    suppressed: [],
    cursor: -1,
  };
}

export function loadedState(
  doc: DocumentPayload,
  page: CandidatesPage,
): ReviewState {
  const state: ReviewState = {
    corpusId: page.corpus_id,
    docId: doc.doc_id,
    text: doc.text,
    assignments: page.items.slice(),
    suppressed: page.suppressed_candidates.slice(),
    cursor: page.items.length > 0 ? 0 : -1,
  };
  // land on the first thing that still needs a verdict
  const first = state.assignments.findIndex((a) => a.status === "suggested");
  if (first >= 0) state.cursor = first;
  return state;
}

export function focusedAssignment(state: ReviewState): AssignmentRow | null {
  if (state.cursor < 0 || state.cursor >= state.assignments.length) return null;
  return state.assignments[state.cursor];
}

export function moveCursor(state: ReviewState, delta: number): void {
  if (state.assignments.length === 0) {
    state.cursor = -1;
    return;
  }
  const next = state.cursor + delta;
  state.cursor = Math.max(0, Math.min(state.assignments.length - 1, next));
}

// Next assignment still marked "suggested", searching forward from the
// cursor and wrapping once; the cursor stays put when nothing is left.
export function advanceToNextSuggested(state: ReviewState): void {
  const n = state.assignments.length;
  if (n === 0) {
    state.cursor = -1;
    return;
  }
  for (let step = 1; step <= n; step += 1) {
    const idx = (state.cursor + step) % n;
    if (state.assignments[idx].status === "suggested") {
      state.cursor = idx;
      return;
    }
  }
}

export function applyServerRow(state: ReviewState, row: AssignmentRow): void {
  const idx = state.assignments.findIndex(
    (a) => a.assignment_id === row.assignment_id,
  );
  if (idx >= 0) state.assignments[idx] = row;
}

// Optimistic local echo of a decision before the server acknowledges it.
export function applyLocalDecision(
  state: ReviewState,
  assignmentId: string,
  body: DecisionBody,
): void {
  const idx = state.assignments.findIndex(
    (a) => a.assignment_id === assignmentId,
  );
  if (idx < 0) return;
  const row = state.assignments[idx];
  const status =
    body.decision === "accept"
      ? "accepted"
      : body.decision === "reject"
        ? "rejected"
        : "reassigned";
  state.assignments[idx] = {
    ...row,
    status,
    assigned_frame_after_review:
      body.decision === "reassign" ? (body.frame ?? null) : null,
    annotator_id: body.annotator_id,
  };
}

// ------------------------------------------------------------ decision queue

export interface PendingDecision {
  assignmentId: string;
  body: DecisionBody;
  requestId: string;
  attempts: number;
}

let requestSerial = 0;

export function newRequestId(): string {
  const generator = globalThis.crypto;
  if (generator && typeof generator.randomUUID === "function") {
    return generator.randomUUID();
  }
  requestSerial += 1;
  return `req-${Date.now()}-${requestSerial}`;
}

export type PostDecisionFn = (
  assignmentId: string,
  body: DecisionBody,
  requestId: string,
) => Promise<AssignmentRow>;

export interface QueueCallbacks {
  onAck(row: AssignmentRow, pending: PendingDecision): void;
  // 409: someone else moved the assignment; caller refreshes to server state
  onConflict(pending: PendingDecision, error: ServiceError): void;
  // any other rejection (422 invalid decision, 404 ...)
  onRejected(pending: PendingDecision, error: Error): void;
}

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

// Decisions drain strictly in order. A network failure keeps the head of the
// queue and retries it with the SAME request id, so a flaky connection can
// never produce two history entries for one click.
export class DecisionQueue {
  private readonly queue: PendingDecision[] = [];
  private draining = false;

  constructor(
    private readonly post: PostDecisionFn,
    private readonly callbacks: QueueCallbacks,
    private readonly retryDelayMs: number = 2000,
    private readonly maxAttempts: number = 25,
  ) {}

  get pendingCount(): number {
    return this.queue.length;
  }

  snapshot(): readonly PendingDecision[] {
    return this.queue.slice();
  }

  enqueue(assignmentId: string, body: DecisionBody): PendingDecision {
    const pending: PendingDecision = {
      assignmentId,
      body,
      requestId: newRequestId(),
      attempts: 0,
    };
    this.queue.push(pending);
    void this.drain();
    return pending;
  }

  async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.queue.length > 0) {
        const head = this.queue[0];
        head.attempts += 1;
        try {
          const row = await this.post(
            head.assignmentId,
            head.body,
            head.requestId,
          );
          this.queue.shift();
          this.callbacks.onAck(row, head);
        } catch (err) {
          if (
            err instanceof ServiceError &&
            err.isNetwork &&
            head.attempts < this.maxAttempts
          ) {
            await delay(this.retryDelayMs);
            continue; // same head, same request id
          }
          this.queue.shift();
          if (err instanceof ServiceError && err.status === 409) {
            this.callbacks.onConflict(head, err);
          } else {
            this.callbacks.onRejected(head, err as Error);
          }
        }
      }
    } finally {
      this.draining = false;
    }
  }
}
