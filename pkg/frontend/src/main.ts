// Application wiring: fetch, state, render, keyboard. Everything testable
// lives in the sibling modules; this file just connects them to the page.

import {
  getAllCandidates,
  getCorpora,
  getDocument,
  getTaxonomy,
  postDecision,
  ServiceError,
} from "./api.js";
import {
  refreshAgreementPanel,
  refreshDistributionPanel,
} from "./dashboard.js";
import { attachKeyboard, KEY_BINDINGS, type KeyAction } from "./keyboard.js";
import {
  renderBanner,
  renderDocumentView,
  renderFrameTree,
  effectiveFrame,
} from "./render.js";
import {
  advanceToNextSuggested,
  applyLocalDecision,
  applyServerRow,
  buildFrameTree,
  DecisionQueue,
  emptyState,
  focusedAssignment,
  loadedState,
  moveCursor,
  type ReviewState,
} from "./state.js";
import type { DecisionBody, DecisionVerb, TaxonomyPayload } from "./types.js";

const ANNOTATOR_STORAGE_KEY = "nf.review.annotator";
const DASHBOARD_POLL_MS = 15000;

function requireElement<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} in page shell`);
  return el as T;
}

function boot(): void {
  const corpusSelect = requireElement<HTMLSelectElement>("corpus-select");
  const docInput = requireElement<HTMLInputElement>("doc-input");
  const loadButton = requireElement<HTMLButtonElement>("load-button");
  const annotatorInput = requireElement<HTMLInputElement>("annotator-input");
  const queueStatus = requireElement<HTMLElement>("queue-status");
  const bannerArea = requireElement<HTMLElement>("banner-area");
  const documentPane = requireElement<HTMLElement>("document-pane");
  const assignmentCard = requireElement<HTMLElement>("assignment-card");
  const distributionPanel = requireElement<HTMLElement>("distribution-panel");
  const acceptedOnlyBox = requireElement<HTMLInputElement>("accepted-only");
  const agreementPanel = requireElement<HTMLElement>("agreement-panel");
  const agreementA = requireElement<HTMLInputElement>("agreement-a");
  const agreementB = requireElement<HTMLInputElement>("agreement-b");
  const agreementButton = requireElement<HTMLButtonElement>("agreement-button");
  const treeModal = requireElement<HTMLElement>("tree-modal");
  const treeContainer = requireElement<HTMLElement>("tree-container");
  const keyLegend = requireElement<HTMLElement>("key-legend");

  let taxonomy: TaxonomyPayload | null = null;
  let state: ReviewState = emptyState();
  let reassignTarget: string | null = null;

  annotatorInput.value =
    window.localStorage.getItem(ANNOTATOR_STORAGE_KEY) ?? "analyst";
  annotatorInput.addEventListener("change", () => {
    window.localStorage.setItem(ANNOTATOR_STORAGE_KEY, annotatorInput.value);
  });

  keyLegend.textContent = KEY_BINDINGS.map(
    (b) => `${b.key} ${b.action}`,
  ).join("  ·  ");

  const showBanner = (message: string, kind: "error" | "info") => {
    const banner = renderBanner(message, kind);
    bannerArea.replaceChildren(banner);
    window.setTimeout(() => {
      if (banner.parentElement === bannerArea) banner.remove();
    }, 6000);
  };

  const updateQueueStatus = () => {
    queueStatus.textContent =
      queue.pendingCount > 0 ? `${queue.pendingCount} pending` : "";
  };

  const refreshDashboard = () => {
    if (!state.corpusId) return;
    void refreshDistributionPanel(
      distributionPanel,
      state.corpusId,
      acceptedOnlyBox.checked,
    );
  };

  const renderAll = () => {
    const focused = focusedAssignment(state);
    documentPane.replaceChildren(
      renderDocumentView(
        state.text,
        state.assignments,
        state.suppressed,
        focused?.assignment_id ?? null,
      ),
    );
    const marked = documentPane.querySelector(".focused");
    if (marked && typeof marked.scrollIntoView === "function") {
      marked.scrollIntoView({ block: "nearest" });
    }
    renderAssignmentCard();
    updateQueueStatus();
  };

  const renderAssignmentCard = () => {
    const row = focusedAssignment(state);
    if (!row) {
      assignmentCard.textContent = state.docId
        ? "nothing focused"
        : "load a document to begin";
      return;
    }
    const lines = [
      `"${row.surface}" -> ${effectiveFrame(row)} [${row.status}]`,
      `score ${row.score}  revision ${row.revision}`,
      row.alternates.length ? `alternates: ${row.alternates.join(", ")}` : "",
      row.rationale,
      row.snippet ?? "",
    ].filter(Boolean);
    assignmentCard.replaceChildren(
      ...lines.map((text) => {
        const p = document.createElement("p");
        p.textContent = text;
        return p;
      }),
    );
  };

  const reloadCandidates = async () => {
    if (!state.docId) return;
    try {
      const doc = await getDocument(state.docId);
      const page = await getAllCandidates(doc.doc_id);
      const cursorBefore = state.cursor;
      state = loadedState(doc, page);
      state.cursor = Math.min(cursorBefore, state.assignments.length - 1);
      renderAll();
    } catch (err) {
      showBanner(
        err instanceof ServiceError ? err.message : "reload failed",
        "error",
      );
    }
  };

  const queue = new DecisionQueue(postDecision, {
    onAck: (row) => {
      applyServerRow(state, row);
      renderAll();
      refreshDashboard();
    },
    onConflict: (pending) => {
      showBanner(
        `decision on ${pending.assignmentId} conflicted with a newer change;` +
          " view refreshed, please review again",
        "error",
      );
      void reloadCandidates();
    },
    onRejected: (pending, error) => {
      showBanner(`decision on ${pending.assignmentId} failed: ${error.message}`, "error");
      void reloadCandidates();
    },
  });

  const decide = (verb: DecisionVerb, frame?: string) => {
    const row = focusedAssignment(state);
    if (!row) return;
    if (row.status !== "suggested" && verb !== "reassign") {
      showBanner(`already ${row.status}; j/k to move on`, "info");
      return;
    }
    const body: DecisionBody = {
      decision: verb,
      annotator_id: annotatorInput.value || "analyst",
      expected_revision: row.revision,
    };
    if (verb === "reassign") {
      if (!frame) return;
      body.frame = frame;
    }
    applyLocalDecision(state, row.assignment_id, body);
    advanceToNextSuggested(state);
    queue.enqueue(row.assignment_id, body);
    renderAll();
  };

  const openTree = () => {
    const row = focusedAssignment(state);
    if (!row || !taxonomy) return;
    reassignTarget = row.assignment_id;
    treeModal.hidden = false;
  };

  const closeTree = () => {
    reassignTarget = null;
    treeModal.hidden = true;
  };

  const onPickFrame = (frameId: string) => {
    if (!reassignTarget) return;
    const row = focusedAssignment(state);
    if (!row || row.assignment_id !== reassignTarget) {
      closeTree();
      return;
    }
    closeTree();
    decide("reassign", frameId);
  };

  const onKey = (action: KeyAction) => {
    if (!treeModal.hidden && action !== "dismiss") return;
    switch (action) {
      case "accept":
        decide("accept");
        break;
      case "reject":
        decide("reject");
        break;
      case "reassign":
        openTree();
        break;
      case "next":
        moveCursor(state, 1);
        renderAll();
        break;
      case "previous":
        moveCursor(state, -1);
        renderAll();
        break;
      case "dismiss":
        closeTree();
        break;
    }
  };

  attachKeyboard(window, onKey);

  loadButton.addEventListener("click", async () => {
    const docId = docInput.value.trim();
    if (!docId) return;
    try {
      const doc = await getDocument(docId);
      const page = await getAllCandidates(docId);
      state = loadedState(doc, page);
      if (corpusSelect.value !== state.corpusId) {
        corpusSelect.value = state.corpusId ?? "";
      }
      renderAll();
      refreshDashboard();
    } catch (err) {
      showBanner(
        err instanceof ServiceError
          ? `could not load ${docId}: ${err.message}`
          : `could not load ${docId}`,
        "error",
      );
    }
  });

  docInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") loadButton.click();
  });

  acceptedOnlyBox.addEventListener("change", refreshDashboard);

  agreementButton.addEventListener("click", () => {
    if (!state.corpusId) return;
    void refreshAgreementPanel(
      agreementPanel,
      state.corpusId,
      agreementA.value.trim(),
      agreementB.value.trim(),
    );
  });

  treeModal.addEventListener("click", (event) => {
    if (event.target === treeModal) closeTree();
  });

  window.setInterval(refreshDashboard, DASHBOARD_POLL_MS);

  void (async () => {
    try {
      taxonomy = await getTaxonomy();
      treeContainer.replaceChildren(
        renderFrameTree(buildFrameTree(taxonomy), onPickFrame),
      );
      const corpora = await getCorpora();
      corpusSelect.replaceChildren(
        ...corpora.map((row) => {
          const option = document.createElement("option");
          option.value = row.corpus_id;
          option.textContent =
            `${row.corpus_id} (${row.documents} docs, ` +
            `${row.assignments} spans)`;
          return option;
        }),
      );
    } catch (err) {
      showBanner(
        err instanceof ServiceError
          ? `service unavailable: ${err.message}`
          : "service unavailable",
        "error",
      );
    }
  })();
}

if (document.getElementById("app")) {
  boot();
}
