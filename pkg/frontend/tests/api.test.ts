// Client <-> service contract: paths, query strings, headers, pagination,
// and how failures surface as ServiceError.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import {
  getAllCandidates,
  getCorpora,
  getDistribution,
  getDocument,
  getTaxonomy,
  postDecision,
  ServiceError,
} from "../src/api.js";

interface RecordedCall {
  path: string;
  init?: RequestInit;
}

const calls: RecordedCall[] = [];
let responses: Array<{ status: number; body?: unknown; badJson?: boolean }>;

function fakeFetch(path: string, init?: RequestInit) {
  calls.push({ path, init });
  const next = responses.shift();
  if (!next) throw new Error(`unexpected request: ${path}`);
  return Promise.resolve({
    ok: next.status >= 200 && next.status < 300,
    status: next.status,
    json: () =>
      next.badJson
        ? Promise.reject(new SyntaxError("not json"))
        : Promise.resolve(next.body),
  } as Response);
}

beforeEach(() => {
  calls.length = 0;
  responses = [];
  vi.stubGlobal("fetch", vi.fn(fakeFetch));
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("request shapes", () => {
  it("fetches the taxonomy from its fixed path", async () => {
    responses = [{ status: 200, body: { version: "1.0.0", frames: [] } }];
    await getTaxonomy();
    expect(calls[0].path).toBe("/taxonomy");
  });

  it("unwraps the corpora envelope", async () => {
    responses = [
      { status: 200, body: { corpora: [{ corpus_id: "c1" }] } },
    ];
    const corpora = await getCorpora();
    expect(corpora).toEqual([{ corpus_id: "c1" }]);
  });

  it("escapes document ids in the path", async () => {
    responses = [{ status: 200, body: { doc_id: "a b" } }];
    await getDocument("a b");
    expect(calls[0].path).toBe("/documents/a%20b");
  });

  it("asks for accepted-only distributions explicitly", async () => {
    responses = [
      { status: 200, body: {} },
      { status: 200, body: {} },
    ];
    await getDistribution("review-demo", true);
    await getDistribution("review-demo", false);
    expect(calls[0].path).toBe(
      "/corpora/review-demo/distribution?accepted_only=true",
    );
    expect(calls[1].path).toBe("/corpora/review-demo/distribution");
  });

  it("sends the decision with its idempotency header", async () => {
    responses = [{ status: 200, body: { assignment_id: "d1:0-3" } }];
    const body = {
      decision: "accept" as const,
      annotator_id: "analyst",
      expected_revision: 1,
    };
    await postDecision("d1:0-3", body, "req-42");
    const call = calls[0];
    expect(call.path).toBe("/assignments/d1%3A0-3/decision");
    expect(call.init?.method).toBe("POST");
    const headers = call.init?.headers as Record<string, string>;
    expect(headers["X-Request-Id"]).toBe("req-42");
    expect(headers["Content-Type"]).toBe("application/json");
    expect(JSON.parse(call.init?.body as string)).toEqual(body);
  });
});

describe("pagination", () => {
  it("follows page tokens until the candidate list is complete", async () => {
    const first = { assignment_id: "d1:0-3" };
    const second = { assignment_id: "d1:9-12" };
    responses = [
      {
        status: 200,
        body: {
          items: [first],
          total: 2,
          next_page_token: "Mg==",
          suppressed_candidates: [],
        },
      },
      {
        status: 200,
        body: {
          items: [second],
          total: 2,
          next_page_token: null,
          suppressed_candidates: [],
        },
      },
    ];
    const page = await getAllCandidates("d1");
    expect(calls.map((c) => c.path)).toEqual([
      "/documents/d1/candidates",
      "/documents/d1/candidates?page_token=Mg%3D%3D",
    ]);
    expect(page.items).toEqual([first, second]);
    expect(page.next_page_token).toBeNull();
  });

  it("carries the status filter through every page", async () => {
    responses = [
      {
        status: 200,
        body: {
          items: [],
          total: 0,
          next_page_token: null,
          suppressed_candidates: [],
        },
      },
    ];
    await getAllCandidates("d1", "suggested");
    expect(calls[0].path).toBe("/documents/d1/candidates?status=suggested");
  });
});

describe("failure mapping", () => {
  it("surfaces the service's error code and message", async () => {
    responses = [
      {
        status: 409,
        body: {
          error: {
            code: "conflicting_concurrent_write",
            message: "revision 1 is stale",
          },
        },
      },
    ];
    const err = await getDocument("d1").catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("conflicting_concurrent_write");
    expect(err.message).toBe("revision 1 is stale");
    expect(err.isNetwork).toBe(false);
  });

  it("falls back to the bare status when the body is not JSON", async () => {
    responses = [{ status: 503, badJson: true }];
    const err = await getDocument("d1").catch((e) => e);
    expect(err.status).toBe(503);
    expect(err.code).toBe("unknown");
    expect(err.message).toBe("HTTP 503");
  });

  it("marks transport failures as network errors with status 0", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(() => Promise.reject(new TypeError("Failed to fetch"))),
    );
    const err = await getTaxonomy().catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(0);
    expect(err.isNetwork).toBe(true);
    expect(err.code).toBe("network");
  });
});
