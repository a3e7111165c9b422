// Thin fetch client for the annotation service. Every request in the app
// goes through requestJson so error handling stays in one place.

import type {
  AgreementPayload,
  AssignmentRow,
  CandidatesPage,
  ComparePayload,
  CorpusRow,
  DecisionBody,
  DistributionPayload,
  DocumentPayload,
  TaxonomyPayload,
} from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
    this.code = code;
  }

  // status 0 means the request never reached the service
  get isNetwork(): boolean {
    return this.status === 0;
  }
}

async function requestJson<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (err) {
    throw new ServiceError(0, "network", `request failed: ${String(err)}`);
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON body; fall through with null
  }
  if (!response.ok) {
    const wrapped = body as { error?: { code?: string; message?: string } } | null;
    throw new ServiceError(
      response.status,
      wrapped?.error?.code ?? "unknown",
      wrapped?.error?.message ?? `HTTP ${response.status}`,
    );
  }
  return body as T;
}

export function getTaxonomy(): Promise<TaxonomyPayload> {
  return requestJson<TaxonomyPayload>("/taxonomy");
}

export async function getCorpora(): Promise<CorpusRow[]> {
  const payload = await requestJson<{ corpora: CorpusRow[] }>("/corpora");
  return payload.corpora;
}

export function getDocument(docId: string): Promise<DocumentPayload> {
  return requestJson<DocumentPayload>(`/documents/${encodeURIComponent(docId)}`);
}

export function getDistribution(
  corpusId: string,
  acceptedOnly: boolean,
): Promise<DistributionPayload> {
  const suffix = acceptedOnly ? "?accepted_only=true" : "";
  return requestJson<DistributionPayload>(
    `/corpora/${encodeURIComponent(corpusId)}/distribution${suffix}`,
  );
}

// Follows page tokens until the document's candidate list is complete.
export async function getAllCandidates(
  docId: string,
  status?: string,
): Promise<CandidatesPage> {
  const base = `/documents/${encodeURIComponent(docId)}/candidates`;
  const items: CandidatesPage["items"] = [];
  let token: string | null = null;
  let last: CandidatesPage;
  do {
    const params = new URLSearchParams();
    if (status) params.set("status", status);
    if (token) params.set("page_token", token);
    const query = params.toString();
    last = await requestJson<CandidatesPage>(query ? `${base}?${query}` : base);
    items.push(...last.items);
    token = last.next_page_token;
  } while (token !== null);
  return { ...last, items, next_page_token: null };
}

export function postDecision(
  assignmentId: string,
  body: DecisionBody,
  requestId: string,
): Promise<AssignmentRow> {
  return requestJson<AssignmentRow>(
    `/assignments/${encodeURIComponent(assignmentId)}/decision`,
    {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        "X-Request-Id": requestId,
      },
      body: JSON.stringify(body),
    },
  );
}

export function getAgreement(
  corpusId: string,
  annotatorA: string,
  annotatorB: string,
): Promise<AgreementPayload> {
  const params = new URLSearchParams({
    corpus: corpusId,
    a: annotatorA,
    b: annotatorB,
  });
  return requestJson<AgreementPayload>(`/reports/agreement?${params}`);
}

export function getCompare(
  corpusA: string,
  corpusB: string,
  acceptedOnly: boolean,
): Promise<ComparePayload> {
  const params = new URLSearchParams({ a: corpusA, b: corpusB });
  if (acceptedOnly) params.set("accepted_only", "true");
  return requestJson<ComparePayload>(`/reports/compare?${params}`);
}
