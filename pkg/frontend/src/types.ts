// Wire types for the annotation service. Field names mirror the JSON
// payloads exactly; nothing here is renamed or reshaped.

export interface LexemeRow {
  text: string;
  weight: number;
  salience_rank: number;
  provenance: string;
}

export interface FrameRow {
  id: string;
  parent: string | null;
  description: string;
  lexemes: LexemeRow[];
  framing_functions: string;
  blend_affinities: string[];
}

export interface CrosswalkRow {
  label: string;
  frame: string;
  provisional: boolean;
  source_note: string;
}

export interface TaxonomyPayload {
  version: string;
  frames: FrameRow[];
  crosswalk: CrosswalkRow[];
}

export type DecisionStatus = "suggested" | "accepted" | "rejected" | "reassigned";

export interface AssignmentRow {
  assignment_id: string;
  doc_id: string;
  frame: string;
  char_start: number;
  char_end: number;
  surface: string;
  matched_lexeme: string;
  sentence_index: number;
  score: number;
  alternates: string[];
  rationale: string;
  status: DecisionStatus;
  assigned_frame_after_review: string | null;
  annotator_id: string | null;
  created_at: string | null;
  decided_at: string | null;
  revision: number;
  snippet?: string;
}

export interface SuppressedRow {
  doc_id: string;
  sentence_index: number;
  char_start: number;
  char_end: number;
  surface: string;
  matched_lexeme: string;
  key: string[];
  frames: string[];
  suppressed: boolean;
}

export interface CandidatesPage {
  doc_id: string;
  corpus_id: string;
  items: AssignmentRow[];
  total: number;
  next_page_token: string | null;
  suppressed_candidates: SuppressedRow[];
}

export interface DocumentPayload {
  doc_id: string;
  corpus_id: string;
  text: string;
  metadata: Record<string, unknown>;
}

export interface CorpusRow {
  corpus_id: string;
  documents: number;
  assignments: number;
  token_count: number;
}

export interface FrameStatRow {
  count: number;
  share: number;
  density: number;
}

export interface DistributionPayload {
  corpus_id: string | null;
  taxonomy_version: string;
  token_count: number;
  total: number;
  accepted_only: boolean;
  per_frame: Record<string, FrameStatRow>;
  present: string[];
  absent: string[];
  orphaned: [string, number][];
}

export interface ComparisonRowPayload {
  frame: string;
  count_a: number;
  count_b: number;
  log_odds: number;
}

export interface ComparePayload {
  corpus_a: string;
  corpus_b: string;
  taxonomy_version: string;
  total_a: number;
  total_b: number;
  rows: ComparisonRowPayload[];
}

export interface AgreementPayload {
  n_items: number;
  observed_agreement: number;
  expected_agreement: number;
  kappa: number;
  per_frame: Record<string, number>;
}

export type DecisionVerb = "accept" | "reject" | "reassign";

export interface DecisionBody {
  decision: DecisionVerb;
  annotator_id: string;
  frame?: string;
  expected_revision?: number;
}

export interface ErrorBody {
  error: { code: string; message: string };
}
