// Payload shapes of the workbench HTTP API. The UI renders these
// verbatim; it never recomputes scores, statuses, or orderings.

export type Mode = 'generation' | 'verification' | 'decision';

export type HighlightStatus = 'supported' | 'unsupported' | 'not_applicable';
export type HighlightColor = 'blue' | 'red' | 'none';

export interface ProviderInfo {
  id: string;
  display_name: string;
  kind: string;
}

export interface Claim {
  id: string;
  response_id: string;
  text: string;
  span: [number, number];
  checkable: boolean;
}

export interface ResponsePayload {
  id: string;
  provider_id: string;
  prompt_text: string;
  text: string;
  created_at: string;
  latency_ms: number;
}

export interface TurnPayload {
  index: number;
  prompt_text: string;
  responses: ResponsePayload[];
  errors: { provider_id: string; error: string }[];
  claims: Record<string, Claim[]>;
  created_at: string;
}

export interface LibraryTemplate {
  id: string;
  label: string;
  body: string;
  created_at: string;
}

export interface LibraryBookmark {
  id: string;
  label: string;
  response_id: string;
  created_at: string;
}

export interface Library {
  templates: LibraryTemplate[];
  bookmarks: LibraryBookmark[];
}

export interface VerificationPayload {
  criterion: 'source' | 'double_check' | 'compare';
  response_id: string;
  coverage: number;
  passed: boolean;
  created_at: string;
  detail: Record<string, unknown>;
  seq: number;
}

export interface SessionDetail {
  id: string;
  title: string;
  mode: Mode;
  created_at: string;
  library: Library;
  turns: TurnPayload[];
  verifications: VerificationPayload[];
  decisions: { chosen_response_id: string; rationale: string; decided_at: string }[];
}

export interface SessionSummary {
  id: string;
  title: string;
  mode: Mode;
  created_at: string;
  turn_count: number;
  verification_count: number;
  decision_count: number;
}

export interface ModeInfo {
  current: Mode;
  allowed_targets: Mode[];
}

export interface SearchHit {
  url: string;
  title: string;
  snippet: string;
}

export interface Highlight {
  claim_id: string;
  status: HighlightStatus;
  color: HighlightColor;
  evidence: SearchHit[];
  recommended_query: string;
  best_similarity: number;
}

export interface DoubleCheckReport {
  response_id: string;
  highlights: Highlight[];
  coverage: number;
  passed: boolean;
  warnings: string[];
}

export interface SourceCitation {
  claim_id: string;
  doc_id: string;
  chunk_seq: number;
  similarity: number;
  message: string;
}

export interface SourceVerification {
  response_id: string;
  citations: SourceCitation[];
  coverage: number;
  passed: boolean;
}

export interface ClaimCluster {
  cluster_id: string;
  members: [string, string][]; // [provider_id, claim_id]
  representative_text: string;
  support: number;
}

export interface CompareReport {
  prompt: string;
  provider_ids: string[];
  clusters: ClaimCluster[];
  common_clusters: ClaimCluster[];
  per_response_coverage: Record<string, number>;
  per_response_passed: Record<string, boolean>;
  turn_index: number;
}

export interface CriterionCell {
  coverage: number;
  passed: boolean;
  evaluated: boolean;
}

export interface DecisionRow {
  rank: number;
  response_id: string;
  provider_id: string;
  score: {
    value: number;
    breakdown: Record<string, { weight: number; coverage: number; passed: boolean; evaluated: boolean }>;
    fully_verified: boolean;
  };
  criteria: Record<string, CriterionCell>;
}

export interface DecisionTablePayload {
  session_id: string;
  rows: DecisionRow[];
  generated_at: string;
}

export interface DecisionRecordPayload {
  session_id: string;
  chosen_response_id: string;
  rationale: string;
  decided_at: string;
}

export interface MetricEntry {
  value: number | string;
  unit: string;
  as_of: string;
}

export type MetricsPanel = Record<string, MetricEntry>;
