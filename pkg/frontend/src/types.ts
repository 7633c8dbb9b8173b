// Shapes of the documents the HTTP API returns. Field names mirror the
// server's canonical JSON exactly.

export interface SchemaColumn {
  name: string;
  kind: 'categorical' | 'numeric' | 'temporal';
  unit: string | null;
}

export interface SessionInfo {
  session_id: string;
  schema: SchemaColumn[];
  row_count: number;
}

export interface Interpretation {
  kind: 'predicate' | 'measure';
  confidence: number;
  provenance: string;
  predicate?: {
    attribute: string;
    comparator: string;
    threshold: { policy: string; value: number | null };
  };
  measure?: string;
  formula?: { kind: string; inputs: string[]; weights: number[] | null };
}

export interface PlanEntry {
  reference: string;
  role: 'value' | 'attribute';
  chosen: number;
  interpretations: Interpretation[];
}

export interface ValueRefDoc {
  surface: string;
  kind: 'explicit' | 'implicit';
  plurality: 'singleton' | 'set';
  matches: { attribute: string; value: unknown }[];
  modifier: string | null;
  complement: boolean;
}

export interface ParseDoc {
  utterance: string;
  cardinality: '1-1' | '1-n' | 'n' | 'n-m';
  concreteness: { values: string; attribute: string; cell: string; mixed_flag: boolean };
  attribute: { surface: string; kind: string; attribute: string | null };
  values: ValueRefDoc[];
  diagnostics: string[];
}

export interface RecommendationDoc {
  design: {
    id: string;
    cardinality: string;
    chart_type: string;
    orientation: string;
    arrangement: string;
    annotation_rules: string[];
    summary: string;
  };
  rank: number;
  tier: number;
  rationale: string;
  // A full Vega-Lite v5 document, embedded as-is.
  spec: Record<string, unknown> & { description?: string };
}

export interface QueryResponse {
  query_id: string;
  utterance: string;
  parse: ParseDoc;
  plan: { entries: PlanEntry[] };
  recommendations: RecommendationDoc[];
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
