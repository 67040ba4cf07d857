/** JSON shapes served by the annotation backend. */

export interface DialogueAct {
  id: string;
  speaker: string;
  text: string;
  start: number | null;
  end: number | null;
}

export interface TranscriptView {
  name: string;
  das: DialogueAct[];
}

export interface SummaryPoint {
  id: string;
  text: string;
  indent: number;
}

export interface SummaryView {
  name: string;
  indent_symbol: string;
  points: SummaryPoint[];
}

/** A dialogue act maps to one summary point or one meta label, never both. */
export type Target = { point: string } | { meta: string };

export interface AlignmentView {
  transcript_version: string;
  summary_version: string;
  annotator: string | null;
  targets: Record<string, Target>;
}

export interface ScoreRow {
  adequacy: number | null;
  grammaticality: number | null;
  fluency: number | null;
}

export interface EvaluationView {
  annotator: string;
  transcript_version: string;
  summary_version: string;
  per_point: Record<string, ScoreRow>;
  doc_adequacy: number | null;
}

/** Response of GET /meetings/{id}/view. */
export interface PairSnapshot {
  meeting: string;
  revision: number;
  transcript: TranscriptView;
  summary: SummaryView;
  alignment: AlignmentView;
  evaluation: EvaluationView | null;
}

/** One regex hit: act id plus the match span within its text. */
export interface SearchMatch {
  da: string;
  start: number;
  end: number;
}

export interface SearchResult {
  revision: number;
  matches: SearchMatch[];
}

export type MutationOp = Record<string, unknown> & { op: string };

export interface MutationRequest {
  expected_revision: number;
  ops: MutationOp[];
}

export interface MutationAck {
  revision: number;
  applied: number;
}

export interface ConflictBody {
  error: string;
  detail: string;
  current_revision: number;
}

export const META_LABELS = ["small_talk", "organizational"] as const;
export type MetaLabel = (typeof META_LABELS)[number];

export function isPointTarget(target: Target): target is { point: string } {
  return "point" in target;
}
