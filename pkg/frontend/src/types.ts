// Shapes of the documents the API serves. The UI never derives levels or
// gaps itself; these are read-only views of server results.

export type AnswerValue = "yes" | "no" | "unknown";

export interface IndicatorDoc {
  id: string;
  statement: string;
}

export interface LevelDoc {
  rank: number;
  name: string;
  description: string;
  indicators: IndicatorDoc[];
}

export interface AreaDoc {
  id: string;
  name: string;
  description: string;
  levels: LevelDoc[];
}

export interface CoordinateDoc {
  area: string;
  rank: number;
}

export interface PrerequisiteDoc {
  subject: CoordinateDoc;
  requires: CoordinateDoc;
  rationale: string;
}

export interface SchemeDoc {
  id: string;
  name: string;
  version: string;
  areas: AreaDoc[];
  prerequisites: PrerequisiteDoc[];
}

export interface SubjectDoc {
  name: string;
  kind: "organization" | "process" | "system";
  notes: string;
}

export interface AnswerDoc {
  value: AnswerValue;
  note: string;
  answered_at: string;
}

export interface SessionDoc {
  id: string;
  scheme_id: string;
  scheme_version: string;
  subject: SubjectDoc;
  answers: Record<string, AnswerDoc>;
  created: string;
  modified: string;
}

export interface AreaProfileDoc {
  area: string;
  raw_level: number;
  effective_level: number;
  completeness: number;
}

export interface ProfileDoc {
  scheme_id: string;
  scheme_version: string;
  subject: SubjectDoc;
  areas: AreaProfileDoc[];
}

export interface ViolationDoc {
  subject: CoordinateDoc;
  requires: CoordinateDoc;
  observed_rank: number;
}

export interface ProfileResponse {
  profile: ProfileDoc;
  violations: ViolationDoc[];
}

export interface MissingIndicatorDoc {
  id: string;
  statement: string;
  state: "no" | "unknown" | "unanswered";
}

export interface GapAreaDoc {
  area: string;
  current_level: number;
  target_rank: number;
  missing: MissingIndicatorDoc[];
}

export interface GapReportDoc {
  scheme_id: string;
  scheme_version: string;
  areas: GapAreaDoc[];
}

export interface RoadmapStepDoc {
  index: number;
  area: string;
  rank: number;
  indicators: IndicatorDoc[];
  prerequisites: PrerequisiteDoc[];
}

export interface RoadmapDoc {
  scheme_id: string;
  scheme_version: string;
  steps: RoadmapStepDoc[];
}

export interface ChartSeries {
  name: string;
  values: number[];
}

export interface ChartSpecDoc {
  axes: string[];
  max_rank: number;
  series: ChartSeries[];
}
