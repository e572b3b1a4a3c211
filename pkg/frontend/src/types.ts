// Wire formats of the famm HTTP API. The UI renders these verbatim and
// performs no scoring arithmetic of its own.

export interface StandardDoc {
  id: string;
  title: string;
  publisher: string;
  edition?: string;
}

export interface RefDoc {
  standard_id: string;
  clause: string;
  note?: string;
}

export type QuestionKind = 'scale' | 'multiple_choice' | 'date_time';

export interface ApplicabilityDoc {
  profile_key: string;
  allowed_values: string[];
}

export interface QuestionDoc {
  id: string;
  text: string;
  qtype: QuestionKind;
  refs: RefDoc[];
  improvement_action?: string;
  choices?: string[];
  applicability?: ApplicabilityDoc;
}

export interface CapabilityDoc {
  level: string;
  objective: string;
  questions: QuestionDoc[];
}

export interface FocusAreaDoc {
  id: string;
  name: string;
  capabilities: CapabilityDoc[];
}

export interface ModelDoc {
  format: string;
  model: { name: string; version: string };
  standards: StandardDoc[];
  focus_areas: FocusAreaDoc[];
}

export interface LevelScoreDoc {
  level: string;
  score: string;
  score_exact: string;
  achieved: boolean;
  vacuous: boolean;
  contributing_question_count: number;
}

export interface FocusAreaScoreDoc {
  id: string;
  name: string;
  maturity_level: string;
  score: string;
  score_exact: string;
  levels: LevelScoreDoc[];
}

export interface ProfileDoc {
  provisional: boolean;
  focus_areas: FocusAreaScoreDoc[];
  overall: Record<string, string>;
}

export interface TaskDoc {
  task_number: string;
  description: string;
  deadline: string;
  responsible: string;
  question_id: string;
  focus_area_id: string;
  level: string;
  refs: RefDoc[];
  projected_contribution: string;
}

export interface PlanDoc {
  organization_name: string;
  generated_on: string;
  target: string;
  focus_areas: { id: string; maturity_level: string; levels: { level: string; score: string }[] }[];
  tasks: TaskDoc[];
}

export interface AnswerDoc {
  question_id: string;
  value: string | number;
  answered_at: string;
}

export interface SessionDoc {
  format: string;
  session_id: string;
  model: { name: string; version: string };
  organization: { organization_name: string; profile: Record<string, string> };
  answers: AnswerDoc[];
  created_at: string;
  updated_at: string;
}

export interface ProgressDoc {
  answered_scored: number;
  total_scored: number;
  answered_all: number;
  total_all: number;
}

export interface WhatIfDoc {
  before: ProfileDoc;
  after: ProfileDoc;
}

export type AnswerValue = string | number;
