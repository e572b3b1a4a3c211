// Applicability filtering and question traversal over the model document.
// Filtering mirrors the engine contract: a missing profile key keeps the
// question applicable, so a blank profile always sees the full questionnaire.

import type { FocusAreaDoc, ModelDoc, QuestionDoc } from './types.js';

export interface QuestionRef {
  focusArea: FocusAreaDoc;
  level: string;
  objective: string;
  question: QuestionDoc;
}

export function isApplicable(
  question: QuestionDoc,
  profile: Record<string, string>,
): boolean {
  const condition = question.applicability;
  if (!condition) return true;
  const value = profile[condition.profile_key];
  if (value === undefined) return true;
  return condition.allowed_values.includes(value);
}

export function applicableQuestions(
  model: ModelDoc,
  profile: Record<string, string>,
): QuestionRef[] {
  const out: QuestionRef[] = [];
  for (const focusArea of model.focus_areas) {
    for (const capability of focusArea.capabilities) {
      for (const question of capability.questions) {
        if (isApplicable(question, profile)) {
          out.push({
            focusArea,
            level: capability.level,
            objective: capability.objective,
            question,
          });
        }
      }
    }
  }
  return out;
}
