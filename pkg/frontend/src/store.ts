// Minimal observable store: plain state object, shallow set, subscribers.

import type {
  AnswerValue,
  ModelDoc,
  PlanDoc,
  ProfileDoc,
  ProgressDoc,
  SessionDoc,
  StandardDoc,
} from './types.js';

export interface PendingAnswer {
  questionId: string;
  value: AnswerValue;
}

export type View = 'wizard' | 'whatif' | 'summary';

export interface AppState {
  model: ModelDoc | null;
  standards: Record<string, StandardDoc>;
  session: SessionDoc | null;
  /** Local echo of answers, including those still queued for sync. */
  answers: Record<string, AnswerValue>;
  /** Answers awaiting the API, drained strictly in order. */
  pending: PendingAnswer[];
  offline: boolean;
  profile: ProfileDoc | null;
  progress: ProgressDoc | null;
  plan: PlanDoc | null;
  planStale: boolean;
  /** Task numbers toggled "completed" in the what-if explorer. */
  selection: string[];
  projected: ProfileDoc | null;
  view: View;
  cursor: number;
  error: string | null;
}

export const initialState: AppState = {
  model: null,
  standards: {},
  session: null,
  answers: {},
  pending: [],
  offline: false,
  profile: null,
  progress: null,
  plan: null,
  planStale: false,
  selection: [],
  projected: null,
  view: 'wizard',
  cursor: 0,
  error: null,
};

export type Listener = (state: AppState) => void;

export interface Store {
  get(): AppState;
  set(partial: Partial<AppState>): void;
  subscribe(listener: Listener): () => void;
}

export function createStore(state: AppState = initialState): Store {
  let current = { ...state };
  const listeners = new Set<Listener>();
  return {
    get: () => current,
    set(partial) {
      current = { ...current, ...partial };
      for (const listener of listeners) listener(current);
    },
    subscribe(listener) {
      listeners.add(listener);
      return () => listeners.delete(listener);
    },
  };
}
