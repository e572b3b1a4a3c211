// Thin typed client over the famm JSON API. Every displayed number in the
// UI is a string taken from these responses; nothing is recomputed locally.

import type {
  AnswerValue,
  ModelDoc,
  PlanDoc,
  ProfileDoc,
  ProgressDoc,
  SessionDoc,
  StandardDoc,
  WhatIfDoc,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface PlanOptions {
  target?: string;
  deadlineDays?: number;
  responsible?: string;
  threshold?: string;
}

export class ApiClient {
  constructor(private readonly base: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.base + path, init);
    const text = await response.text();
    if (!response.ok) {
      let code = 'error';
      let message = text || response.statusText;
      try {
        const doc = JSON.parse(text);
        code = doc.code ?? code;
        message = doc.message ?? message;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(response.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  getModel(): Promise<ModelDoc> {
    return this.request('GET', '/api/model');
  }

  async getStandards(): Promise<StandardDoc[]> {
    const doc = await this.request<{ standards: StandardDoc[] }>('GET', '/api/standards');
    return doc.standards;
  }

  createSession(organizationName: string, profile: Record<string, string>): Promise<SessionDoc> {
    return this.request('POST', '/api/sessions', {
      organization_name: organizationName,
      profile,
    });
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return this.request('GET', `/api/sessions/${sessionId}`);
  }

  putAnswer(sessionId: string, questionId: string, value: AnswerValue): Promise<SessionDoc> {
    return this.request('PUT', `/api/sessions/${sessionId}/answers/${questionId}`, { value });
  }

  getProgress(sessionId: string): Promise<ProgressDoc> {
    return this.request('GET', `/api/sessions/${sessionId}/progress`);
  }

  getScore(sessionId: string, threshold?: string): Promise<ProfileDoc> {
    const query = threshold ? `?threshold=${encodeURIComponent(threshold)}` : '';
    return this.request('GET', `/api/sessions/${sessionId}/score${query}`);
  }

  getPlan(sessionId: string, options: PlanOptions = {}): Promise<PlanDoc> {
    const params = new URLSearchParams();
    if (options.target) params.set('target', options.target);
    if (options.deadlineDays !== undefined) params.set('deadlineDays', String(options.deadlineDays));
    if (options.responsible) params.set('responsible', options.responsible);
    if (options.threshold) params.set('threshold', options.threshold);
    const query = params.toString();
    return this.request('GET', `/api/sessions/${sessionId}/plan${query ? '?' + query : ''}`);
  }

  whatIfTasks(sessionId: string, completedTasks: string[], target?: string): Promise<WhatIfDoc> {
    const body: Record<string, unknown> = { completed_tasks: completedTasks };
    if (target) body.target = target;
    return this.request('POST', `/api/sessions/${sessionId}/whatif`, body);
  }
}
