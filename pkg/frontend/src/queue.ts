// Ordered answer sync: answers echo locally at once, then drain to the API
// in submission order. A failed request flips the offline banner on and
// leaves the queue intact; retry() resumes from the first pending answer.

import type { ApiClient } from './api.js';
import type { Store } from './store.js';
import type { AnswerValue } from './types.js';

export class AnswerQueue {
  private draining = false;

  constructor(
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly onSynced: () => Promise<void>,
  ) {}

  enqueue(questionId: string, value: AnswerValue): Promise<void> {
    const state = this.store.get();
    this.store.set({
      answers: { ...state.answers, [questionId]: value },
      pending: [...state.pending, { questionId, value }],
      planStale: true,
    });
    return this.drain();
  }

  async drain(): Promise<void> {
    if (this.draining) return;
    this.draining = true;
    try {
      let synced = false;
      while (true) {
        const state = this.store.get();
        const next = state.pending[0];
        if (!next) break;
        const sessionId = state.session?.session_id;
        if (!sessionId) break;
        try {
          const session = await this.api.putAnswer(sessionId, next.questionId, next.value);
          synced = true;
          this.store.set({
            session,
            pending: this.store.get().pending.slice(1),
            offline: false,
          });
        } catch (error) {
          this.store.set({ offline: true });
          break;
        }
      }
      if (synced) {
        await this.onSynced();
      }
    } finally {
      this.draining = false;
    }
  }

  retry(): Promise<void> {
    return this.drain();
  }
}
