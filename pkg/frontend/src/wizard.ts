// Assessment wizard: one applicable question at a time, grouped by focus
// area and level, with standards references shown verbatim and a live
// per-focus-area score gauge that refreshes after every synced answer.

import type { AnswerQueue } from './queue.js';
import { applicableQuestions } from './model-util.js';
import { el, profilePanel, refList } from './components.js';
import type { Store } from './store.js';
import type { AnswerValue, QuestionDoc } from './types.js';

const SCALE_OPTIONS: { value: string; label: string }[] = [
  { value: 'FI', label: 'Fully implemented' },
  { value: 'LI', label: 'Largely implemented' },
  { value: 'PI', label: 'Partially implemented' },
  { value: 'NI', label: 'Not implemented' },
  { value: 'NA', label: 'Not applicable' },
];

export interface WizardContext {
  store: Store;
  queue: AnswerQueue;
}

export function renderWizard(root: HTMLElement, ctx: WizardContext): void {
  const state = ctx.store.get();
  root.textContent = '';
  if (!state.model || !state.session) return;

  const questions = applicableQuestions(
    state.model,
    state.session.organization.profile,
  );

  const layout = el('div', { className: 'wizard-layout' });
  const main = el('section', { className: 'wizard-main' });
  const side = el('aside', { className: 'wizard-side' });
  layout.append(main, side);
  root.append(layout);

  if (state.offline) {
    const banner = el('div', { className: 'banner offline', testId: 'offline-banner' }, [
      'Offline: answers are queued locally. ',
    ]);
    const retry = el('button', { text: 'Retry sync' });
    retry.addEventListener('click', () => void ctx.queue.retry());
    banner.append(retry);
    main.append(banner);
  }

  if (state.progress) {
    const p = state.progress;
    main.append(
      el('p', {
        className: 'progress',
        testId: 'progress',
        text:
          `${p.answered_all}/${p.total_all} answered ` +
          `(${p.answered_scored}/${p.total_scored} scored)`,
      }),
    );
  }

  const cursor = Math.min(state.cursor, questions.length);
  if (cursor >= questions.length) {
    main.append(renderSummary(ctx));
  } else {
    main.append(renderQuestion(ctx, questions[cursor], cursor, questions.length));
  }

  if (state.profile) {
    side.append(el('h2', { text: 'Live scores' }));
    side.append(profilePanel(state.profile));
  }
}

function renderSummary(ctx: WizardContext): HTMLElement {
  const state = ctx.store.get();
  const panel = el('div', { className: 'summary', testId: 'summary' });
  panel.append(el('h2', { text: 'Assessment complete' }));
  if (state.pending.length > 0) {
    panel.append(
      el('p', { text: `${state.pending.length} answers still syncing.` }),
    );
  }
  const back = el('button', { text: 'Review answers' });
  back.addEventListener('click', () => ctx.store.set({ cursor: 0 }));
  panel.append(back);
  return panel;
}

function renderQuestion(
  ctx: WizardContext,
  entry: ReturnType<typeof applicableQuestions>[number],
  index: number,
  total: number,
): HTMLElement {
  const state = ctx.store.get();
  const { question, focusArea, level, objective } = entry;
  const card = el('div', { className: 'question-card', testId: `question-${question.id}` });

  card.append(
    el('p', {
      className: 'question-context',
      text: `${focusArea.id} ${focusArea.name} · level ${level} · ${objective}`,
    }),
  );
  card.append(el('h2', { className: 'question-text', text: `${question.id}. ${question.text}` }));
  card.append(refList(question.refs, state.standards));
  card.append(renderControls(ctx, question));

  const nav = el('div', { className: 'wizard-nav' });
  const back = el('button', { text: 'Back' });
  back.disabled = index === 0;
  back.addEventListener('click', () => ctx.store.set({ cursor: index - 1 }));
  const skip = el('button', { text: 'Skip', testId: 'skip' });
  skip.addEventListener('click', () => ctx.store.set({ cursor: index + 1 }));
  nav.append(back, el('span', { className: 'position', text: `${index + 1} of ${total}` }), skip);
  card.append(nav);
  return card;
}

function renderControls(ctx: WizardContext, question: QuestionDoc): HTMLElement {
  const state = ctx.store.get();
  const current = state.answers[question.id];
  const box = el('div', { className: 'answer-controls' });

  const submit = (value: AnswerValue) => {
    void ctx.queue.enqueue(question.id, value);
    ctx.store.set({ cursor: state.cursor + 1 });
  };

  if (question.qtype === 'scale') {
    for (const option of SCALE_OPTIONS) {
      const button = el('button', {
        className: current === option.value ? 'scale selected' : 'scale',
        testId: `answer-${option.value}`,
        text: `${option.value} – ${option.label}`,
      });
      button.addEventListener('click', () => submit(option.value));
      box.append(button);
    }
  } else if (question.qtype === 'multiple_choice') {
    (question.choices ?? []).forEach((choice, i) => {
      const button = el('button', {
        className: current === i ? 'choice selected' : 'choice',
        testId: `choice-${i}`,
        text: choice,
      });
      button.addEventListener('click', () => submit(i));
      box.append(button);
    });
  } else {
    const input = el('input');
    input.type = 'date';
    input.dataset.testid = 'date-input';
    if (typeof current === 'string') input.value = current;
    const save = el('button', { text: 'Save date', testId: 'save-date' });
    save.addEventListener('click', () => {
      if (input.value) submit(input.value);
    });
    box.append(input, save);
  }
  return box;
}
