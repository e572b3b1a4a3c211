// App shell: boots against the API, restores or creates a session, and
// routes between the wizard and the what-if explorer.

import { ApiClient, ApiError } from './api.js';
import { el } from './components.js';
import { AnswerQueue } from './queue.js';
import { createStore, type Store, type View } from './store.js';
import { renderWhatIf, type WhatIfContext } from './whatif.js';
import { renderWizard, type WizardContext } from './wizard.js';
import type { SessionDoc } from './types.js';

const SESSION_KEY = 'famm-session-id';

export interface App {
  store: Store;
  api: ApiClient;
  queue: AnswerQueue;
  refresh: () => Promise<void>;
}

export async function boot(root: HTMLElement, api = new ApiClient()): Promise<App> {
  const store = createStore();

  const refresh = async (): Promise<void> => {
    const session = store.get().session;
    if (!session) return;
    const [profile, progress] = await Promise.all([
      api.getScore(session.session_id),
      api.getProgress(session.session_id),
    ]);
    store.set({ profile, progress });
  };

  const queue = new AnswerQueue(api, store, refresh);
  const wizardCtx: WizardContext = { store, queue };
  const whatIfCtx: WhatIfContext = { api, store, target: { value: 'next_level' } };

  const render = () => {
    const state = store.get();
    root.textContent = '';
    if (!state.model) {
      root.append(el('p', { text: 'Loading model…' }));
      return;
    }
    root.append(header(store, state.view, state.error));
    const view = el('main', { className: 'view' });
    root.append(view);
    if (state.view === 'whatif') {
      renderWhatIf(view, whatIfCtx);
    } else {
      renderWizard(view, wizardCtx);
    }
  };

  store.subscribe(render);
  render();

  const model = await api.getModel();
  const standards = Object.fromEntries(
    (await api.getStandards()).map((standard) => [standard.id, standard]),
  );
  store.set({ model, standards });

  const session = await restoreOrCreateSession(api);
  sessionStorage.setItem(SESSION_KEY, session.session_id);
  const answers = Object.fromEntries(
    session.answers.map((answer) => [answer.question_id, answer.value]),
  );
  store.set({ session, answers });
  await refresh();

  return { store, api, queue, refresh };
}

async function restoreOrCreateSession(api: ApiClient): Promise<SessionDoc> {
  const existing = sessionStorage.getItem(SESSION_KEY);
  if (existing) {
    try {
      return await api.getSession(existing);
    } catch (error) {
      if (!(error instanceof ApiError) || error.status !== 404) throw error;
      sessionStorage.removeItem(SESSION_KEY);
    }
  }
  return api.createSession('', {});
}

function header(store: Store, active: View, error: string | null): HTMLElement {
  const bar = el('header', { className: 'topbar' });
  bar.append(el('h1', { text: 'Self-assessment' }));
  const nav = el('nav');
  const tabs: { view: View; label: string; testId: string }[] = [
    { view: 'wizard', label: 'Questionnaire', testId: 'tab-wizard' },
    { view: 'whatif', label: 'What-if explorer', testId: 'tab-whatif' },
  ];
  for (const tab of tabs) {
    const button = el('button', {
      className: active === tab.view ? 'tab active' : 'tab',
      testId: tab.testId,
      text: tab.label,
    });
    button.addEventListener('click', () => store.set({ view: tab.view }));
    nav.append(button);
  }
  bar.append(nav);
  if (error) {
    bar.append(el('p', { className: 'banner error', text: error }));
  }
  return bar;
}

declare global {
  interface Window {
    fammBooted?: Promise<App>;
  }
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  window.fammBooted = boot(document.getElementById('app') as HTMLElement);
}
