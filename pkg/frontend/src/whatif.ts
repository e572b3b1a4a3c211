// What-if explorer: toggle plan tasks "completed" and compare the projected
// profile against the live one. Toggling never mutates the session; all
// projections come from the what-if endpoint.

import type { ApiClient } from './api.js';
import { el, profilePanel, refList } from './components.js';
import type { Store } from './store.js';
import type { ProfileDoc } from './types.js';

export interface WhatIfContext {
  api: ApiClient;
  store: Store;
  target: { value: string };
}

export async function loadPlan(ctx: WhatIfContext): Promise<void> {
  const state = ctx.store.get();
  if (!state.session) return;
  const plan = await ctx.api.getPlan(state.session.session_id, {
    target: ctx.target.value,
  });
  ctx.store.set({ plan, planStale: false, selection: [], projected: null });
}

async function applySelection(ctx: WhatIfContext, selection: string[]): Promise<void> {
  const state = ctx.store.get();
  if (!state.session) return;
  if (selection.length === 0) {
    // Clearing the selection restores the live profile; no request needed.
    ctx.store.set({ selection, projected: null });
    return;
  }
  const result = await ctx.api.whatIfTasks(
    state.session.session_id,
    selection,
    ctx.target.value,
  );
  ctx.store.set({ selection, projected: result.after });
}

export function renderWhatIf(root: HTMLElement, ctx: WhatIfContext): void {
  const state = ctx.store.get();
  root.textContent = '';

  const layout = el('div', { className: 'whatif-layout' });
  root.append(layout);

  const controls = el('div', { className: 'whatif-controls' });
  const select = el('select');
  select.dataset.testid = 'target-select';
  for (const target of ['next_level', 'threshold_only', 'full_maturity']) {
    const option = el('option', { text: target });
    option.value = target;
    if (target === ctx.target.value) option.selected = true;
    select.append(option);
  }
  select.addEventListener('change', () => {
    ctx.target.value = select.value;
    void loadPlan(ctx);
  });
  const reload = el('button', { text: 'Load plan', testId: 'load-plan' });
  reload.addEventListener('click', () => void loadPlan(ctx));
  controls.append(el('label', { text: 'Plan target: ' }), select, reload);
  layout.append(controls);

  if (state.planStale && state.plan) {
    const banner = el('div', { className: 'banner stale', testId: 'stale-banner' }, [
      'The session changed since this plan was generated. ',
    ]);
    const refresh = el('button', { text: 'Reload plan' });
    refresh.addEventListener('click', () => void loadPlan(ctx));
    banner.append(refresh);
    layout.append(banner);
  }

  if (!state.plan) {
    layout.append(el('p', { text: 'No plan loaded yet.' }));
    return;
  }

  const tasks = el('div', { className: 'task-list' });
  tasks.append(el('h2', { text: `Improvement tasks (${state.plan.target})` }));
  if (state.plan.tasks.length === 0) {
    tasks.append(
      el('p', {
        testId: 'no-gaps',
        text: 'No gaps: all scored questions are fully implemented.',
      }),
    );
  }
  for (const task of state.plan.tasks) {
    const row = el('label', { className: 'task-row', testId: `task-${task.task_number}` });
    const checkbox = el('input');
    checkbox.type = 'checkbox';
    checkbox.dataset.testid = `toggle-${task.task_number}`;
    checkbox.checked = state.selection.includes(task.task_number);
    checkbox.addEventListener('change', () => {
      const current = ctx.store.get().selection;
      const next = checkbox.checked
        ? [...current, task.task_number]
        : current.filter((t) => t !== task.task_number);
      void applySelection(ctx, next);
    });
    row.append(checkbox);
    row.append(
      el('span', {
        className: 'task-text',
        text: `${task.task_number} · ${task.description} · due ${task.deadline} · ${task.responsible}`,
      }),
    );
    row.append(refList(task.refs, ctx.store.get().standards));
    tasks.append(row);
  }
  layout.append(tasks);

  layout.append(renderComparison(state.profile, state.projected));
}

function renderComparison(
  live: ProfileDoc | null,
  projected: ProfileDoc | null,
): HTMLElement {
  const panel = el('div', { className: 'comparison', testId: 'comparison' });
  if (!live) return panel;

  if (!projected) {
    panel.append(el('h2', { text: 'Current profile' }));
    panel.append(profilePanel(live));
    return panel;
  }

  panel.append(el('h2', { text: 'Projected profile' }));
  const table = el('table', { className: 'comparison-table' });
  const head = el('tr');
  for (const title of ['Focus area', 'Level', 'Now', 'Projected']) {
    head.append(el('th', { text: title }));
  }
  table.append(head);
  const projectedByFa = new Map(projected.focus_areas.map((fa) => [fa.id, fa]));
  for (const fa of live.focus_areas) {
    const after = projectedByFa.get(fa.id);
    if (!after) continue;
    const afterLevels = new Map(after.levels.map((level) => [level.level, level]));
    for (const level of fa.levels) {
      const projectedLevel = afterLevels.get(level.level);
      const row = el('tr');
      row.append(el('td', { text: fa.id }));
      row.append(el('td', { text: level.level }));
      row.append(el('td', { text: `${level.score}%` }));
      row.append(
        el('td', {
          testId: `whatif-${fa.id}-${level.level}`,
          text: projectedLevel ? `${projectedLevel.score}%` : '',
        }),
      );
      table.append(row);
    }
    const maturityRow = el('tr', { className: 'maturity-row' });
    maturityRow.append(el('td', { text: fa.id }));
    maturityRow.append(el('td', { text: 'maturity' }));
    maturityRow.append(el('td', { text: fa.maturity_level }));
    maturityRow.append(
      el('td', {
        testId: `whatif-maturity-${fa.id}`,
        text: after.maturity_level,
      }),
    );
    table.append(maturityRow);
  }
  panel.append(table);
  return panel;
}
