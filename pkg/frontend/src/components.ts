// Small DOM helpers shared by the wizard and the what-if explorer.

import type { FocusAreaScoreDoc, ProfileDoc, RefDoc, StandardDoc } from './types.js';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  options: { className?: string; text?: string; testId?: string } = {},
  children: (HTMLElement | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (options.className) node.className = options.className;
  if (options.text !== undefined) node.textContent = options.text;
  if (options.testId) node.dataset.testid = options.testId;
  for (const child of children) {
    node.append(child instanceof HTMLElement ? child : document.createTextNode(child));
  }
  return node;
}

export function refLabel(ref: RefDoc, standards: Record<string, StandardDoc>): string {
  const standard = standards[ref.standard_id];
  const title = standard ? standard.title : ref.standard_id;
  const note = ref.note ? ` (${ref.note})` : '';
  return `${title}, clause ${ref.clause}${note}`;
}

export function refList(
  refs: RefDoc[],
  standards: Record<string, StandardDoc>,
): HTMLElement {
  const list = el('ul', { className: 'refs', testId: 'refs' });
  if (refs.length === 0) {
    list.append(el('li', { className: 'ref unreferenced', text: 'unreferenced' }));
    return list;
  }
  for (const ref of refs) {
    list.append(el('li', { className: 'ref', text: refLabel(ref, standards) }));
  }
  return list;
}

/** Per-focus-area gauge: every number shown is the API's display string. */
export function focusAreaGauge(fa: FocusAreaScoreDoc): HTMLElement {
  const card = el('div', { className: 'gauge-card' });
  card.append(
    el('h3', {}, [
      `${fa.id} ${fa.name} `,
      el('span', {
        className: 'maturity',
        testId: `maturity-${fa.id}`,
        text: `maturity: ${fa.maturity_level}`,
      }),
    ]),
  );
  for (const level of fa.levels) {
    const row = el('div', { className: 'gauge-row' });
    row.append(el('span', { className: 'gauge-letter', text: level.level }));
    const track = el('div', { className: 'gauge-track' });
    const fill = el('div', {
      className: level.achieved ? 'gauge-fill achieved' : 'gauge-fill',
    });
    fill.style.width = `${level.score}%`;
    track.append(fill);
    row.append(track);
    row.append(
      el('span', {
        className: 'gauge-score',
        testId: `gauge-${fa.id}-${level.level}`,
        text: `${level.score}%`,
      }),
    );
    card.append(row);
  }
  return card;
}

export function profilePanel(profile: ProfileDoc): HTMLElement {
  const panel = el('div', { className: 'profile-panel' });
  if (profile.provisional) {
    panel.append(
      el('p', {
        className: 'provisional',
        testId: 'provisional',
        text: 'Provisional: unanswered questions count as NI.',
      }),
    );
  }
  for (const fa of profile.focus_areas) {
    panel.append(focusAreaGauge(fa));
  }
  return panel;
}
