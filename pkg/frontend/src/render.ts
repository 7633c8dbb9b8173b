// DOM construction for conversation turns: four rank-badged chart cards, the
// interpretation panel, and inline error blocks. Chart drawing is delegated
// to an injected embed function (vega-embed in production) so the structure
// is testable without a canvas.

import type { ConversationTurn, InlineError } from './state.js';
import type { PlanEntry, QueryResponse, RecommendationDoc } from './types.js';

export type EmbedFn = (el: HTMLElement, spec: Record<string, unknown>) => Promise<unknown>;

export interface TurnHandlers {
  onToggle: (reference: string, index: number) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function captionOf(recommendation: RecommendationDoc): string {
  return (recommendation.spec.description as string | undefined) ?? '';
}

function renderCard(recommendation: RecommendationDoc): HTMLElement {
  const card = el('div', 'chart-card');
  card.dataset.design = recommendation.design.id;
  card.dataset.rank = String(recommendation.rank);

  const header = el('div', 'card-header');
  const badge = el('span', 'rank-badge', `#${recommendation.rank}`);
  badge.title = recommendation.rationale; // rationale tooltip
  header.appendChild(badge);
  header.appendChild(el('span', 'design-letter', recommendation.design.id));
  header.appendChild(el('span', 'design-summary', recommendation.design.summary));
  card.appendChild(header);

  const chart = el('div', 'chart-container');
  card.appendChild(chart);

  const caption = captionOf(recommendation);
  if (caption) {
    card.appendChild(el('div', 'chart-caption', caption));
  }
  return card;
}

function renderInterpretationEntry(
  entry: PlanEntry,
  turnIndex: number,
  handlers: TurnHandlers,
): HTMLElement {
  const block = el('div', 'plan-entry');
  block.dataset.reference = entry.reference;
  block.appendChild(el('div', 'plan-reference',
    `${entry.role === 'attribute' ? 'attribute' : 'value'}: "${entry.reference}"`));
  const list = el('div', 'plan-options');
  entry.interpretations.forEach((interp, index) => {
    const label = el('label', 'plan-option');
    const radio = el('input') as HTMLInputElement;
    radio.type = 'radio';
    radio.name = `interp-${turnIndex}-${entry.role}-${entry.reference}`;
    radio.value = String(index);
    radio.checked = index === entry.chosen;
    radio.addEventListener('change', () => handlers.onToggle(entry.reference, index));
    label.appendChild(radio);
    label.appendChild(el('span', 'plan-provenance', interp.provenance));
    label.appendChild(el('span', 'plan-confidence',
      ` (${Math.round(interp.confidence * 100)}%)`));
    list.appendChild(label);
  });
  block.appendChild(list);
  return block;
}

export function renderTurn(
  turn: ConversationTurn,
  turnIndex: number,
  handlers: TurnHandlers,
): HTMLElement {
  const root = el('div', 'turn');
  root.dataset.queryId = turn.response.query_id;

  const header = el('div', 'turn-header');
  header.appendChild(el('span', 'turn-utterance', turn.utterance));
  const parse = turn.response.parse;
  header.appendChild(el('span', 'turn-labels',
    `${parse.cardinality} / ${parse.concreteness.cell}` +
    (parse.concreteness.mixed_flag ? ' (mixed)' : '')));
  root.appendChild(header);

  const cards = el('div', 'chart-cards');
  const ordered = [...turn.response.recommendations].sort((a, b) => a.rank - b.rank);
  for (const recommendation of ordered) {
    cards.appendChild(renderCard(recommendation));
  }
  root.appendChild(cards);

  const entries = turn.response.plan.entries;
  if (entries.length > 0) {
    const panel = el('div', 'interpretation-panel');
    panel.appendChild(el('div', 'panel-title', 'How implicit terms were interpreted'));
    entries.forEach((entry) => {
      panel.appendChild(renderInterpretationEntry(entry, turnIndex, handlers));
    });
    root.appendChild(panel);
  }
  return root;
}

export function renderError(error: InlineError): HTMLElement {
  const block = el('div', 'inline-error');
  block.appendChild(el('div', 'error-utterance', error.utterance));
  block.appendChild(el('div', 'error-message', `${error.code}: ${error.message}`));
  if (error.diagnostics.length) {
    const list = el('ul', 'error-diagnostics');
    for (const line of error.diagnostics) {
      list.appendChild(el('li', undefined, line));
    }
    block.appendChild(list);
  }
  return block;
}

/** Draw every chart card of a rendered turn with the injected embedder. */
export async function embedCharts(
  turnEl: HTMLElement,
  response: QueryResponse,
  embed: EmbedFn,
): Promise<void> {
  const ordered = [...response.recommendations].sort((a, b) => a.rank - b.rank);
  const containers = turnEl.querySelectorAll<HTMLElement>('.chart-container');
  await Promise.all(ordered.map((recommendation, i) => {
    const container = containers[i];
    if (!container) return Promise.resolve();
    container.replaceChildren();
    return embed(container, recommendation.spec).catch((err) => {
      container.textContent = `chart render failed: ${String(err)}`;
    });
  }));
}
