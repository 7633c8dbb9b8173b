// Renders a response document captured verbatim from the backend, so the
// client types and the server's canonical JSON cannot drift apart unnoticed.

import { describe, expect, it } from 'vitest';

import { embedCharts, renderTurn } from '../src/render.js';
import { selectionsOf } from '../src/state.js';
import type { QueryResponse } from '../src/types.js';
import real from './real_response.json';

const response = real as unknown as QueryResponse;

describe('a captured backend response', () => {
  it('renders four rank-badged cards with captions and a plan panel', async () => {
    const turn = {
      utterance: response.utterance,
      response,
      selected: selectionsOf(response),
      timestamp: 0,
    };
    const root = renderTurn(turn, 0, { onToggle: () => undefined });
    const badges = [...root.querySelectorAll('.rank-badge')].map((b) => b.textContent);
    expect(badges).toEqual(['#1', '#2', '#3', '#4']);
    expect([...root.querySelectorAll<HTMLElement>('.chart-card')]
      .map((c) => c.dataset.design)).toEqual(['M', 'N', 'O', 'P']);
    // three implicit references: the attribute and both value sets
    expect(root.querySelectorAll('.plan-entry')).toHaveLength(3);
    const caption = root.querySelector('.chart-caption')!.textContent!;
    for (const entry of response.plan.entries) {
      expect(caption).toContain(entry.interpretations[entry.chosen].provenance);
    }
    const embedded: string[] = [];
    await embedCharts(root, response, async (_el, spec) => {
      expect(spec.$schema).toContain('vega-lite/v5');
      embedded.push(String((spec.usermeta as { design: string }).design));
    });
    expect(embedded).toEqual(['M', 'N', 'O', 'P']);
  });
});
