// A trimmed query-response document in exactly the server's shape, used by
// the state and rendering tests.

import type { QueryResponse, RecommendationDoc } from '../src/types.js';

function rec(id: string, rank: number, tier: number, caption: string): RecommendationDoc {
  return {
    design: {
      id,
      cardinality: 'n',
      chart_type: id === 'K' ? 'scatter' : id === 'L' ? 'box' : 'bar',
      orientation: 'horizontal',
      arrangement: 'single',
      annotation_rules: ['sorted-descending'],
      summary: `design ${id} summary`,
    },
    rank,
    tier,
    rationale: `tier ${tier} for n comparisons`,
    spec: {
      $schema: 'https://vega.github.io/schema/vega-lite/v5.json',
      title: { text: `Reviews: demo ${id}`, subtitle: caption },
      description: caption,
      data: { values: [{ 'Book Title': 'A', Reviews: 10 }] },
      mark: { type: 'bar' },
      usermeta: { design: id },
    },
  };
}

export function makeResponse(overrides: {
  queryId?: string;
  chosen?: number;
  caption?: string;
  planEmpty?: boolean;
} = {}): QueryResponse {
  const caption = overrides.caption ?? 'popularity interpreted as Reviews (lexicon: popularity → reviews)';
  const chosen = overrides.chosen ?? 0;
  return {
    query_id: overrides.queryId ?? 'q-default',
    utterance: 'compare the popularity of all fiction books',
    parse: {
      utterance: 'compare the popularity of all fiction books',
      cardinality: 'n',
      concreteness: {
        values: 'explicit',
        attribute: overrides.planEmpty ? 'explicit' : 'implicit',
        cell: overrides.planEmpty ? 'ev-ea' : 'ev-ia',
        mixed_flag: false,
      },
      attribute: { surface: 'popularity', kind: 'implicit', attribute: null },
      values: [{
        surface: 'all fiction books',
        kind: 'explicit',
        plurality: 'set',
        matches: [{ attribute: 'Genre', value: 'Fiction' }],
        modifier: null,
        complement: false,
      }],
      diagnostics: ['template: of-for'],
    },
    plan: {
      entries: overrides.planEmpty ? [] : [{
        reference: 'popularity',
        role: 'attribute',
        chosen,
        interpretations: [
          {
            kind: 'measure', confidence: 0.8, measure: 'Reviews',
            provenance: 'popularity interpreted as Reviews (lexicon: popularity → reviews)',
          },
          {
            kind: 'measure', confidence: 0.55, measure: 'User rating',
            provenance: 'popularity interpreted as User rating (lexicon: popularity → user rating)',
          },
        ],
      }],
    },
    recommendations: [
      rec('I', 1, 1, caption),
      rec('J', 2, 1, caption),
      rec('K', 3, 2, caption),
      rec('L', 4, 3, caption),
    ],
  };
}
