// Conversation state: an append-only log of turns plus bookkeeping for the
// single in-flight request. Pure data logic, no DOM.

import type { QueryResponse } from './types.js';

export interface ConversationTurn {
  utterance: string;
  response: QueryResponse;
  // selected interpretation index per plan reference ("role:reference" key)
  selected: Record<string, number>;
  timestamp: number;
}

export interface InlineError {
  utterance: string;
  code: string;
  message: string;
  diagnostics: string[];
}

/** Submit is enabled only with an open session, no in-flight query, and a
 * non-empty utterance. */
export function canSubmit(hasSession: boolean, busy: boolean, text: string): boolean {
  return hasSession && !busy && text.trim() !== '';
}

export function selectionsOf(response: QueryResponse): Record<string, number> {
  const selected: Record<string, number> = {};
  for (const entry of response.plan.entries) {
    selected[`${entry.role}:${entry.reference}`] = entry.chosen;
  }
  return selected;
}

export class ConversationStore {
  readonly turns: ConversationTurn[] = [];
  lastError: InlineError | null = null;
  private sequence = 0;
  private inFlight: number | null = null;
  private readonly clock: () => number;

  constructor(clock: () => number = () => Date.now()) {
    this.clock = clock;
  }

  get busy(): boolean {
    return this.inFlight !== null;
  }

  /** Register a new outgoing query; returns its token. */
  begin(): number {
    this.sequence += 1;
    this.inFlight = this.sequence;
    return this.sequence;
  }

  /** True when the token is still the newest in-flight request. */
  isCurrent(token: number): boolean {
    return this.inFlight === token;
  }

  /** Append a turn for a completed query. Stale responses (superseded by a
   * newer begin()) are discarded and the log is untouched. */
  complete(token: number, utterance: string, response: QueryResponse): ConversationTurn | null {
    if (!this.isCurrent(token)) {
      return null;
    }
    this.inFlight = null;
    this.lastError = null;
    const turn: ConversationTurn = {
      utterance,
      response,
      selected: selectionsOf(response),
      timestamp: this.clock(),
    };
    this.turns.push(turn);
    return turn;
  }

  /** A failed query never appends a turn; the error is shown inline. */
  fail(token: number, utterance: string, code: string, message: string,
       diagnostics: string[] = []): InlineError | null {
    if (!this.isCurrent(token)) {
      return null;
    }
    this.inFlight = null;
    this.lastError = { utterance, code, message, diagnostics };
    return this.lastError;
  }

  /** Replace a turn's response after an interpretation toggle. The turn keeps
   * its position in the log (the log itself is append-only). */
  applyChoice(turnIndex: number, response: QueryResponse): ConversationTurn {
    const turn = this.turns[turnIndex];
    if (!turn) {
      throw new Error(`no turn at index ${turnIndex}`);
    }
    turn.response = response;
    turn.selected = selectionsOf(response);
    return turn;
  }
}
