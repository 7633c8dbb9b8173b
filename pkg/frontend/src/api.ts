// Thin typed client for the compareviz HTTP API. The fetch implementation is
// injectable so tests can stub the network.

import type { ErrorEnvelope, QueryResponse, SessionInfo } from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let envelope: ErrorEnvelope | null = null;
  try {
    envelope = (await response.json()) as ErrorEnvelope;
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  throw new ApiError(
    response.status,
    envelope?.code ?? 'http_error',
    envelope?.message ?? `request failed with status ${response.status}`,
    envelope?.details ?? {},
  );
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async uploadDataset(file: Blob, filename: string, metadataJson?: string): Promise<SessionInfo> {
    const form = new FormData();
    form.append('file', file, filename);
    if (metadataJson && metadataJson.trim()) {
      form.append('metadata', new Blob([metadataJson], { type: 'application/json' }), 'metadata.json');
    }
    const response = await this.fetchImpl(`${this.baseUrl}/datasets`, {
      method: 'POST',
      body: form,
    });
    return unwrap<SessionInfo>(response);
  }

  async query(sessionId: string, utterance: string): Promise<QueryResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/query`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ utterance }),
    });
    return unwrap<QueryResponse>(response);
  }

  async choose(
    sessionId: string,
    queryId: string,
    reference: string,
    index: number,
  ): Promise<QueryResponse> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/query/${queryId}/choose`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ reference, index }),
      },
    );
    return unwrap<QueryResponse>(response);
  }

  async catalog(): Promise<Record<string, unknown>> {
    const response = await this.fetchImpl(`${this.baseUrl}/catalog`);
    return unwrap(response);
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/healthz`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
