// Page wiring: dataset upload and metadata editor in the sidebar, a
// conversation log of turns, one in-flight query at a time.

import vegaEmbed from 'vega-embed';
import { ApiClient, ApiError } from './api.js';
import { embedCharts, renderError, renderTurn } from './render.js';
import { canSubmit, ConversationStore } from './state.js';
import type { SessionInfo } from './types.js';

const api = new ApiClient(resolveBaseUrl());
const store = new ConversationStore();
let session: SessionInfo | null = null;

function resolveBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('api') ?? 'http://127.0.0.1:8765';
}

function $(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

const embed = (el: HTMLElement, spec: Record<string, unknown>) =>
  vegaEmbed(el, spec as never, { actions: false });

function setStatus(text: string, kind: 'ok' | 'err' | '' = '') {
  const status = $('status');
  status.textContent = text;
  status.className = kind;
}

function refreshControls() {
  const input = $('utterance') as HTMLInputElement;
  const submit = $('submit') as HTMLButtonElement;
  submit.disabled = !canSubmit(session !== null, store.busy, input.value);
}

function showSchema(info: SessionInfo) {
  const list = $('schema');
  list.replaceChildren();
  for (const column of info.schema) {
    const item = document.createElement('li');
    item.textContent = `${column.name} (${column.kind}` +
      (column.unit ? `, ${column.unit})` : ')');
    list.appendChild(item);
  }
  $('dataset-info').textContent = `${info.row_count} rows, session ${info.session_id}`;
}

async function uploadDataset() {
  const picker = $('file') as HTMLInputElement;
  const file = picker.files?.[0];
  if (!file) {
    setStatus('choose a CSV file first', 'err');
    return;
  }
  const metadata = ($('metadata') as HTMLTextAreaElement).value;
  setStatus('uploading…');
  try {
    session = await api.uploadDataset(file, file.name, metadata);
    showSchema(session);
    setStatus(`dataset ready (${session.row_count} rows)`, 'ok');
  } catch (error) {
    session = null;
    setStatus(error instanceof ApiError
      ? `${error.code}: ${error.message}`
      : `upload failed: ${String(error)}`, 'err');
  }
  refreshControls();
}

function renderLog() {
  const log = $('conversation');
  log.replaceChildren();
  store.turns.forEach((turn, index) => {
    const turnEl = renderTurn(turn, index, {
      onToggle: (reference, choiceIndex) => toggleInterpretation(index, reference, choiceIndex),
    });
    log.appendChild(turnEl);
    void embedCharts(turnEl, turn.response, embed);
  });
  if (store.lastError) {
    log.appendChild(renderError(store.lastError));
  }
  log.scrollTop = log.scrollHeight;
}

async function submitUtterance() {
  if (!session || store.busy) return;
  const input = $('utterance') as HTMLInputElement;
  const utterance = input.value.trim();
  if (!utterance) return;
  const token = store.begin();
  refreshControls();
  setStatus('thinking…');
  try {
    const response = await api.query(session.session_id, utterance);
    if (store.complete(token, utterance, response)) {
      input.value = '';
      setStatus(`ranked ${response.recommendations.length} charts`, 'ok');
    }
  } catch (error) {
    const diagnostics = error instanceof ApiError
      ? ((error.details.diagnostics as string[] | undefined) ?? [])
      : [];
    store.fail(token, utterance,
      error instanceof ApiError ? error.code : 'network_error',
      error instanceof Error ? error.message : String(error), diagnostics);
    setStatus('query failed', 'err');
  }
  renderLog();
  refreshControls();
}

async function toggleInterpretation(turnIndex: number, reference: string, index: number) {
  if (!session) return;
  const turn = store.turns[turnIndex];
  if (!turn) return;
  setStatus('re-rendering…');
  try {
    const response = await api.choose(session.session_id, turn.response.query_id,
      reference, index);
    store.applyChoice(turnIndex, response);
    setStatus('interpretation updated', 'ok');
  } catch (error) {
    setStatus(error instanceof ApiError
      ? `${error.code}: ${error.message}`
      : `choose failed: ${String(error)}`, 'err');
  }
  renderLog();
}

function init() {
  $('upload').addEventListener('click', () => void uploadDataset());
  $('submit').addEventListener('click', () => void submitUtterance());
  const input = $('utterance') as HTMLInputElement;
  input.addEventListener('input', refreshControls);
  input.addEventListener('keydown', (event) => {
    if (event.key === 'Enter' && !(($('submit') as HTMLButtonElement).disabled)) {
      void submitUtterance();
    }
  });
  refreshControls();
  void api.health().then((ok) => {
    if (!ok) setStatus(`API not reachable at ${api.baseUrl}; start it with: `
      + 'compareviz serve', 'err');
  });
}

init();
