/**
 * Result-pane state: running a pipeline and shaping triples for display.
 *
 * Automatic mode issues POST /select first (so the ranking can render),
 * then POST /run; manual mode runs the validated builder selection.
 * Both panes share this shape so manual and automatic results sit side
 * by side for the same text.
 */

import { GatewayClient, GatewayError } from './api.js';
import type { FeedbackState } from './feedback.js';
import type {
  ManualSelectionBody,
  RunResultWire,
  ScoreEntry,
  StageTraceWire,
} from './types.js';

export interface TripleRow {
  runId: string;
  index: number;
  subject: { surface: string; iri: string | null };
  predicate: { surface: string; iri: string | null };
  object: { surface: string; iri: string | null };
  feedback: FeedbackState;
  notice: string | null;
}

export type PaneStatus = 'idle' | 'loading' | 'done' | 'error';

export interface PaneState {
  mode: 'manual' | 'automatic';
  status: PaneStatus;
  run: RunResultWire | null;
  rows: TripleRow[];
  scores: ScoreEntry[];
  error: string | null;
}

export function idlePane(mode: 'manual' | 'automatic'): PaneState {
  return { mode, status: 'idle', run: null, rows: [], scores: [], error: null };
}

export function toTripleRows(run: RunResultWire): TripleRow[] {
  return run.triples.map((t, index) => ({
    runId: run.run_id,
    index,
    subject: { surface: t.subject.surface, iri: t.subject.iri ?? null },
    predicate: { surface: t.predicate.surface, iri: t.predicate.iri ?? null },
    object: { surface: t.object.surface, iri: t.object.iri ?? null },
    feedback: 'none',
    notice: null,
  }));
}

export function failedStage(trace: StageTraceWire[]): StageTraceWire | null {
  return trace.find((t) => t.status === 'failed') ?? null;
}

export async function runAutomatic(
  client: GatewayClient,
  text: string,
  kg?: string,
): Promise<PaneState> {
  try {
    const selection = await client.select(text, kg);
    const run = await client.run(kg ? { text, mode: 'automatic', kg } : { text, mode: 'automatic' });
    return {
      mode: 'automatic',
      status: 'done',
      run,
      rows: toTripleRows(run),
      scores: selection.scores,
      error: null,
    };
  } catch (err) {
    return errorPane('automatic', err);
  }
}

export async function runManual(
  client: GatewayClient,
  text: string,
  selection: ManualSelectionBody,
): Promise<PaneState> {
  try {
    const run = await client.run({ text, mode: 'manual', manual: selection });
    return {
      mode: 'manual',
      status: 'done',
      run,
      rows: toTripleRows(run),
      scores: [],
      error: null,
    };
  } catch (err) {
    return errorPane('manual', err);
  }
}

function errorPane(mode: 'manual' | 'automatic', err: unknown): PaneState {
  const message =
    err instanceof GatewayError
      ? `${err.code}: ${err.message}`
      : 'gateway unreachable';
  return { mode, status: 'error', run: null, rows: [], scores: [], error: message };
}

export function updateRowFeedback(
  pane: PaneState,
  index: number,
  feedback: FeedbackState,
  notice: string | null = null,
): PaneState {
  return {
    ...pane,
    rows: pane.rows.map((row) =>
      row.index === index ? { ...row, feedback, notice } : row,
    ),
  };
}
