import { describe, expect, it } from 'vitest';

import { GatewayClient } from '../src/api.js';
import { runAutomatic, runManual, toTripleRows, updateRowFeedback } from '../src/results.js';
import { renderPane, renderTriplesTable } from '../src/render.js';
import { FIXTURE_PIPELINE_ID, fixtureRun, mockGateway } from './mockGateway.js';

const TEXT = 'Einstein was born in Ulm. He developed relativity.';

function client(gateway: ReturnType<typeof mockGateway>) {
  return new GatewayClient('http://mock', gateway.fetch);
}

describe('runAutomatic', () => {
  it('issues POST /select then POST /run and renders two triple rows', async () => {
    const gateway = mockGateway();
    const pane = await runAutomatic(client(gateway), TEXT);

    expect(gateway.requests.map((r) => `${r.method} ${r.path}`)).toEqual([
      'POST /select',
      'POST /run',
    ]);
    expect(gateway.requestsTo('/run')[0]?.body).toEqual({ text: TEXT, mode: 'automatic' });

    expect(pane.status).toBe('done');
    expect(pane.rows).toHaveLength(2);
    expect(pane.scores[0]?.pipeline_id).toBe(FIXTURE_PIPELINE_ID);
    const html = renderPane(pane);
    expect(html).toContain('Einstein');
    expect((html.match(/class="triple-row/g) ?? []).length).toBe(2);
  });

  it('carries the exact (run_id, triple_index) pair into every row', async () => {
    const gateway = mockGateway({ run: fixtureRun('automatic', 'run-abc-42') });
    const pane = await runAutomatic(client(gateway), TEXT);
    expect(pane.rows.map((r) => [r.runId, r.index])).toEqual([
      ['run-abc-42', 0],
      ['run-abc-42', 1],
    ]);
    const html = renderPane(pane);
    expect(html).toContain('data-run-id="run-abc-42" data-triple-index="0"');
    expect(html).toContain('data-run-id="run-abc-42" data-triple-index="1"');
  });

  it('does not run when selection fails', async () => {
    const gateway = mockGateway({ offline: true });
    const pane = await runAutomatic(client(gateway), TEXT);
    expect(pane.status).toBe('error');
    expect(pane.error).toContain('unreachable');
    expect(gateway.requestsTo('/run')).toHaveLength(0);
  });
});

describe('runManual', () => {
  it('posts the manual selection', async () => {
    const gateway = mockGateway({ run: fixtureRun('manual') });
    const selection = {
      coref: 'coref-recency',
      extractor: 'verb-extractor',
      linkers: ['alias-entity-linker', 'alias-relation-linker'],
      kg: 'toykg',
    };
    const pane = await runManual(client(gateway), TEXT, selection);
    expect(pane.status).toBe('done');
    expect(gateway.requestsTo('/run')[0]?.body).toEqual({
      text: TEXT,
      mode: 'manual',
      manual: selection,
    });
  });
});

describe('rendering states', () => {
  it('shows an explicit empty state rather than a blank table', () => {
    const empty = fixtureRun('automatic');
    empty.triples = [];
    const rows = toTripleRows(empty);
    expect(rows).toEqual([]);
    expect(renderTriplesTable(rows)).toContain('No triples extracted');
  });

  it('flags rejected rows visually', async () => {
    const gateway = mockGateway();
    let pane = await runAutomatic(client(gateway), TEXT);
    pane = updateRowFeedback(pane, 1, 'rejected');
    const html = renderPane(pane);
    expect(html).toContain('row-rejected');
  });

  it('surfaces a failed stage as a banner', () => {
    const failed = fixtureRun('manual');
    failed.triples = [];
    failed.trace = [
      { ...failed.trace[0]!, status: 'failed' },
    ];
    const pane = {
      mode: 'manual' as const,
      status: 'done' as const,
      run: failed,
      rows: toTripleRows(failed),
      scores: [],
      error: null,
    };
    const html = renderPane(pane);
    expect(html).toContain('failed; no triples produced');
  });
});
