/**
 * Pure HTML renderers: every view is a function of fetched state only,
 * so replaying recorded API responses reproduces identical markup.
 * Event wiring happens elsewhere via data-action attributes.
 */

import type { ComposeView } from './builder.js';
import type { PaneState, TripleRow } from './results.js';
import type { ScoreEntry, StageTraceWire } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

const SLOT_LABELS: Record<string, string> = {
  coref: 'Coreference',
  extractor: 'Triple extraction',
  entity_linker: 'Entity linker',
  relation_linker: 'Relation linker',
  joint_linker: 'Joint linker',
};

export function renderBuilder(view: ComposeView): string {
  const slotHtml = view.slots
    .map((group) => {
      const options = group.options
        .map(
          (o) =>
            `<option value="${escapeHtml(o.id)}"${group.selected === o.id ? ' selected' : ''}>` +
            `${escapeHtml(o.label)}</option>`,
        )
        .join('');
      return `
      <label class="slot" data-slot="${group.slot}">
        <span class="slot-label">${SLOT_LABELS[group.slot] ?? group.slot}</span>
        <select data-action="choose-slot" data-slot="${group.slot}">
          <option value=""${group.selected === null ? ' selected' : ''}>choose…</option>
          ${options}
        </select>
      </label>`;
    })
    .join('');

  const kgHtml = view.kgOptions
    .map(
      (kg) =>
        `<option value="${escapeHtml(kg)}"${view.selectedKg === kg ? ' selected' : ''}>` +
        `${escapeHtml(kg)}</option>`,
    )
    .join('');

  return `
  <section class="builder">
    <div class="linking-mode">
      <label><input type="radio" name="linking-mode" value="pair" data-action="linking-mode"${
        view.linkingMode === 'pair' ? ' checked' : ''
      }> entity + relation linkers</label>
      <label><input type="radio" name="linking-mode" value="joint" data-action="linking-mode"${
        view.linkingMode === 'joint' ? ' checked' : ''
      }> joint linker</label>
    </div>
    ${slotHtml}
    <label class="slot" data-slot="kg">
      <span class="slot-label">Knowledge graph</span>
      <select data-action="choose-slot" data-slot="kg">
        <option value=""${view.selectedKg === null ? ' selected' : ''}>choose…</option>
        ${kgHtml}
      </select>
    </label>
    <button class="run-button" data-action="run-manual"${view.runEnabled ? '' : ' disabled'}>
      Run manual pipeline
    </button>
  </section>`;
}

function renderTerm(term: { surface: string; iri: string | null }): string {
  const iri = term.iri
    ? `<div class="term-iri"><a href="${escapeHtml(term.iri)}">${escapeHtml(term.iri)}</a></div>`
    : '<div class="term-iri term-unlinked">unlinked</div>';
  return `<div class="term"><div class="term-surface">${escapeHtml(term.surface)}</div>${iri}</div>`;
}

export function renderTripleRow(row: TripleRow): string {
  const stateClass =
    row.feedback === 'rejected'
      ? ' row-rejected'
      : row.feedback === 'accepted'
        ? ' row-accepted'
        : '';
  const busy = row.feedback === 'submitting';
  const notice = row.notice
    ? `<div class="row-notice" role="alert">${escapeHtml(row.notice)}</div>`
    : '';
  return `
  <tr class="triple-row${stateClass}" data-run-id="${escapeHtml(row.runId)}" data-triple-index="${row.index}">
    <td>${renderTerm(row.subject)}</td>
    <td>${renderTerm(row.predicate)}</td>
    <td>${renderTerm(row.object)}</td>
    <td class="feedback-cell">
      <button data-action="feedback" data-verdict="accept" data-run-id="${escapeHtml(row.runId)}"
        data-triple-index="${row.index}"${busy ? ' disabled' : ''}>✓</button>
      <button data-action="feedback" data-verdict="reject" data-run-id="${escapeHtml(row.runId)}"
        data-triple-index="${row.index}"${busy ? ' disabled' : ''}>✗</button>
      <span class="feedback-state">${row.feedback}</span>
      ${notice}
    </td>
  </tr>`;
}

export function renderTriplesTable(rows: TripleRow[]): string {
  if (rows.length === 0) {
    return '<p class="empty-state">No triples extracted from this text.</p>';
  }
  return `
  <table class="triples">
    <thead><tr><th>Subject</th><th>Predicate</th><th>Object</th><th>Feedback</th></tr></thead>
    <tbody>${rows.map(renderTripleRow).join('')}</tbody>
  </table>`;
}

export function renderTrace(trace: StageTraceWire[]): string {
  if (trace.length === 0) return '';
  const rows = trace
    .map(
      (t) => `
    <tr class="trace-${t.status}">
      <td>${escapeHtml(t.component_id)}</td>
      <td>${escapeHtml(t.task)}</td>
      <td>${t.status}</td>
      <td>${t.latency_ms} ms</td>
    </tr>`,
    )
    .join('');
  return `
  <details class="trace-panel">
    <summary>Stage trace</summary>
    <table><thead><tr><th>Component</th><th>Task</th><th>Status</th><th>Latency</th></tr></thead>
    <tbody>${rows}</tbody></table>
  </details>`;
}

export function renderScores(scores: ScoreEntry[]): string {
  if (scores.length === 0) return '';
  const rows = scores
    .map(
      (s, rank) => `
    <tr${rank === 0 ? ' class="score-best"' : ''}>
      <td>${rank + 1}</td><td>${escapeHtml(s.pipeline_id)}</td><td>${s.score.toFixed(4)}</td>
    </tr>`,
    )
    .join('');
  return `
  <details class="score-panel" open>
    <summary>Pipeline ranking</summary>
    <table><thead><tr><th>#</th><th>Pipeline</th><th>Score</th></tr></thead>
    <tbody>${rows}</tbody></table>
  </details>`;
}

export function renderPane(pane: PaneState): string {
  const title = pane.mode === 'manual' ? 'Manual pipeline' : 'Automatic pipeline';
  let body: string;
  switch (pane.status) {
    case 'idle':
      body = '<p class="empty-state">Not run yet.</p>';
      break;
    case 'loading':
      body = '<p class="loading-state">Running…</p>';
      break;
    case 'error':
      body = `<p class="error-state" role="alert">${escapeHtml(pane.error ?? 'failed')}</p>`;
      break;
    default: {
      const run = pane.run;
      const failed = run?.trace.find((t) => t.status === 'failed');
      const banner = failed
        ? `<p class="error-state" role="alert">stage ${escapeHtml(failed.component_id)} failed; no triples produced</p>`
        : '';
      body = `
      ${run ? `<p class="pipeline-id">${escapeHtml(run.pipeline.id)}</p>` : ''}
      ${banner}
      ${renderScores(pane.scores)}
      ${renderTriplesTable(pane.rows)}
      ${run ? renderTrace(run.trace) : ''}`;
    }
  }
  return `
  <section class="pane pane-${pane.mode}" data-pane="${pane.mode}">
    <h2>${title}</h2>
    ${body}
  </section>`;
}
