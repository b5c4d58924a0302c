/**
 * Single-screen application shell: text input on top, the manual
 * composer on the left, and two result panes (manual vs automatic)
 * side by side underneath.
 *
 * State lives in module fields; every change re-renders the affected
 * region from the pure renderers and re-reads nothing from the DOM
 * except the input controls the user just touched.
 */

import { GatewayClient } from './api.js';
import {
  BuilderState,
  chooseSlot,
  composeView,
  emptyBuilderState,
  setLinkingMode,
  toSelectionBody,
  LinkingMode,
} from './builder.js';
import { beginSubmission, submitFeedback } from './feedback.js';
import {
  PaneState,
  idlePane,
  runAutomatic,
  runManual,
  updateRowFeedback,
} from './results.js';
import { renderBuilder, renderPane, escapeHtml } from './render.js';
import { loadText, saveText } from './storage.js';
import type { ComponentInfo } from './types.js';

declare global {
  interface Window {
    PLUMBER_GATEWAY?: string;
  }
}

export class App {
  private components: ComponentInfo[] = [];
  private builder: BuilderState = emptyBuilderState();
  private manualPane: PaneState = idlePane('manual');
  private autoPane: PaneState = idlePane('automatic');
  private loadError: string | null = null;

  constructor(
    private readonly client: GatewayClient,
    private readonly root: HTMLElement,
  ) {}

  async start(): Promise<void> {
    try {
      this.components = await this.client.getComponents();
    } catch {
      this.loadError = 'cannot reach the gateway; is `plumber serve` running?';
    }
    this.render();
    this.root.addEventListener('click', (e) => this.onClick(e));
    this.root.addEventListener('change', (e) => this.onChange(e));
    this.root.addEventListener('input', (e) => {
      const target = e.target as HTMLTextAreaElement;
      if (target.dataset['role'] === 'input-text') {
        saveText(target.value);
      }
    });
  }

  private inputText(): string {
    const area = this.root.querySelector<HTMLTextAreaElement>('[data-role="input-text"]');
    return area ? area.value : loadText();
  }

  private render(): void {
    const banner = this.loadError
      ? `<p class="error-state" role="alert">${escapeHtml(this.loadError)}</p>`
      : '';
    this.root.innerHTML = `
      <header><h1>plumber</h1></header>
      ${banner}
      <section class="input-area">
        <textarea data-role="input-text" rows="4"
          placeholder="Paste a text snippet…">${escapeHtml(loadText())}</textarea>
        <button data-action="run-automatic">Run automatic pipeline</button>
      </section>
      <div class="workbench">
        <div data-region="builder">${renderBuilder(composeView(this.components, this.builder))}</div>
        <div class="panes">
          <div data-region="manual-pane">${renderPane(this.manualPane)}</div>
          <div data-region="auto-pane">${renderPane(this.autoPane)}</div>
        </div>
      </div>`;
  }

  private renderRegion(region: string, html: string): void {
    const el = this.root.querySelector(`[data-region="${region}"]`);
    if (el) {
      el.innerHTML = html;
    }
  }

  private refreshBuilder(): void {
    this.renderRegion('builder', renderBuilder(composeView(this.components, this.builder)));
  }

  private refreshPanes(): void {
    this.renderRegion('manual-pane', renderPane(this.manualPane));
    this.renderRegion('auto-pane', renderPane(this.autoPane));
  }

  private onChange(e: Event): void {
    const target = e.target as HTMLElement;
    const action = target.dataset['action'];
    if (action === 'choose-slot') {
      const select = target as HTMLSelectElement;
      const slot = select.dataset['slot'] ?? '';
      this.builder = chooseSlot(
        this.components,
        this.builder,
        slot,
        select.value === '' ? null : select.value,
      );
      this.refreshBuilder();
    } else if (action === 'linking-mode') {
      const radio = target as HTMLInputElement;
      this.builder = setLinkingMode(this.builder, radio.value as LinkingMode);
      this.refreshBuilder();
    }
  }

  private onClick(e: Event): void {
    const target = (e.target as HTMLElement).closest<HTMLElement>('[data-action]');
    if (!target) return;
    const action = target.dataset['action'];
    if (action === 'run-manual') {
      void this.handleRunManual();
    } else if (action === 'run-automatic') {
      void this.handleRunAutomatic();
    } else if (action === 'feedback') {
      const runId = target.dataset['runId'];
      const index = Number(target.dataset['tripleIndex']);
      const verdict = target.dataset['verdict'] as 'accept' | 'reject';
      if (runId !== undefined && Number.isInteger(index)) {
        void this.handleFeedback(runId, index, verdict);
      }
    }
  }

  private async handleRunManual(): Promise<void> {
    if (this.manualPane.status === 'loading') return; // one run in flight per pane
    const selection = toSelectionBody(this.builder);
    if (!selection) return;
    this.manualPane = { ...idlePane('manual'), status: 'loading' };
    this.refreshPanes();
    this.manualPane = await runManual(this.client, this.inputText(), selection);
    this.refreshPanes();
  }

  private async handleRunAutomatic(): Promise<void> {
    if (this.autoPane.status === 'loading') return;
    saveText(this.inputText());
    this.autoPane = { ...idlePane('automatic'), status: 'loading' };
    this.refreshPanes();
    this.autoPane = await runAutomatic(this.client, this.inputText());
    this.refreshPanes();
  }

  private async handleFeedback(
    runId: string,
    index: number,
    verdict: 'accept' | 'reject',
  ): Promise<void> {
    const panes: Array<['manualPane' | 'autoPane', PaneState]> = [
      ['manualPane', this.manualPane],
      ['autoPane', this.autoPane],
    ];
    for (const [key, pane] of panes) {
      const row = pane.rows.find((r) => r.runId === runId && r.index === index);
      if (!row) continue;
      if (row.feedback === 'submitting') return;
      this[key] = updateRowFeedback(pane, index, beginSubmission(row.feedback));
      this.refreshPanes();
      const outcome = await submitFeedback(this.client, runId, index, verdict);
      this[key] = updateRowFeedback(this[key], index, outcome.state, outcome.error);
      this.refreshPanes();
    }
  }
}

export function mount(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const base = window.PLUMBER_GATEWAY ?? 'http://127.0.0.1:8080';
  const app = new App(new GatewayClient(base), root);
  void app.start();
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mount();
}
