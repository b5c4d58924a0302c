/**
 * Typed client for the gateway HTTP API.
 *
 * The fetch implementation is injectable so tests can run against a
 * recorded mock gateway without any network.
 */

import type {
  ComponentInfo,
  FeedbackBody,
  ManualSelectionBody,
  PipelineInfo,
  RunRequestBody,
  RunResultWire,
  SelectResponse,
} from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Gateway error with the machine code preserved for the UI. */
export class GatewayError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'GatewayError';
  }
}

export class GatewayClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async getComponents(): Promise<ComponentInfo[]> {
    return this.request('GET', '/components');
  }

  async getPipelines(kg?: string): Promise<{ pipelines: PipelineInfo[]; stats: unknown }> {
    const query = kg ? `?kg=${encodeURIComponent(kg)}` : '';
    return this.request('GET', `/pipelines${query}`);
  }

  async validatePipeline(selection: ManualSelectionBody): Promise<PipelineInfo> {
    return this.request('POST', '/pipelines/validate', selection);
  }

  async select(text: string, kg?: string): Promise<SelectResponse> {
    return this.request('POST', '/select', kg ? { text, kg } : { text });
  }

  async run(body: RunRequestBody): Promise<RunResultWire> {
    return this.request('POST', '/run', body);
  }

  async getRun(runId: string): Promise<RunResultWire> {
    return this.request('GET', `/runs/${encodeURIComponent(runId)}`);
  }

  async submitFeedback(body: FeedbackBody): Promise<{ acknowledged: boolean }> {
    return this.request('POST', '/feedback', body);
  }

  async health(): Promise<{ status: string }> {
    return this.request('GET', '/health');
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { 'Content-Type': 'application/json' } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const code = payload && typeof payload.code === 'string' ? payload.code : 'unknown_error';
      const message =
        payload && typeof payload.message === 'string' ? payload.message : response.statusText;
      throw new GatewayError(response.status, code, message);
    }
    return payload as T;
  }
}
