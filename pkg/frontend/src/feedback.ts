/**
 * Per-triple feedback state machine.
 *
 * Rows move none -> submitting -> accepted/rejected. A re-click on a
 * settled row re-submits (the gateway overwrites the earlier verdict);
 * any failure returns the row to none with a visible, retryable notice.
 */

import { GatewayClient, GatewayError } from './api.js';

export type FeedbackState = 'none' | 'submitting' | 'accepted' | 'rejected';

export interface FeedbackOutcome {
  state: FeedbackState;
  error: string | null;
}

export function beginSubmission(current: FeedbackState): FeedbackState {
  if (current === 'submitting') return current; // one in flight per row
  return 'submitting';
}

export async function submitFeedback(
  client: GatewayClient,
  runId: string,
  tripleIndex: number,
  verdict: 'accept' | 'reject',
): Promise<FeedbackOutcome> {
  try {
    await client.submitFeedback({ run_id: runId, triple_index: tripleIndex, verdict });
    return { state: verdict === 'accept' ? 'accepted' : 'rejected', error: null };
  } catch (err) {
    if (err instanceof GatewayError) {
      return { state: 'none', error: `feedback rejected (${err.code}); try again` };
    }
    return { state: 'none', error: 'gateway unreachable; try again' };
  }
}
