/**
 * Wire types mirroring the gateway's JSON responses.
 */

export type TaskName =
  | 'coref'
  | 'triple_extraction'
  | 'entity_linking'
  | 'relation_linking'
  | 'joint_linking';

export interface ComponentInfo {
  id: string;
  name: string;
  task: TaskName;
  kgs: string[];
  target: { kind: 'native' | 'remote'; ref: string };
  version: string;
}

export interface PipelineInfo {
  id: string;
  coref: string;
  extractor: string;
  entity_linker: string | null;
  relation_linker: string | null;
  joint_linker: string | null;
  kg: string;
}

export interface LinkedTermWire {
  surface: string;
  start: number;
  end: number;
  confidence: number;
  iri?: string;
}

export interface AlignedTripleWire {
  subject: LinkedTermWire;
  predicate: LinkedTermWire;
  object: LinkedTermWire;
}

export interface StageTraceWire {
  component_id: string;
  task: TaskName;
  latency_ms: number;
  status: 'ok' | 'failed' | 'cache_hit';
  payload_hash_in: string;
  payload_hash_out: string;
}

export interface RunResultWire {
  run_id: string;
  pipeline: PipelineInfo;
  input_hash: string;
  triples: AlignedTripleWire[];
  trace: StageTraceWire[];
  mode: 'manual' | 'automatic';
}

export interface ScoreEntry {
  pipeline_id: string;
  score: number;
}

export interface SelectResponse {
  pipeline: PipelineInfo;
  scores: ScoreEntry[];
}

export interface ManualSelectionBody {
  coref: string;
  extractor: string;
  linkers: string[];
  kg: string;
}

export interface RunRequestBody {
  text?: string;
  file?: string;
  mode: 'manual' | 'automatic';
  manual?: ManualSelectionBody;
  kg?: string;
}

export interface FeedbackBody {
  run_id: string;
  triple_index: number;
  verdict: 'accept' | 'reject';
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
