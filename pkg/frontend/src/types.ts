export type BlockKind = "structural" | "load" | "fixed";

export interface Block {
  x: number;
  y: number;
  z: number;
  kind: BlockKind;
}

export interface WorldDocument {
  ground_level: number;
  blocks: Block[];
}

export type Tool = "place-structural" | "place-load" | "erase" | "inspect";
export type Overlay = "none" | "stress-bins" | "position-bins";
export type RunMode = "stress" | "position";

export interface TimeSeriesSample {
  step: number;
  time: number;
  u: [number, number, number];
  von_mises: number;
}

export interface RunResult {
  particles: [number, number, number][];
  displacements: [number, number, number][];
  von_mises: number[];
  bins: number[];
  max_von_mises: number;
  tracked_deflection: [number, number, number];
  exceeds_ultimate: boolean[];
  diagnostics: string[];
  mode: RunMode;
  scale_max: number;
  time_series: TimeSeriesSample[];
  ult_stress: number;
}

export type JobStatus = "pending" | "running" | "done" | "failed";

export interface JobSummary {
  id: string;
  status: JobStatus;
  progress: number;
  error: string | null;
  result: RunResult | null;
}

export interface Frame {
  step: number;
  time: number;
  positions: [number, number, number][];
  bins: number[];
}

export interface PropertyRow {
  name: string;
  value: number;
  auto: boolean;
  unit: string;
  range: string;
  doc: string;
}

export interface RunRequest {
  mode: RunMode;
  radius: number;
  seed: [number, number, number];
  record_frames?: boolean;
  record_every?: number;
}

export interface ScenarioDocument {
  name: string;
  description: string;
  world: WorldDocument;
  properties: Record<string, number>;
  record_every: number;
  runs: {
    name: string;
    mode: RunMode;
    seed: [number, number, number];
    radius: number;
    special_block: [number, number, number] | null;
  }[];
}
