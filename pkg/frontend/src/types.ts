// Wire types of the gateway service (docs/formats.md in the backend repo).

export type Side = 'left' | 'right';

export interface ArmSnapshot {
  q: number[];
  gripper: 'open' | 'closed';
  moving: boolean;
  links: [number, number, number][];
  tool: [number, number, number];
}

export interface ObjectSnapshot {
  id: string;
  label: string;
  position: [number, number, number];
  held_by: Side | null;
}

export interface DetectionRecord {
  label: string;
  u: number;
  v: number;
  w: number;
  h: number;
  depth_m: number;
  confidence: number;
}

export interface MatchInfo {
  template: string;
  action: string;
  object_label: string;
  score: number;
  accepted: boolean;
}

export interface PickReport {
  desired: [number, number, number];
  achieved: [number, number, number];
  error_cm: number;
  arm: Side;
  elapsed: number;
}

export interface CommandRecord {
  id: number;
  utterance: string;
  match: MatchInfo | null;
  detection: DetectionRecord | null;
  grasp_target: [number, number, number] | null;
  report: PickReport | null;
  error: { type: string; message: string } | null;
  submitted_at: number;
  completed_at: number;
}

export interface Snapshot {
  time: number;
  arms: Record<Side, ArmSnapshot>;
  objects: ObjectSnapshot[];
  detections: DetectionRecord[];
  history: CommandRecord[];
}

export type StreamMessage =
  | { type: 'snapshot'; data: Snapshot }
  | { type: 'record'; data: CommandRecord };
