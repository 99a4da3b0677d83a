// Pure console state. Renders only server-provided values: snapshots and
// command records are merged as-is, never extrapolated.

import type { CommandRecord, Snapshot } from './types.js';

export const STALE_AFTER_MS = 1000;

export type Connection = 'connecting' | 'connected' | 'disconnected';

export type RowStatus = 'pending' | 'ok' | 'error' | 'transport';

export interface HistoryRow {
  key: string;              // `rec:<id>` once server-known, else `local:<n>`
  id: number | null;
  utterance: string;
  template: string | null;
  score: number | null;
  status: RowStatus;
  outcome: string;
}

function rowFromRecord(record: CommandRecord): HistoryRow {
  let status: RowStatus = 'ok';
  let outcome: string;
  if (record.error !== null) {
    status = 'error';
    outcome = record.error.type;
  } else if (record.report !== null) {
    outcome = `${record.report.error_cm.toFixed(3)} cm (${record.report.arm} arm, ` +
      `${record.report.elapsed.toFixed(1)} s)`;
  } else {
    outcome = 'no outcome reported';
  }
  return {
    key: `rec:${record.id}`,
    id: record.id,
    utterance: record.utterance,
    template: record.match ? record.match.template : null,
    score: record.match ? record.match.score : null,
    status,
    outcome,
  };
}

export class ViewModel {
  snapshot: Snapshot | null = null;
  connection: Connection = 'connecting';
  private lastSnapshotAtMs: number | null = null;
  private rows = new Map<string, HistoryRow>();
  private order: string[] = [];   // insertion order of row keys
  private localSeq = 0;

  applySnapshot(snapshot: Snapshot, nowMs: number): void {
    this.snapshot = snapshot;
    this.lastSnapshotAtMs = nowMs;
    this.connection = 'connected';
    for (const record of snapshot.history) {
      this.applyRecord(record);
    }
  }

  applyRecord(record: CommandRecord): void {
    const row = rowFromRecord(record);
    if (!this.rows.has(row.key)) {
      this.order.push(row.key);
    }
    this.rows.set(row.key, row);
  }

  // Local echo for a submitted command; resolved by the POST response or a
  // matching streamed record.
  beginCommand(utterance: string): string {
    const key = `local:${++this.localSeq}`;
    this.rows.set(key, {
      key, id: null, utterance, template: null, score: null,
      status: 'pending', outcome: 'executing...',
    });
    this.order.push(key);
    return key;
  }

  resolveCommand(key: string, record: CommandRecord): void {
    // replace the pending row in place to keep its position
    const resolved = rowFromRecord(record);
    const existing = this.rows.get(key);
    if (existing === undefined) {
      this.applyRecord(record);
      return;
    }
    this.rows.delete(key);
    this.rows.set(resolved.key, resolved);
    this.order[this.order.indexOf(key)] = resolved.key;
  }

  failCommand(key: string, message: string): void {
    const row = this.rows.get(key);
    if (row !== undefined) {
      row.status = 'transport';
      row.outcome = message;
    }
  }

  markConnected(): void {
    this.connection = 'connected';
  }

  markDisconnected(): void {
    this.connection = 'disconnected';
  }

  isStale(nowMs: number): boolean {
    if (this.connection !== 'connected') return true;
    if (this.lastSnapshotAtMs === null) return true;
    return nowMs - this.lastSnapshotAtMs > STALE_AFTER_MS;
  }

  // newest first, deduplicated by server record id
  historyRows(): HistoryRow[] {
    const out: HistoryRow[] = [];
    for (let i = this.order.length - 1; i >= 0; i--) {
      const row = this.rows.get(this.order[i]);
      if (row !== undefined) out.push(row);
    }
    return out;
  }
}
