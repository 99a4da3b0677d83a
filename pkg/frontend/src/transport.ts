// Thin client over the gateway's HTTP endpoints and /stream WebSocket.

import type { CommandRecord, DetectionRecord, Snapshot, StreamMessage } from './types.js';

export interface StreamHandlers {
  onMessage(message: StreamMessage): void;
  onOpen?(): void;
  onClose?(): void;
}

// Injectable constructors so node-side tests can pass the 'ws' package and
// a custom fetch.
export interface TransportOptions {
  webSocketCtor?: new (url: string) => WebSocket;
  fetchFn?: typeof fetch;
}

export class GatewayClient {
  private readonly fetchFn: typeof fetch;
  private readonly wsCtor: new (url: string) => WebSocket;

  constructor(readonly baseUrl: string, options: TransportOptions = {}) {
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.wsCtor = options.webSocketCtor
      ?? (globalThis as { WebSocket?: new (url: string) => WebSocket }).WebSocket!;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new Error(`${path} failed: HTTP ${response.status}`);
    }
    return response.json() as Promise<T>;
  }

  async postCommand(utterance: string): Promise<CommandRecord> {
    return this.postJson<CommandRecord>('/command', { utterance });
  }

  async postDetections(records: DetectionRecord[]): Promise<{ accepted: number }> {
    return this.postJson('/detections', records);
  }

  async fetchState(): Promise<Snapshot> {
    const response = await this.fetchFn(`${this.baseUrl}/state`);
    if (!response.ok) {
      throw new Error(`/state failed: HTTP ${response.status}`);
    }
    return response.json() as Promise<Snapshot>;
  }

  // Opens the stream; returns a close function.
  connectStream(handlers: StreamHandlers): () => void {
    const wsUrl = this.baseUrl.replace(/^http/, 'ws') + '/stream';
    const ws = new this.wsCtor(wsUrl);
    ws.onopen = () => handlers.onOpen?.();
    ws.onclose = () => handlers.onClose?.();
    ws.onerror = () => handlers.onClose?.();
    ws.onmessage = (event: MessageEvent) => {
      try {
        handlers.onMessage(JSON.parse(String(event.data)) as StreamMessage);
      } catch {
        // ignore malformed frames
      }
    };
    return () => ws.close();
  }
}

// Server base URL: ?server=... wins; a served page talks to its own origin;
// a file:// page falls back to the default local port.
export function resolveServerBase(href: string, origin: string): string {
  const url = new URL(href);
  const fromQuery = url.searchParams.get('server');
  if (fromQuery) return fromQuery.replace(/\/+$/, '');
  if (origin.startsWith('http')) return origin;
  return 'http://127.0.0.1:8350';
}
