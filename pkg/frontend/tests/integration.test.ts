// Round trip against a real gateway: spawn the server, drive the console's
// view model through the actual transport, then kill the server and check
// the stale indicator.

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, type ChildProcess } from 'node:child_process';
import WebSocket from 'ws';

import { GatewayClient } from '../src/transport.js';
import { ViewModel } from '../src/viewmodel.js';
import type { StreamMessage } from '../src/types.js';

const PORT = 8461;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error('gateway did not become healthy in time');
}

function client(): GatewayClient {
  return new GatewayClient(BASE, {
    webSocketCtor: WebSocket as unknown as new (url: string) => WebSocket,
  });
}

beforeAll(async () => {
  server = spawn('python3', [
    '-m', 'dualarm.cli', 'serve',
    '--config', 'default',
    '--port', String(PORT),
    '--time-scale', '0',
  ], { stdio: 'ignore' });
  await waitForHealth();
}, 40_000);

afterAll(() => {
  if (server && server.exitCode === null) server.kill('SIGKILL');
});

describe('console round trip against a seeded server', () => {
  it('submitting "pick up the box" shows template, score 1.0 and a pick report', async () => {
    const vm = new ViewModel();
    const gw = client();

    vm.applySnapshot(await gw.fetchState(), Date.now());
    expect(vm.snapshot!.objects.map((o) => o.label)).toContain('box');

    const key = vm.beginCommand('pick up the box');
    const record = await gw.postCommand('pick up the box');
    vm.resolveCommand(key, record);

    const row = vm.historyRows()[0];
    expect(row.status).toBe('ok');
    expect(row.template).toBe('pick up the box');
    expect(row.score).toBe(1.0);
    expect(row.outcome).toMatch(/cm \((left|right) arm/);
    expect(record.report!.error_cm).toBeLessThan(1e-4);
  }, 30_000);

  it('streams snapshots and pushes command records', async () => {
    const vm = new ViewModel();
    const gw = client();
    const seen: StreamMessage[] = [];
    const close = gw.connectStream({
      onMessage(message) {
        seen.push(message);
        if (message.type === 'snapshot') vm.applySnapshot(message.data, Date.now());
        else vm.applyRecord(message.data);
      },
      onClose: () => vm.markDisconnected(),
    });
    try {
      await gw.postCommand('pick up the white cylinder object');
      const deadline = Date.now() + 10_000;
      while (Date.now() < deadline
             && !seen.some((message) => message.type === 'record')) {
        await new Promise((r) => setTimeout(r, 50));
      }
      expect(seen.some((message) => message.type === 'snapshot')).toBe(true);
      const recordMessage = seen.find((message) => message.type === 'record');
      expect(recordMessage).toBeDefined();
      expect(vm.isStale(Date.now())).toBe(false);
    } finally {
      close();
    }
  }, 30_000);

  it('a forced disconnect shows the stale indicator within 1 s', async () => {
    const vm = new ViewModel();
    const gw = client();
    gw.connectStream({
      onMessage(message) {
        if (message.type === 'snapshot') vm.applySnapshot(message.data, Date.now());
      },
      onClose: () => vm.markDisconnected(),
    });
    const deadline = Date.now() + 10_000;
    while (Date.now() < deadline && vm.snapshot === null) {
      await new Promise((r) => setTimeout(r, 50));
    }
    expect(vm.isStale(Date.now())).toBe(false);

    const killedAt = Date.now();
    server.kill('SIGKILL');
    while (Date.now() - killedAt < 1_000 && !vm.isStale(Date.now())) {
      await new Promise((r) => setTimeout(r, 25));
    }
    expect(vm.isStale(Date.now())).toBe(true);
    expect(Date.now() - killedAt).toBeLessThanOrEqual(1_100);
  }, 30_000);
});
