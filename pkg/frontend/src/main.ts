import { GatewayClient, resolveServerBase } from './transport.js';
import { ViewModel } from './viewmodel.js';
import { drawScene } from './render.js';
import type { StreamMessage } from './types.js';

const base = resolveServerBase(window.location.href, window.location.origin);
const client = new GatewayClient(base);
const vm = new ViewModel();

const sideCanvas = document.getElementById('side-view') as HTMLCanvasElement;
const topCanvas = document.getElementById('top-view') as HTMLCanvasElement;
const statusEl = document.getElementById('status') as HTMLSpanElement;
const serverEl = document.getElementById('server') as HTMLSpanElement;
const historyEl = document.getElementById('history') as HTMLTableSectionElement;
const form = document.getElementById('command-form') as HTMLFormElement;
const input = document.getElementById('command-input') as HTMLInputElement;

serverEl.textContent = base;

function connect(): void {
  client.connectStream({
    onMessage(message: StreamMessage) {
      if (message.type === 'snapshot') {
        vm.applySnapshot(message.data, Date.now());
      } else {
        vm.applyRecord(message.data);
      }
    },
    onClose() {
      vm.markDisconnected();
      setTimeout(connect, 1000); // keep retrying; the badge shows stale
    },
  });
}

// initial state so a reload reconstructs the full view before the first push
client.fetchState()
  .then((snap) => vm.applySnapshot(snap, Date.now()))
  .catch(() => vm.markDisconnected());
connect();

form.addEventListener('submit', (event) => {
  event.preventDefault();
  const text = input.value.trim();
  if (!text) return;
  const key = vm.beginCommand(text);
  input.value = text; // preserved until the command resolves
  client.postCommand(text)
    .then((record) => {
      vm.resolveCommand(key, record);
      input.value = '';
    })
    .catch((err: Error) => vm.failCommand(key, `transport: ${err.message}`));
});

function esc(text: string): string {
  const div = document.createElement('div');
  div.textContent = text;
  return div.innerHTML;
}

function renderHistory(): void {
  historyEl.innerHTML = vm.historyRows().slice(0, 50).map((row) => `
    <tr class="${row.status}">
      <td>${row.id ?? ''}</td>
      <td>${esc(row.utterance)}</td>
      <td>${row.template ? esc(row.template) : ''}</td>
      <td>${row.score !== null ? row.score.toFixed(3) : ''}</td>
      <td>${esc(row.outcome)}</td>
    </tr>`).join('');
}

setInterval(() => {
  const stale = vm.isStale(Date.now());
  statusEl.textContent = stale ? 'STALE' : 'LIVE';
  statusEl.className = stale ? 'stale' : 'live';
  if (vm.snapshot) {
    drawScene(sideCanvas.getContext('2d')!, vm.snapshot, 'side');
    drawScene(topCanvas.getContext('2d')!, vm.snapshot, 'top');
  }
  renderHistory();
}, 100);
