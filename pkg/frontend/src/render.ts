// 2D schematic of the robot: two orthographic projections drawn from the
// server-computed link positions (no kinematics on the client).

import type { Side, Snapshot } from './types.js';

export type Plane = 'side' | 'top';

const ARM_COLORS: Record<Side, string> = { left: '#2f7ed8', right: '#d88a2f' };
const SIDES: Side[] = ['left', 'right'];

interface Viewport {
  // world ranges mapped onto the canvas, meters
  h: [number, number];
  v: [number, number];
  hIndex: 0 | 1 | 2;
  vIndex: 0 | 1 | 2;
  hLabel: string;
  vLabel: string;
}

const VIEWPORTS: Record<Plane, Viewport> = {
  side: { h: [-0.25, 0.95], v: [-0.55, 0.45], hIndex: 0, vIndex: 2, hLabel: 'x', vLabel: 'z' },
  top: { h: [-0.25, 0.95], v: [-0.60, 0.60], hIndex: 0, vIndex: 1, hLabel: 'x', vLabel: 'y' },
};

function mapper(view: Viewport, width: number, height: number) {
  return (point: [number, number, number]): [number, number] => {
    const hSpan = view.h[1] - view.h[0];
    const vSpan = view.v[1] - view.v[0];
    const x = ((point[view.hIndex] - view.h[0]) / hSpan) * width;
    const y = height - ((point[view.vIndex] - view.v[0]) / vSpan) * height;
    return [x, y];
  };
}

export function drawScene(ctx: CanvasRenderingContext2D, snapshot: Snapshot,
                          plane: Plane): void {
  const { width, height } = ctx.canvas;
  const view = VIEWPORTS[plane];
  const toCanvas = mapper(view, width, height);

  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = '#fafafa';
  ctx.fillRect(0, 0, width, height);

  // axes through the robot origin
  ctx.strokeStyle = '#ddd';
  ctx.lineWidth = 1;
  const [ox, oy] = toCanvas([0, 0, 0]);
  ctx.beginPath();
  ctx.moveTo(0, oy); ctx.lineTo(width, oy);
  ctx.moveTo(ox, 0); ctx.lineTo(ox, height);
  ctx.stroke();
  ctx.fillStyle = '#999';
  ctx.font = '11px sans-serif';
  ctx.fillText(`${view.hLabel} →`, width - 28, oy - 6);
  ctx.fillText(view.vLabel, ox + 6, 12);

  for (const side of SIDES) {
    const arm = snapshot.arms[side];
    ctx.strokeStyle = ARM_COLORS[side];
    ctx.lineWidth = 3;
    ctx.beginPath();
    arm.links.forEach((p, i) => {
      const [x, y] = toCanvas(p);
      if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    });
    ctx.stroke();
    // joints
    ctx.fillStyle = ARM_COLORS[side];
    for (const p of arm.links) {
      const [x, y] = toCanvas(p);
      ctx.beginPath();
      ctx.arc(x, y, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
    // gripper marker: open ring / closed dot at the tool tip
    const [tx, ty] = toCanvas(arm.tool);
    ctx.beginPath();
    ctx.arc(tx, ty, 6, 0, 2 * Math.PI);
    if (arm.gripper === 'closed') ctx.fill(); else ctx.stroke();
  }

  for (const obj of snapshot.objects) {
    const [x, y] = toCanvas(obj.position);
    ctx.fillStyle = obj.held_by ? '#b03030' : '#3a8f3a';
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = '#333';
    ctx.fillText(obj.label, x + 8, y + 4);
  }
}
