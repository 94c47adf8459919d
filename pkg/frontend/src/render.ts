/**
 * Canvas rendering: per-queue frontier coloring (expanded dark, open light),
 * start/goal/guidance markers, the solution polyline, and the arm linkage.
 */

import type { ViewState } from "./model.js";

export const QUEUE_HUES: Record<string, { dark: string; light: string }> = {
  anchor: { dark: "#5c6370", light: "#c9cdd4" },
  baseline: { dark: "#1d7a3a", light: "#a9dfbc" },
  dynamic: { dark: "#b3342c", light: "#f2b8b3" },
};

export interface Camera {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function fitCamera(vs: ViewState, width: number, height: number): Camera {
  if (vs.domain === "grid" && vs.grid) {
    const scale = Math.min(width / vs.grid.width, height / vs.grid.height);
    return { scale, offsetX: 0, offsetY: 0 };
  }
  return { scale: Math.min(width, height) / 6, offsetX: width / 2, offsetY: height / 2 };
}

function hueFor(vs: ViewState, queue: number) {
  const role = vs.queueRoles.get(queue) ?? "baseline";
  return QUEUE_HUES[role] ?? QUEUE_HUES.baseline;
}

export function renderGrid(
  ctx: CanvasRenderingContext2D,
  vs: ViewState,
  cam: Camera,
  width: number,
  height: number,
): void {
  const grid = vs.grid;
  if (!grid) return;
  const cell = cam.scale;
  const px = (x: number) => cam.offsetX + x * cell;
  const py = (y: number) => cam.offsetY + y * cell;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(px(0), py(0), grid.width * cell, grid.height * cell);

  const paint = (
    cells: Map<number, Map<string, number[]>>,
    pick: (hue: { dark: string; light: string }) => string,
  ) => {
    for (const [queue, bucket] of cells) {
      ctx.fillStyle = pick(hueFor(vs, queue));
      ctx.globalAlpha = vs.fadedQueues.has(queue) ? 0.25 : 1.0;
      for (const [, c] of bucket) {
        ctx.fillRect(px(c[0]), py(c[1]), cell, cell);
      }
    }
    ctx.globalAlpha = 1.0;
  };
  paint(vs.open, (h) => h.light);
  paint(vs.expanded, (h) => h.dark);

  ctx.fillStyle = "#222";
  for (let y = 0; y < grid.height; y++) {
    for (let x = 0; x < grid.width; x++) {
      if (grid.blocked[y][x]) ctx.fillRect(px(x), py(y), cell, cell);
    }
  }

  const marker = (x: number, y: number, color: string, r = Math.max(3, cell * 0.8)) => {
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.arc(px(x) + cell / 2, py(y) + cell / 2, r / 2, 0, Math.PI * 2);
    ctx.fill();
  };
  marker(grid.start[0], grid.start[1], "#2445c7");
  marker(grid.goal[0], grid.goal[1], "#7b1fa2");
  if (vs.guidance) marker(vs.guidance.snapped[0], vs.guidance.snapped[1], "#e6a817");
  if (vs.banner?.minHState) {
    const [x, y] = vs.banner.minHState;
    ctx.strokeStyle = "#e6a817";
    ctx.lineWidth = 2;
    ctx.strokeRect(px(x) - 2, py(y) - 2, cell + 4, cell + 4);
  }

  if (vs.path) {
    ctx.strokeStyle = "#111";
    ctx.lineWidth = Math.max(1.5, cell * 0.3);
    ctx.beginPath();
    vs.path.forEach(([x, y], i) => {
      const cx = px(x) + cell / 2;
      const cy = py(y) + cell / 2;
      if (i === 0) ctx.moveTo(cx, cy);
      else ctx.lineTo(cx, cy);
    });
    ctx.stroke();
  }
}

export function armPoints(
  base: [number, number],
  linkLengths: number[],
  angles: number[],
): [number, number][] {
  const pts: [number, number][] = [base];
  let heading = 0;
  let [x, y] = base;
  angles.forEach((theta, i) => {
    heading += theta;
    x += linkLengths[i] * Math.cos(heading);
    y += linkLengths[i] * Math.sin(heading);
    pts.push([x, y]);
  });
  return pts;
}

export function renderArm(
  ctx: CanvasRenderingContext2D,
  vs: ViewState,
  cam: Camera,
  width: number,
  height: number,
  ghost: number[] | null,
): void {
  const arm = vs.arm;
  if (!arm) return;
  const px = (x: number) => cam.offsetX + x * cam.scale;
  const py = (y: number) => cam.offsetY - y * cam.scale;
  ctx.clearRect(0, 0, width, height);

  ctx.fillStyle = "#22222226";
  for (const [cx, cy, r] of arm.obstacles) {
    ctx.beginPath();
    ctx.arc(px(cx), py(cy), r * cam.scale, 0, Math.PI * 2);
    ctx.fill();
    ctx.strokeStyle = "#222";
    ctx.stroke();
  }

  // end-effector trails, per queue
  for (const [queue, bucket] of vs.expanded) {
    ctx.fillStyle = hueFor(vs, queue).light;
    ctx.globalAlpha = vs.fadedQueues.has(queue) ? 0.15 : 0.6;
    for (const [, config] of bucket) {
      const pts = armPoints(arm.base, arm.linkLengths, config);
      const [ex, ey] = pts[pts.length - 1];
      ctx.fillRect(px(ex) - 1.5, py(ey) - 1.5, 3, 3);
    }
  }
  ctx.globalAlpha = 1.0;

  const drawArm = (angles: number[], color: string, widthPx: number, alpha = 1) => {
    const pts = armPoints(arm.base, arm.linkLengths, angles);
    ctx.strokeStyle = color;
    ctx.lineWidth = widthPx;
    ctx.globalAlpha = alpha;
    ctx.beginPath();
    pts.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(px(x), py(y)) : ctx.lineTo(px(x), py(y))));
    ctx.stroke();
    ctx.globalAlpha = 1.0;
    ctx.fillStyle = color;
    for (const [x, y] of pts) {
      ctx.beginPath();
      ctx.arc(px(x), py(y), widthPx + 1, 0, Math.PI * 2);
      ctx.fill();
    }
  };

  for (const [queue, pose] of vs.latestPose) {
    drawArm(pose, hueFor(vs, queue).dark, 3, vs.fadedQueues.has(queue) ? 0.25 : 0.9);
  }
  if (vs.path) drawArm(vs.path[vs.path.length - 1], "#111", 4);
  if (ghost) drawArm(ghost, "#e6a817", 2, 0.9);

  ctx.strokeStyle = "#7b1fa2";
  ctx.lineWidth = 2;
  const [gx, gy] = arm.goalPose;
  ctx.beginPath();
  ctx.moveTo(px(gx) - 6, py(gy));
  ctx.lineTo(px(gx) + 6, py(gy));
  ctx.moveTo(px(gx), py(gy) - 6);
  ctx.lineTo(px(gx), py(gy) + 6);
  ctx.stroke();
}
