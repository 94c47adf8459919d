/**
 * View model: a pure fold of the event sequence.
 *
 * Replaying a persisted log through `applyEvent` yields the same ViewState
 * as having watched the session live; rendering reads only this state, so
 * the view is a pure function of the events. The fold also powers the
 * playback scrubber (re-fold a prefix of the log).
 */

import type { SessionEvent } from "./api.js";

export type QueueRole = "anchor" | "baseline" | "dynamic";

export interface GridInfo {
  width: number;
  height: number;
  blocked: boolean[][]; // [y][x]
  start: [number, number];
  goal: [number, number];
}

export interface ArmInfo {
  linkLengths: number[];
  jointStep: number;
  obstacles: [number, number, number][];
  base: [number, number];
  goalPose: [number, number];
}

export interface StagnationBanner {
  queue: number;
  metric: number;
  minHState: number[] | null;
}

export class ViewState {
  domain: "grid" | "arm" = "grid";
  grid: GridInfo | null = null;
  arm: ArmInfo | null = null;
  /** cells/configs expanded, keyed by expanding queue */
  expanded = new Map<number, Map<string, number[]>>();
  /** generated but not yet expanded, keyed by generating queue */
  open = new Map<number, Map<string, number[]>>();
  queueRoles = new Map<number, QueueRole>();
  fadedQueues = new Set<number>();
  suspendedQueues = new Set<number>();
  latestPose = new Map<number, number[]>(); // arm: last expanded config per queue
  banner: StagnationBanner | null = null;
  prompt: Record<string, any> | null = null;
  guidance: { queue: number; snapped: number[] } | null = null;
  rejected: { raw: number[]; reason: string } | null = null;
  path: number[][] | null = null;
  cost: number | null = null;
  outcome: string | null = null;
  expansions = 0;
  lastSeq = -1;

  loadScenario(doc: Record<string, any>): void {
    if (doc.domain === "grid") {
      this.domain = "grid";
      const rows = (doc.map as string).split("\n").filter((r) => r.trim().length > 0);
      const height = rows.length;
      const width = rows[0].length;
      const blocked: boolean[][] = [];
      let start: [number, number] = [0, 0];
      let goal: [number, number] = [0, 0];
      for (let y = 0; y < height; y++) {
        const row: boolean[] = [];
        for (let x = 0; x < width; x++) {
          const ch = rows[y][x];
          row.push(ch === "#");
          if (ch === "S") start = [x, y];
          if (ch === "T") goal = [x, y];
        }
        blocked.push(row);
      }
      this.grid = { width, height, blocked, start, goal };
    } else if (doc.domain === "arm") {
      this.domain = "arm";
      const step = doc.joint_step ?? ((doc.joint_step_deg ?? 10) * Math.PI) / 180;
      this.arm = {
        linkLengths: doc.link_lengths,
        jointStep: step,
        obstacles: doc.obstacles ?? [],
        base: doc.base ?? [0, 0],
        goalPose: doc.goal_pose ?? [1, 0],
      };
    } else {
      throw new Error(`unknown scenario domain: ${doc.domain}`);
    }
  }

  private key(config: number[]): string {
    return config.join(",");
  }

  private bucket(map: Map<number, Map<string, number[]>>, queue: number) {
    let m = map.get(queue);
    if (!m) {
      m = new Map();
      map.set(queue, m);
    }
    return m;
  }

  applyEvent(event: SessionEvent): void {
    if (event.seq <= this.lastSeq) return; // replay overlap
    this.lastSeq = event.seq;
    const p = event.payload;
    switch (event.kind) {
      case "expansion": {
        const queue = p.queue as number;
        this.queueRoles.set(queue, p.role);
        this.expansions = p.expansion;
        const k = this.key(p.state);
        for (const open of this.open.values()) open.delete(k);
        this.bucket(this.expanded, queue).set(k, p.state);
        for (const gen of p.generated as number[][]) {
          const gk = this.key(gen);
          let seen = false;
          for (const ex of this.expanded.values()) if (ex.has(gk)) seen = true;
          if (!seen) this.bucket(this.open, queue).set(gk, gen);
        }
        this.latestPose.set(queue, p.state);
        break;
      }
      case "stagnation_entered":
        this.banner = { queue: p.queue, metric: p.metric, minHState: null };
        break;
      case "stagnation_exited":
        if (this.banner?.queue === p.queue) this.banner = null;
        break;
      case "guidance_requested":
        this.prompt = p;
        if (this.banner) this.banner.minHState = p.min_h_state;
        break;
      case "guidance_added":
        this.guidance = { queue: p.queue, snapped: p.snapped };
        this.prompt = null;
        this.rejected = null;
        this.fadedQueues.delete(p.queue);
        break;
      case "guidance_rejected":
        this.rejected = { raw: p.raw, reason: p.reason };
        break;
      case "queue_suspended":
        this.suspendedQueues.add(p.queue);
        break;
      case "queue_resumed":
        this.suspendedQueues.delete(p.queue);
        break;
      case "queue_discarded":
        this.fadedQueues.add(p.queue);
        if (this.guidance?.queue === p.queue) this.guidance = null;
        break;
      case "solution":
        this.path = p.path;
        this.cost = p.cost;
        this.outcome = "solved";
        this.banner = null;
        break;
      case "terminated":
        this.outcome = p.outcome;
        break;
    }
  }
}

export function foldEvents(
  scenario: Record<string, any>,
  events: SessionEvent[],
): ViewState {
  const vs = new ViewState();
  vs.loadScenario(scenario);
  for (const event of events) vs.applyEvent(event);
  return vs;
}
