/**
 * Browser entry point: connect to a session, render its frontier live,
 * and let the user answer guidance requests by clicking the map (grid) or
 * dragging joint sliders (arm). A scrubber replays the event log post-hoc.
 */

import { Api, SessionEvent } from "./api.js";
import { GuidanceFlow } from "./flow.js";
import { ViewState, foldEvents } from "./model.js";
import { Camera, fitCamera, renderArm, renderGrid } from "./render.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

interface AppState {
  api: Api | null;
  sessionId: string | null;
  scenario: Record<string, any> | null;
  events: SessionEvent[];
  view: ViewState | null;
  flow: GuidanceFlow | null;
  camera: Camera | null;
  ghost: number[] | null;
  scrub: number | null; // event index for playback, null = live
  abort: AbortController | null;
}

const app: AppState = {
  api: null, sessionId: null, scenario: null, events: [], view: null,
  flow: null, camera: null, ghost: null, scrub: null, abort: null,
};

function status(text: string, cls = ""): void {
  const el = $("status");
  el.textContent = text;
  el.className = cls;
}

function banner(): void {
  const el = $("banner");
  const vs = app.view;
  if (!vs) {
    el.hidden = true;
    return;
  }
  if (vs.outcome) {
    el.hidden = false;
    el.textContent = vs.outcome === "solved"
      ? `solved: cost ${vs.cost?.toFixed(2)} after ${vs.expansions} expansions`
      : `session ended: ${vs.outcome}`;
    el.className = vs.outcome === "solved" ? "banner ok" : "banner warn";
  } else if (vs.banner) {
    el.hidden = false;
    el.textContent = `queue ${vs.banner.queue} is stagnating` +
      (vs.prompt ? " — click a cell (or pose the arm) to guide it" : "");
    el.className = "banner warn";
  } else {
    el.hidden = true;
  }
}

function redraw(): void {
  const canvas = $("view") as unknown as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx || !app.scenario) return;
  const shown = app.scrub === null
    ? app.view
    : foldEvents(app.scenario, app.events.slice(0, app.scrub));
  if (!shown) return;
  if (!app.camera) app.camera = fitCamera(shown, canvas.width, canvas.height);
  if (shown.domain === "grid") {
    renderGrid(ctx, shown, app.camera, canvas.width, canvas.height);
    if (app.ghost) {
      const cell = app.camera.scale;
      ctx.strokeStyle = "#e6a817";
      ctx.lineWidth = 2;
      ctx.strokeRect(app.camera.offsetX + app.ghost[0] * cell,
                     app.camera.offsetY + app.ghost[1] * cell, cell, cell);
    }
  } else {
    renderArm(ctx, shown, app.camera, canvas.width, canvas.height, app.ghost);
  }
  banner();
  $("seq").textContent = app.scrub === null
    ? `live @ ${app.events.length} events`
    : `replay @ ${app.scrub}/${app.events.length}`;
}

function onEvent(event: SessionEvent): void {
  app.events.push(event);
  app.view?.applyEvent(event);
  const scrubber = $("scrub") as unknown as HTMLInputElement;
  scrubber.max = String(app.events.length);
  if (app.scrub === null) scrubber.value = scrubber.max;
  if (event.kind === "guidance_requested") {
    status("planner asks for guidance", "warn");
    setControls();
  } else if (event.kind === "solution" || event.kind === "terminated") {
    status(`finished: ${app.view?.outcome}`, "ok");
    setControls();
  }
  redraw();
}

function setControls(): void {
  const vs = app.view;
  const awaiting = vs?.prompt != null && !vs.outcome;
  ($("confirm") as unknown as HTMLButtonElement).disabled = !awaiting || !app.flow?.candidate;
  ($("decline") as unknown as HTMLButtonElement).disabled = !awaiting;
  ($("advance") as unknown as HTMLButtonElement).disabled = !!vs?.outcome || awaiting;
  $("sliders").hidden = !(awaiting && vs?.domain === "arm");
}

async function connect(): Promise<void> {
  app.abort?.abort();
  const api = new Api(($("service") as unknown as HTMLInputElement).value);
  const id = ($("session") as unknown as HTMLInputElement).value.trim();
  try {
    const snapshot = await api.getSession(id);
    app.api = api;
    app.sessionId = id;
    app.scenario = snapshot.scenario;
    app.events = [];
    app.view = new ViewState();
    app.view.loadScenario(snapshot.scenario);
    app.flow = new GuidanceFlow(api, id);
    app.camera = null;
    app.scrub = null;
    app.abort = new AbortController();
    buildSliders();
    status(`connected: ${snapshot.state}`);
    setControls();
    redraw();
    api.streamEvents(id, 0, onEvent, app.abort.signal)
      .catch((err) => status(`stream error: ${err.message}`, "err"));
  } catch (err: any) {
    status(`cannot connect: ${err.message}`, "err");
  }
}

async function createDemo(): Promise<void> {
  const api = new Api(($("service") as unknown as HTMLInputElement).value);
  try {
    const doc = JSON.parse(($("scenario") as unknown as HTMLTextAreaElement).value);
    const id = await api.createSession(doc);
    ($("session") as unknown as HTMLInputElement).value = id;
    await connect();
  } catch (err: any) {
    status(`create failed: ${err.message}`, "err");
  }
}

async function advance(): Promise<void> {
  if (!app.api || !app.sessionId) return;
  try {
    const res = await app.api.advance(app.sessionId, 100000);
    status(`advance: ${res.status}`);
  } catch (err: any) {
    status(`advance failed: ${err.message}`, "err");
  }
  setControls();
}

async function propose(configuration: number[]): Promise<void> {
  if (!app.flow) return;
  app.ghost = configuration;
  redraw();
  const verdict = await app.flow.propose(configuration);
  status(verdict.accepted
    ? `candidate valid (snapped to ${JSON.stringify(verdict.snapped)})`
    : `invalid: ${verdict.reason}`, verdict.accepted ? "ok" : "err");
  setControls();
}

async function confirm(): Promise<void> {
  if (!app.flow) return;
  const res = await app.flow.confirm();
  if (res.accepted) {
    app.ghost = null;
    status("guidance accepted");
    await advance();
  } else {
    status(`rejected: ${res.reason}`, "err");
  }
  setControls();
}

function canvasClick(ev: MouseEvent): void {
  if (!app.view || !app.camera || app.view.domain !== "grid") return;
  if (!app.view.prompt) return;
  const canvas = $("view") as unknown as HTMLCanvasElement;
  const rect = canvas.getBoundingClientRect();
  const x = Math.floor((ev.clientX - rect.left - app.camera.offsetX) / app.camera.scale);
  const y = Math.floor((ev.clientY - rect.top - app.camera.offsetY) / app.camera.scale);
  void propose([x, y]);
}

function buildSliders(): void {
  const holder = $("sliders");
  holder.innerHTML = "";
  const arm = app.view?.arm;
  if (!arm) return;
  const values = arm.linkLengths.map(() => 0);
  arm.linkLengths.forEach((_, i) => {
    const label = document.createElement("label");
    label.textContent = `joint ${i + 1}`;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "-180";
    slider.max = "180";
    slider.value = "0";
    slider.addEventListener("input", () => {
      values[i] = (Number(slider.value) * Math.PI) / 180;
      void propose([...values]);
    });
    label.appendChild(slider);
    holder.appendChild(label);
  });
}

function wire(): void {
  $("connect").addEventListener("click", () => void connect());
  $("create").addEventListener("click", () => void createDemo());
  $("advance").addEventListener("click", () => void advance());
  $("confirm").addEventListener("click", () => void confirm());
  $("decline").addEventListener("click", () => void app.flow?.decline().then(() => {
    status("declined");
    setControls();
  }));
  ($("view") as unknown as HTMLCanvasElement).addEventListener("click", canvasClick);
  const scrubber = $("scrub") as unknown as HTMLInputElement;
  scrubber.addEventListener("input", () => {
    const v = Number(scrubber.value);
    app.scrub = v >= app.events.length ? null : v;
    redraw();
  });
  const canvas = $("view") as unknown as HTMLCanvasElement;
  canvas.addEventListener("wheel", (ev) => {
    if (!app.camera) return;
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    app.camera.scale *= factor;
    redraw();
  });
  let dragging: [number, number] | null = null;
  canvas.addEventListener("mousedown", (ev) => (dragging = [ev.clientX, ev.clientY]));
  window.addEventListener("mouseup", () => (dragging = null));
  window.addEventListener("mousemove", (ev) => {
    if (!dragging || !app.camera) return;
    app.camera.offsetX += ev.clientX - dragging[0];
    app.camera.offsetY += ev.clientY - dragging[1];
    dragging = [ev.clientX, ev.clientY];
    redraw();
  });
}

wire();
status("enter a session id and connect, or create the demo session");
