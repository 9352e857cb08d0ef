/** DOM wiring: fetches the service config, renders challenge rounds, and
 * captures symbol renderings on a canvas with the dotted-trail feedback.
 * All decision logic lives in the imported modules; this file only moves
 * data between them and the page.
 */

import { ServiceClient } from "./api.js";
import { CaptureBuffer } from "./capture.js";
import {
  type AssetManifest, type Challenge, type ServiceConfig, renderChallenge,
} from "./challenge.js";

interface PageState {
  client: ServiceClient;
  config: ServiceConfig;
  manifest: AssetManifest;
  session: string | null;
  challenge: Challenge | null;
  user: string;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function serviceBase(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  return override ?? "";
}

async function loadManifest(): Promise<AssetManifest> {
  try {
    const response = await fetch("assets/manifest.json");
    if (response.status !== 200) return {};
    return (await response.json()) as AssetManifest;
  } catch {
    return {};
  }
}

function drawGrid(state: PageState): void {
  const grid = el<HTMLDivElement>("challenge");
  const legendBox = el<HTMLDivElement>("legend");
  grid.replaceChildren();
  legendBox.replaceChildren();
  if (state.challenge === null) return;
  const screen = renderChallenge(state.config, state.challenge, state.manifest);
  for (const cell of screen.cells) {
    const tile = document.createElement("div");
    tile.className = "cell";
    if (cell.image !== null) {
      const img = document.createElement("img");
      img.src = cell.image;
      img.alt = `object ${cell.index}`;
      tile.appendChild(img);
    } else {
      const glyph = document.createElement("span");
      glyph.className = "glyph";
      const label = state.config.pool[cell.index];
      glyph.textContent = typeof label === "string" ? label : cell.glyph;
      tile.appendChild(glyph);
    }
    const weight = document.createElement("span");
    weight.className = "weight";
    weight.textContent = String(cell.weight);
    tile.appendChild(weight);
    grid.appendChild(tile);
  }
  for (const entry of screen.legend) {
    const item = document.createElement("div");
    item.className = "legend-entry";
    item.textContent = `${entry.value} ↔ ${entry.symbol}`;
    legendBox.appendChild(item);
  }
}

function wireCanvas(buffer: CaptureBuffer): HTMLCanvasElement {
  const canvas = el<HTMLCanvasElement>("pad");
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("canvas 2d context unavailable");

  const sample = (event: PointerEvent) => {
    const rect = canvas.getBoundingClientRect();
    return {
      timeStamp: event.timeStamp,
      x: event.clientX - rect.left,
      y: event.clientY - rect.top,
      // pressure 0 means "not reported" on mouse-like devices
      ...(event.pressure > 0 ? { pressure: event.pressure } : {}),
    };
  };

  const repaint = () => {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#1f2937";
    // Only the sparse trail is echoed on screen; the full-rate events stay
    // in the buffer for upload.
    for (const point of buffer.trail()) {
      ctx.beginPath();
      ctx.arc(point.x, point.y, 2.0, 0, 2 * Math.PI);
      ctx.fill();
    }
  };

  canvas.addEventListener("pointerdown", (event) => {
    canvas.setPointerCapture(event.pointerId);
    buffer.begin(sample(event));
    repaint();
  });
  canvas.addEventListener("pointermove", (event) => {
    buffer.move(sample(event));
    repaint();
  });
  canvas.addEventListener("pointerup", (event) => {
    buffer.end(sample(event));
    repaint();
  });
  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    buffer.clear();
    repaint();
  });
  return canvas;
}

function setStatus(text: string): void {
  el<HTMLParagraphElement>("status").textContent = text;
}

async function startSession(state: PageState): Promise<void> {
  state.user = el<HTMLInputElement>("user").value.trim();
  if (state.user === "") {
    setStatus("enter a user name first");
    return;
  }
  const reply = await state.client.startSession(state.user);
  state.session = reply.session;
  state.challenge = reply.challenge;
  setStatus(`session ${reply.session}: round 1, draw your answer`);
  drawGrid(state);
}

async function submitRendering(state: PageState, buffer: CaptureBuffer): Promise<void> {
  if (state.session === null) {
    setStatus("start a session first");
    return;
  }
  if (buffer.isEmpty) {
    setStatus("nothing drawn yet; draw the symbol and retry");
    return;
  }
  const trace = buffer.serialize({ user: state.user, symbol: null, session: state.session });
  buffer.clear();
  const reply = await state.client.submitRound(state.session, trace);
  if (reply.done) {
    state.session = null;
    state.challenge = null;
    setStatus(`verdict: ${reply.verdict}`);
  } else {
    state.challenge = reply.challenge;
    setStatus(`round ${reply.round + 1}, draw your answer`);
  }
  drawGrid(state);
}

async function boot(): Promise<void> {
  const client = new ServiceClient(serviceBase());
  const [config, manifest] = await Promise.all([client.config(), loadManifest()]);
  const state: PageState = {
    client, config, manifest, session: null, challenge: null, user: "",
  };
  const buffer = new CaptureBuffer();
  wireCanvas(buffer);
  el<HTMLButtonElement>("start").addEventListener("click", () => {
    startSession(state).catch((exc) => setStatus(String(exc)));
  });
  el<HTMLButtonElement>("submit").addEventListener("click", () => {
    submitRendering(state, buffer).catch((exc) => setStatus(String(exc)));
  });
  setStatus(`ready: pool of ${state.config.params.n}, `
    + `${state.config.params.gamma} rounds per session`);
}

boot().catch((exc) => setStatus(`service unreachable: ${String(exc)}`));
