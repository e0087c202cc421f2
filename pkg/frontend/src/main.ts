// DOM wiring for the operator panel. All display state flows through
// viewOf(); DOM handlers only dispatch pure state updates and HTTP calls.

import { PanelClient } from "./client.js";
import {
  applySnapshot,
  applyStatus,
  initialState,
  requestSwitch,
  viewOf,
  type PanelState,
} from "./state.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8471";

let state: PanelState = initialState();

const banner = document.getElementById("banner") as HTMLDivElement;
const switchRow = document.getElementById("switches") as HTMLDivElement;
const inputRow = document.getElementById("inputs") as HTMLDivElement;
const outputRow = document.getElementById("outputs") as HTMLDivElement;
const linkLine = document.getElementById("link") as HTMLDivElement;
const latencyLine = document.getElementById("latency") as HTMLDivElement;

const switchButtons: HTMLButtonElement[] = [];
for (let i = 0; i < 8; i++) {
  const button = document.createElement("button");
  button.className = "switch";
  button.textContent = `SW${i}`;
  button.addEventListener("click", () => void toggle(i));
  switchRow.appendChild(button);
  switchButtons.push(button);
}

function makeLamps(row: HTMLDivElement, prefix: string, count: number): HTMLSpanElement[] {
  const lamps: HTMLSpanElement[] = [];
  for (let i = 0; i < count; i++) {
    const lamp = document.createElement("span");
    lamp.className = "lamp";
    lamp.textContent = `${prefix}${i}`;
    row.appendChild(lamp);
    lamps.push(lamp);
  }
  return lamps;
}

const inputLamps = makeLamps(inputRow, "X", 8);
const outputLamps = makeLamps(outputRow, "Y", 6);

function render(): void {
  const view = viewOf(state);
  banner.textContent = view.banner ?? "";
  banner.style.display = view.banner ? "block" : "none";
  for (const sw of view.switches) {
    const button = switchButtons[sw.index];
    button.classList.toggle("on", sw.on);
    button.classList.toggle("pending", sw.pending);
  }
  view.inputLamps.forEach((lit, i) => inputLamps[i].classList.toggle("lit", lit));
  view.outputLamps.forEach((lit, i) => outputLamps[i].classList.toggle("lit", lit));
  linkLine.textContent = view.linkText;
  latencyLine.textContent = view.latencyText;
}

async function toggle(index: number): Promise<void> {
  const current = viewOf(state).switches[index].on;
  state = requestSwitch(state, index, !current);
  render();
  try {
    await client.sendSwitch(index, !current);
  } catch {
    // command lost; pending marker stays until a snapshot settles it
  }
}

const client = new PanelClient({
  baseUrl,
  onSnapshot: (snap) => {
    state = applySnapshot(state, snap);
    render();
  },
  onStatus: (status) => {
    state = applyStatus(state, status);
    render();
  },
});

render();
client.start();
