// Pure panel state: the latest snapshot, the connection status, and
// switch intents the operator has issued that no snapshot has echoed yet.
// All rendering derives from viewOf(); there is no logic duplication of
// the PLC program on the client side.

import type { ConnectionStatus, Snapshot } from "./types.js";

export interface PanelState {
  status: ConnectionStatus;
  snapshot: Snapshot | null;
  // switch index -> desired value awaiting confirmation
  pending: Map<number, number>;
}

export interface SwitchView {
  index: number;
  on: boolean; // what to display (pending intent wins over snapshot)
  pending: boolean;
}

export interface PanelView {
  banner: string | null; // disconnected banner text, null when healthy
  switches: SwitchView[];
  inputLamps: boolean[]; // X0-X7
  outputLamps: boolean[]; // Y0-Y5
  linkText: string;
  latencyText: string;
}

export function initialState(): PanelState {
  return { status: "connecting", snapshot: null, pending: new Map() };
}

export function applyStatus(state: PanelState, status: ConnectionStatus): PanelState {
  return { ...state, status };
}

export function applySnapshot(state: PanelState, snap: Snapshot): PanelState {
  const pending = new Map(state.pending);
  for (const [index, wanted] of pending) {
    if (snap.switches[index] === wanted) {
      pending.delete(index);
    }
  }
  return { status: "connected", snapshot: snap, pending };
}

export function requestSwitch(state: PanelState, index: number, on: boolean): PanelState {
  const pending = new Map(state.pending);
  pending.set(index, on ? 1 : 0);
  return { ...state, pending };
}

export function viewOf(state: PanelState): PanelView {
  const snap = state.snapshot;
  const switches: SwitchView[] = [];
  for (let i = 0; i < 8; i++) {
    const pendingValue = state.pending.get(i);
    const settled = snap ? snap.switches[i] : 0;
    switches.push({
      index: i,
      on: (pendingValue ?? settled) === 1,
      pending: pendingValue !== undefined,
    });
  }

  let banner: string | null = null;
  if (state.status === "disconnected") {
    banner = "Service unreachable, retrying";
  } else if (state.status === "connecting") {
    banner = "Connecting to service";
  }

  let linkText = "link: no data";
  let latencyText = "latency: -";
  if (snap) {
    const l = snap.link;
    linkText = `link: ${l.paired ? "paired" : "down"}  sent ${l.sent}  dropped ${l.dropped}  corrupt ${l.corrupt}`;
    if (snap.last_latency_us !== null) {
      latencyText = `latency: ${(snap.last_latency_us / 1000).toFixed(1)} ms`;
    }
  }

  return {
    banner,
    switches,
    inputLamps: (snap ? snap.inputs : new Array(8).fill(0)).map((b) => b === 1),
    outputLamps: (snap ? snap.outputs : new Array(6).fill(0)).map((b) => b === 1),
    linkText,
    latencyText,
  };
}
