// Wire types for the live service API (schema version 1).

export interface LinkStats {
  paired: boolean;
  sent: number;
  delivered: number;
  dropped: number;
  ok: number;
  stale: number;
  corrupt: number;
}

export interface Snapshot {
  version: number;
  time_us: number;
  switches: number[]; // 8 entries, 0/1
  inputs: number[]; // X0-X7
  outputs: number[]; // Y0-Y5
  link: LinkStats;
  last_latency_us: number | null;
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";
