// HTTP client for the live service: subscribes to the snapshot event
// stream with exponential-backoff reconnects and posts switch commands.

import { readEventStream } from "./sse.js";
import type { ConnectionStatus, Snapshot } from "./types.js";

const BACKOFF_START_MS = 500;
const BACKOFF_MAX_MS = 8000;

export interface PanelClientOptions {
  baseUrl: string;
  onSnapshot: (snap: Snapshot) => void;
  onStatus: (status: ConnectionStatus) => void;
}

export class PanelClient {
  private readonly baseUrl: string;
  private readonly onSnapshot: (snap: Snapshot) => void;
  private readonly onStatus: (status: ConnectionStatus) => void;
  private abort = new AbortController();
  private stopped = false;

  constructor(options: PanelClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.onSnapshot = options.onSnapshot;
    this.onStatus = options.onStatus;
  }

  /** Start the subscribe/reconnect loop; returns immediately. */
  start(): void {
    void this.loop();
  }

  stop(): void {
    this.stopped = true;
    this.abort.abort();
  }

  async sendSwitch(index: number, on: boolean): Promise<void> {
    const response = await fetch(`${this.baseUrl}/switch`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ index, on }),
    });
    if (!response.ok) {
      const body = await response.text();
      throw new Error(`switch command rejected: ${response.status} ${body}`);
    }
  }

  private async loop(): Promise<void> {
    let backoffMs = BACKOFF_START_MS;
    while (!this.stopped) {
      this.abort = new AbortController();
      try {
        await readEventStream(
          `${this.baseUrl}/events`,
          (payload) => {
            backoffMs = BACKOFF_START_MS;
            this.onStatus("connected");
            this.onSnapshot(JSON.parse(payload) as Snapshot);
          },
          this.abort.signal,
        );
      } catch {
        // fall through to retry
      }
      if (this.stopped) return;
      this.onStatus("disconnected");
      await new Promise((resolve) => setTimeout(resolve, backoffMs));
      backoffMs = Math.min(backoffMs * 2, BACKOFF_MAX_MS);
    }
  }
}
