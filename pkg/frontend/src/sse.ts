// Minimal incremental server-sent-events parser. Works over fetch
// streaming in both browsers and Node, so the client and its tests
// share one code path instead of depending on EventSource.

export class SseParser {
  private buffer = "";
  private dataLines: string[] = [];

  /** Feed a decoded text chunk; returns completed event payloads. */
  push(chunk: string): string[] {
    this.buffer += chunk;
    const events: string[] = [];
    let nl: number;
    while ((nl = this.buffer.indexOf("\n")) !== -1) {
      let line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (line.endsWith("\r")) line = line.slice(0, -1);
      if (line === "") {
        if (this.dataLines.length > 0) {
          events.push(this.dataLines.join("\n"));
          this.dataLines = [];
        }
      } else if (line.startsWith("data:")) {
        this.dataLines.push(line.slice(5).replace(/^ /, ""));
      }
      // comment lines (":" prefix) and unknown fields are ignored
    }
    return events;
  }
}

/**
 * Read an SSE endpoint and invoke onEvent for every data payload.
 * Resolves when the stream ends, rejects on network errors or abort.
 */
export async function readEventStream(
  url: string,
  onEvent: (payload: string) => void,
  signal?: AbortSignal,
): Promise<void> {
  const response = await fetch(url, {
    headers: { accept: "text/event-stream" },
    signal,
  });
  if (!response.ok || response.body === null) {
    throw new Error(`event stream request failed: ${response.status}`);
  }
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  const parser = new SseParser();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) return;
    for (const payload of parser.push(decoder.decode(value, { stream: true }))) {
      onEvent(payload);
    }
  }
}
