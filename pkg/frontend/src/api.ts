/**
 * REST + server-push client for the session service.
 *
 * The event stream is SSE over fetch (works identically in browsers and
 * node 20+), with automatic resubscription from the last seen sequence
 * number so reconnects never drop or duplicate events.
 */

export interface SessionEvent {
  seq: number;
  kind: string;
  payload: Record<string, any>;
}

export interface SessionSnapshot {
  session_id: string;
  state: string;
  expansions: number;
  head_seq: number;
  scenario: Record<string, any>;
  outcome: string | null;
  prompt?: Record<string, any>;
}

export interface GuidanceResponse {
  accepted: boolean;
  reason?: string;
  snapped?: number[];
  distance?: number;
  status?: string;
  preview?: boolean;
}

export class ServiceError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function asJson(resp: Response): Promise<any> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      detail = (await resp.json()).detail ?? detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ServiceError(resp.status, detail);
  }
  return resp.json();
}

export class Api {
  constructor(public base: string) {
    this.base = base.replace(/\/+$/, "");
  }

  async createSession(scenario: object, config?: object): Promise<string> {
    const body = await asJson(
      await fetch(`${this.base}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ scenario, config }),
      }),
    );
    return body.session_id;
  }

  async getSession(id: string): Promise<SessionSnapshot> {
    return asJson(await fetch(`${this.base}/sessions/${id}`));
  }

  async advance(id: string, maxExpansions = 2000): Promise<{ status: string }> {
    return asJson(
      await fetch(`${this.base}/sessions/${id}/advance`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ max_expansions: maxExpansions }),
      }),
    );
  }

  async submitGuidance(id: string, configuration: number[]): Promise<GuidanceResponse> {
    return asJson(
      await fetch(`${this.base}/sessions/${id}/guidance`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ configuration }),
      }),
    );
  }

  async previewGuidance(id: string, configuration: number[]): Promise<GuidanceResponse> {
    return asJson(
      await fetch(`${this.base}/sessions/${id}/guidance`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ configuration, preview: true }),
      }),
    );
  }

  async decline(id: string): Promise<GuidanceResponse> {
    return asJson(
      await fetch(`${this.base}/sessions/${id}/guidance`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ decline: true }),
      }),
    );
  }

  /**
   * Subscribe to the event stream from `fromSeq`; `onEvent` fires once per
   * event in sequence order. Resolves when the session's terminal event has
   * been delivered, reconnecting transparently on transport hiccups.
   */
  async streamEvents(
    id: string,
    fromSeq: number,
    onEvent: (event: SessionEvent) => void,
    signal?: AbortSignal,
  ): Promise<void> {
    let cursor = fromSeq;
    for (;;) {
      let sawTerminal = false;
      try {
        const resp = await fetch(`${this.base}/sessions/${id}/events?from=${cursor}`, {
          signal,
          headers: { accept: "text/event-stream" },
        });
        if (!resp.ok || !resp.body) throw new ServiceError(resp.status, "stream failed");
        sawTerminal = await this.consumeStream(resp.body, (event) => {
          if (event.seq < cursor) return; // duplicate after reconnect
          cursor = event.seq + 1;
          onEvent(event);
        });
      } catch (err) {
        if (signal?.aborted) return;
        if (err instanceof ServiceError && err.status === 404) throw err;
        await new Promise((r) => setTimeout(r, 250));
        continue;
      }
      if (sawTerminal || signal?.aborted) return;
      await new Promise((r) => setTimeout(r, 250)); // server closed early
    }
  }

  private async consumeStream(
    body: ReadableStream<Uint8Array>,
    emit: (event: SessionEvent) => void,
  ): Promise<boolean> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    let terminal = false;
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let split: number;
      while ((split = buffer.indexOf("\n\n")) >= 0) {
        const message = buffer.slice(0, split);
        buffer = buffer.slice(split + 2);
        for (const line of message.split("\n")) {
          if (!line.startsWith("data: ")) continue;
          const obj = JSON.parse(line.slice(6));
          const batch: SessionEvent[] = "batch" in obj ? obj.batch : [obj];
          for (const event of batch) {
            emit(event);
            if (event.kind === "solution" || event.kind === "terminated") {
              terminal = true;
            }
          }
        }
      }
    }
    return terminal;
  }
}
