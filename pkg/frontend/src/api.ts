/** Typed fetch client for the derivation session service.
 *
 * The server is the single source of truth: the client never mutates
 * geometry, it only posts intents and re-renders what comes back.
 * Apply carries the fingerprint of the match list it was chosen from;
 * a 409 means the session moved on and the list must be refetched.
 */

import type { MatchList, SceneDoc, SessionDoc, StateDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** The match list the apply was based on is no longer current. */
export class StaleStateError extends ApiError {
  constructor(message: string) {
    super(409, message);
    this.name = "StaleStateError";
  }
}

async function expect<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    if (response.status === 409) throw new StaleStateError(detail);
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SessionClient {
  constructor(
    readonly baseUrl: string,
    readonly sessionId: string,
  ) {}

  static async create(baseUrl: string, initial: string): Promise<SessionClient> {
    const doc = await expect<SessionDoc>(
      await fetch(`${baseUrl}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ initial }),
      }),
    );
    const client = new SessionClient(baseUrl, doc.id);
    client.lastState = doc.state;
    return client;
  }

  /** State document from the most recent mutating or creating call. */
  lastState: StateDoc | null = null;

  private url(path: string): string {
    return `${this.baseUrl}/sessions/${this.sessionId}${path}`;
  }

  async matches(rule: string): Promise<MatchList> {
    const params = new URLSearchParams({ rule });
    return expect<MatchList>(await fetch(`${this.url("/matches")}?${params}`));
  }

  async apply(rule: string, index: number, state: string): Promise<StateDoc> {
    const doc = await expect<{ state: StateDoc }>(
      await fetch(this.url("/apply"), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ rule, index, state }),
      }),
    );
    this.lastState = doc.state;
    return doc.state;
  }

  async undo(): Promise<StateDoc> {
    const doc = await expect<{ state: StateDoc }>(
      await fetch(this.url("/undo"), { method: "POST" }),
    );
    this.lastState = doc.state;
    return doc.state;
  }

  async scene(units: "lattice" | "feet" = "lattice"): Promise<SceneDoc> {
    const params = new URLSearchParams({ units });
    return expect<SceneDoc>(await fetch(`${this.url("/scene")}?${params}`));
  }

  async obj(mode: "frame" | "cells" = "frame"): Promise<string> {
    const params = new URLSearchParams({ mode });
    const response = await fetch(`${this.url("/obj")}?${params}`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
