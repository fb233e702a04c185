/** Server client with latest-wins request cancellation.
 *
 * At most one locus request is in flight: starting a new one aborts the
 * previous, so a fast slider never queues stale work and the newest
 * state always wins.
 */

import {
  ExperimentConfig,
  FamiliesResponse,
  LocusResponse,
  PlaylistsResponse,
  SCHEMA_VERSION,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public messages: string[],
  ) {
    super(messages.join("; "));
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Api {
  private inflight: AbortController | null = null;

  constructor(
    private fetchFn: FetchLike,
    private base = "",
  ) {}

  async families(): Promise<FamiliesResponse> {
    return this.getJson("/api/families") as Promise<FamiliesResponse>;
  }

  async playlists(): Promise<PlaylistsResponse> {
    return this.getJson("/api/playlists") as Promise<PlaylistsResponse>;
  }

  /** POST the config; resolves null when superseded by a newer request. */
  async locus(config: ExperimentConfig): Promise<LocusResponse | null> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let resp: Response;
    try {
      resp = await this.fetchFn(this.base + "/api/locus", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ version: SCHEMA_VERSION, ...config }),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
    if (controller.signal.aborted) return null;
    if (!resp.ok) {
      const detail = await extractDetail(resp);
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as LocusResponse;
  }

  private async getJson(path: string): Promise<unknown> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) {
      throw new ApiError(resp.status, await extractDetail(resp));
    }
    return resp.json();
  }
}

async function extractDetail(resp: Response): Promise<string[]> {
  try {
    const body = (await resp.json()) as { detail?: unknown };
    if (Array.isArray(body.detail)) return body.detail.map(String);
    if (typeof body.detail === "string") return [body.detail];
  } catch {
    // non-JSON error body
  }
  return [`request failed with status ${resp.status}`];
}
