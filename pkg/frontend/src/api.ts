/**
 * Client for the sharing server HTTP API.
 *
 * POST /api/v1/snapshots      store a snapshot, 201 with {id, url_fragment}
 * GET  /api/v1/snapshots/{id} stored bytes, verbatim and immutable
 * GET  /api/v1/health         {status, snapshots}
 *
 * Snapshots are immutable; updating a shared view means posting a new
 * snapshot and sharing the new URL.  The fetch implementation is
 * injectable so the client is testable without a network.
 */

import {
  decodeSnapshot,
  encodeSnapshot,
  isSnapshotId,
  type SnapshotDocument,
  type SnapshotIssue,
} from "./snapshot.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ShareReceipt {
  id: string;
  urlFragment: string;
}

export interface ServerHealth {
  status: string;
  snapshots: number;
}

/** A non-2xx server response.  For 400 the server names every problem it
 * found; those entries are shaped exactly like local validation issues. */
export class ApiError extends Error {
  readonly status: number;
  readonly issues: SnapshotIssue[];

  constructor(status: number, message: string, issues: SnapshotIssue[] = []) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.issues = issues;
  }
}

export interface SharingClientOptions {
  fetch?: FetchLike;
  /** Sent as `Authorization: Bearer <token>` on writes; reads stay open. */
  writeToken?: string;
}

export class SharingClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private readonly writeToken?: string;

  constructor(baseUrl: string, options: SharingClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = options.fetch ?? ((url, init) => fetch(url, init));
    this.writeToken = options.writeToken;
  }

  snapshotUrl(snapshotId: string): string {
    return `${this.baseUrl}/api/v1/snapshots/${snapshotId}`;
  }

  /** Stored document text, byte-for-byte as the server keeps it. */
  async fetchSnapshot(snapshotId: string): Promise<string> {
    if (!isSnapshotId(snapshotId)) {
      throw new RangeError(`not a snapshot id: ${JSON.stringify(snapshotId)}`);
    }
    const response = await this.fetchImpl(this.snapshotUrl(snapshotId));
    if (!response.ok) throw await toApiError(response);
    return response.text();
  }

  async fetchDocument(snapshotId: string): Promise<SnapshotDocument> {
    return decodeSnapshot(await this.fetchSnapshot(snapshotId));
  }

  /** Store a snapshot and get back its id and shareable fragment. */
  async share(snapshot: SnapshotDocument | string): Promise<ShareReceipt> {
    const body = typeof snapshot === "string" ? snapshot : encodeSnapshot(snapshot);
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.writeToken !== undefined) {
      headers["Authorization"] = `Bearer ${this.writeToken}`;
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/snapshots`, {
      method: "POST",
      headers,
      body,
    });
    if (!response.ok) throw await toApiError(response);
    const receipt = (await response.json()) as { id: string; url_fragment: string };
    return { id: receipt.id, urlFragment: receipt.url_fragment };
  }

  async health(): Promise<ServerHealth> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/health`);
    if (!response.ok) throw await toApiError(response);
    return (await response.json()) as ServerHealth;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let issues: SnapshotIssue[] = [];
  try {
    const body = (await response.json()) as { errors?: SnapshotIssue[] };
    if (Array.isArray(body.errors)) issues = body.errors;
  } catch {
    // non-JSON error body; the status line has to carry the story
  }
  const detail = issues[0] ? `: ${issues[0].detail}` : "";
  return new ApiError(response.status, `HTTP ${response.status}${detail}`, issues);
}
