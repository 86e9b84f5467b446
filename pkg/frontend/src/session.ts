/**
 * Viewer session: one loaded snapshot plus the local, unshared state
 * around it (camera, selection, pending restyles).
 *
 * Editing never mutates what the server stored.  Overrides accumulate in
 * the local document copy; sharing posts the edited document as a brand
 * new snapshot and hands back the new fragment.
 */

import { ApiError, type ShareReceipt, type SharingClient } from "./api.js";
import { Camera, type Viewport } from "./camera.js";
import { routeFromHash } from "./fragment.js";
import { buildScene, type Scene } from "./scene.js";
import {
  SnapshotFormatError,
  decodeSnapshot,
  overrideIsEmpty,
  type SnapshotDocument,
  type SnapshotIssue,
  type StyleOverride,
} from "./snapshot.js";

export type SessionState =
  | { phase: "import" }
  | { phase: "ready"; session: Session }
  | { phase: "error"; message: string; issues: SnapshotIssue[] };

/** Resolve a location hash to a running session, the import dialog, or
 * an error banner.  Never throws: every failure is a renderable state. */
export async function openFromHash(hash: string, client: SharingClient): Promise<SessionState> {
  const route = routeFromHash(hash);
  if (route.kind === "import") return { phase: "import" };
  try {
    const text = await client.fetchSnapshot(route.id);
    return { phase: "ready", session: new Session(decodeSnapshot(text)) };
  } catch (error) {
    if (error instanceof SnapshotFormatError) {
      return { phase: "error", message: `stored snapshot is invalid: ${error.message}`, issues: error.issues };
    }
    if (error instanceof ApiError) {
      const message =
        error.status === 404 ? "no snapshot with this id" : `sharing server: ${error.message}`;
      return { phase: "error", message, issues: error.issues };
    }
    const detail = error instanceof Error ? error.message : String(error);
    return { phase: "error", message: `could not reach the sharing server: ${detail}`, issues: [] };
  }
}

export class Session {
  readonly document: SnapshotDocument;
  readonly camera = new Camera();
  private selected = new Set<string>();

  constructor(document: SnapshotDocument) {
    this.document = document;
  }

  /** Selected node ids, sorted.  Selection is a subset of the visible
   * set by construction. */
  get selection(): string[] {
    return [...this.selected].sort();
  }

  select(nodeIds: Iterable<string>): void {
    const visible = new Set(this.document.view.visible);
    this.selected = new Set([...nodeIds].filter((id) => visible.has(id)));
  }

  toggle(nodeId: string): void {
    if (this.selected.has(nodeId)) {
      this.selected.delete(nodeId);
      return;
    }
    if (this.document.view.visible.includes(nodeId)) this.selected.add(nodeId);
  }

  clearSelection(): void {
    this.selected.clear();
  }

  /** Merge style fields onto a node's override; fields left undefined
   * keep their current value.  An override that ends up empty is
   * dropped, matching what the encoder would do anyway. */
  setOverride(nodeId: string, patch: StyleOverride): void {
    if (!this.document.nodes.some((node) => node.id === nodeId)) {
      throw new RangeError(`unknown node: ${JSON.stringify(nodeId)}`);
    }
    const merged: StyleOverride = {
      ...this.document.view.overrides.get(nodeId),
      ...definedFields(patch),
    };
    if (overrideIsEmpty(merged)) {
      this.document.view.overrides.delete(nodeId);
    } else {
      this.document.view.overrides.set(nodeId, merged);
    }
  }

  clearOverride(nodeId: string): void {
    this.document.view.overrides.delete(nodeId);
  }

  scene(): Scene {
    return buildScene(this.document);
  }

  fitCamera(viewport: Viewport, margin?: number): void {
    const positions = this.document.view.visible.map(
      (nodeId) => this.document.view.positions.get(nodeId)!,
    );
    this.camera.fit(positions, viewport, margin);
  }

  /** Post the current document (with any local restyles) as a new
   * immutable snapshot. */
  async share(client: SharingClient): Promise<ShareReceipt> {
    return client.share(this.document);
  }
}

function definedFields(patch: StyleOverride): StyleOverride {
  const out: StyleOverride = {};
  if (patch.size !== undefined) out.size = patch.size;
  if (patch.color !== undefined) out.color = patch.color;
  if (patch.shape !== undefined) out.shape = patch.shape;
  if (patch.label !== undefined) out.label = patch.label;
  return out;
}
