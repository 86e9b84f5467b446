/**
 * URL fragment routing.
 *
 * A viewer URL carries the snapshot id in its fragment:
 * `https://viewer.example/#6c0d8aaa-5320-4c81-9618-11ea5e0524f4`.  The
 * fragment never reaches the server in the page request, so shared links
 * work on a purely static host and ids stay out of access logs.
 */

import { fragmentFor, idFromFragment, isSnapshotId } from "./snapshot.js";

export { fragmentFor, idFromFragment, isSnapshotId };

export type Route = { kind: "snapshot"; id: string } | { kind: "import" };

/** Decide what a location hash asks for.  Anything that is not a
 * canonical snapshot id opens the import dialog; it must not be sent to
 * the server as a guess. */
export function routeFromHash(hash: string): Route {
  const id = idFromFragment(hash);
  return id === null ? { kind: "import" } : { kind: "snapshot", id };
}

/** Shareable viewer URL for a stored snapshot: the viewer page with the
 * id as its fragment, replacing any fragment already present. */
export function viewerUrl(pageUrl: string, snapshotId: string): string {
  const cut = pageUrl.indexOf("#");
  const base = cut === -1 ? pageUrl : pageUrl.slice(0, cut);
  return base + fragmentFor(snapshotId);
}
