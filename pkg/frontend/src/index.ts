export {
  SNAPSHOT_VERSION,
  NODE_SHAPES,
  SnapshotFormatError,
  decodeSnapshot,
  encodeSnapshot,
  validateSnapshot,
  overrideIsEmpty,
  isSnapshotId,
  isValidColor,
  isValidSelector,
  isUtcInstant,
  fragmentFor,
  idFromFragment,
} from "./snapshot.js";
export type {
  AttributeValue,
  GlobalStyle,
  NodeShape,
  SnapshotDocument,
  SnapshotEdge,
  SnapshotIssue,
  SnapshotMetadata,
  SnapshotNode,
  SnapshotView,
  StyleOverride,
} from "./snapshot.js";

export { routeFromHash, viewerUrl } from "./fragment.js";
export type { Route } from "./fragment.js";

export { ApiError, SharingClient } from "./api.js";
export type { FetchLike, ServerHealth, ShareReceipt, SharingClientOptions } from "./api.js";

export { Camera, MAX_SCALE, MIN_SCALE } from "./camera.js";
export type { Viewport } from "./camera.js";

export {
  StyleResolver,
  UnknownAttributeError,
  interpolateColor,
  nodeDegrees,
  parseSelector,
} from "./style.js";
export type { ResolvedStyle, Selector } from "./style.js";

export { EDGE_STRIDE, NODE_STRIDE, SHAPE_INDEX, buildScene, colorToUnitRgb } from "./scene.js";
export type { Scene, SceneLabel } from "./scene.js";

export { EmbedMode } from "./embed.js";

export { Session, openFromHash } from "./session.js";
export type { SessionState } from "./session.js";
