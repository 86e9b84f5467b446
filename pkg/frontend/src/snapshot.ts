/**
 * Snapshot wire format, version 1.
 *
 * A snapshot is one UTF-8 JSON document bundling a full graph with the
 * exploration and visualization state applied to it.  The sharing server
 * admits documents by exactly the rules in this module, so "validates
 * here" and "the server will store it" are the same predicate, and a
 * document fetched from the server always decodes.
 *
 * Readers ignore unknown fields at any level and reject any version
 * other than 1.  JSON null is never an alias for a missing field: a
 * required field present as null is a schema error (label_by is the one
 * value that may itself be null).
 */

export const SNAPSHOT_VERSION = 1;

export type AttributeValue = number | string | boolean;

export type NodeShape = "circle" | "square" | "triangle";

export const NODE_SHAPES: readonly NodeShape[] = ["circle", "square", "triangle"];

export interface SnapshotNode {
  id: string;
  attributes: Map<string, AttributeValue>;
}

export interface SnapshotEdge {
  source: string;
  target: string;
  /** Defaults to 1 when absent on the wire; always > 0. */
  weight: number;
}

export interface StyleOverride {
  size?: number;
  color?: string;
  shape?: NodeShape;
  label?: string;
}

export interface GlobalStyle {
  sizeBy: string;
  sizeRange: [number, number];
  colorBy: string;
  colorScale: string[];
  shape: NodeShape;
  labelBy: string | null;
  labelSize: number;
}

export interface SnapshotMetadata {
  name: string;
  created: string;
  generator: string;
}

export interface SnapshotView {
  /** Sorted, deduplicated; every entry is positioned. */
  visible: string[];
  positions: Map<string, [number, number]>;
  pinned: string[];
  overrides: Map<string, StyleOverride>;
  globalStyle: GlobalStyle;
}

export interface SnapshotDocument {
  metadata: SnapshotMetadata;
  directed: boolean;
  nodes: SnapshotNode[];
  edges: SnapshotEdge[];
  view: SnapshotView;
}

/** Mirrors the server's 400 body entries, so local validation and server
 * rejections render through the same path. */
export interface SnapshotIssue {
  type: "JsonError" | "SchemaError" | "UnsupportedVersion" | "DanglingReference";
  detail: string;
  path?: string;
  position?: number;
}

export class SnapshotFormatError extends Error {
  readonly issues: SnapshotIssue[];

  constructor(issues: SnapshotIssue[]) {
    const first = issues[0];
    super(first ? `${first.path ?? "$"}: ${first.detail}` : "invalid snapshot");
    this.name = "SnapshotFormatError";
    this.issues = issues;
  }
}

// -- ids and URL fragments -------------------------------------------------

const SNAPSHOT_ID =
  /^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$/;

/** True for a canonical lowercase hyphenated UUIDv4. */
export function isSnapshotId(value: unknown): value is string {
  return typeof value === "string" && SNAPSHOT_ID.test(value);
}

export function fragmentFor(snapshotId: string): string {
  if (!isSnapshotId(snapshotId)) {
    throw new RangeError(`not a snapshot id: ${JSON.stringify(snapshotId)}`);
  }
  return `#${snapshotId}`;
}

/** Snapshot id named by a URL fragment, or null if it is not one.
 * Anything that is not an id must never be sent to the server. */
export function idFromFragment(fragment: string): string | null {
  const candidate = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  return isSnapshotId(candidate) ? candidate : null;
}

// -- validation --------------------------------------------------------------

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

const COLOR = /^#[0-9a-fA-F]{6}$/;

export function isValidColor(value: unknown): value is string {
  return typeof value === "string" && COLOR.test(value);
}

export function isValidSelector(value: unknown): value is string {
  if (typeof value !== "string") return false;
  if (value === "pagerank" || value === "degree" || value === "constant") return true;
  return value.startsWith("attribute:") && value.length > "attribute:".length;
}

// Date, any single separator character, optional truncated time, and a
// mandatory zero offset (Z or +-00:00).  Calendar validity is checked by
// the Date constructor afterwards; hour 24 and day rollover (Feb 30
// becomes Mar 1) are excluded by hand because the parser tolerates both.
const CREATED =
  /^(\d{4}-\d{2}-\d{2})(?:.(\d{2})(?::(\d{2})(?::(\d{2})(?:\.\d{3}(?:\d{3})?)?)?)?)?(?:Z|[+-]00:00)$/;

export function isUtcInstant(text: string): boolean {
  const match = CREATED.exec(text);
  if (match === null) return false;
  const [, date = "", hh = "00", mm = "00", ss = "00"] = match;
  if (Number(hh) > 23) return false;
  const time = Date.parse(`${date}T${hh}:${mm}:${ss}Z`);
  if (Number.isNaN(time)) return false;
  const [year, month, day] = date.split("-").map(Number);
  const parsed = new Date(time);
  return (
    parsed.getUTCFullYear() === year &&
    parsed.getUTCMonth() + 1 === month &&
    parsed.getUTCDate() === day
  );
}

class Checker {
  readonly issues: SnapshotIssue[] = [];
  private readonly nodeIds = new Set<string>();

  constructor(private readonly document: unknown) {}

  private fail(type: SnapshotIssue["type"], path: string, detail: string): void {
    this.issues.push({ type, detail, path });
  }

  private require(
    obj: Record<string, unknown>,
    path: string,
    key: string,
    expected: string,
    allowNull = false,
  ): unknown {
    const full = path ? `${path}.${key}` : key;
    if (!(key in obj)) {
      this.fail("SchemaError", full, "missing required field");
      return undefined;
    }
    const value = obj[key];
    // JSON null is not absence; reject it here so the typed checks below
    // can treat null and undefined alike.
    if (value === null && !allowNull) {
      this.fail("SchemaError", full, `expected ${expected}`);
      return undefined;
    }
    return value ?? undefined;
  }

  check(): SnapshotIssue[] {
    const doc = this.document;
    if (!isRecord(doc)) {
      this.fail("SchemaError", "$", "expected a JSON object");
      return this.issues;
    }
    const version = this.require(doc, "", "version", "an integer");
    if (version !== undefined) {
      if (typeof version !== "number" || !Number.isInteger(version)) {
        this.fail("SchemaError", "version", "expected an integer");
      } else if (version !== SNAPSHOT_VERSION) {
        this.fail("UnsupportedVersion", "version", `unsupported snapshot version ${version}`);
      }
    }
    this.checkMetadata(doc);
    this.checkGraph(doc);
    this.checkView(doc);
    return this.issues;
  }

  private checkMetadata(doc: Record<string, unknown>): void {
    const metadata = this.require(doc, "", "metadata", "an object");
    if (metadata === undefined) return;
    if (!isRecord(metadata)) {
      this.fail("SchemaError", "metadata", "expected an object");
      return;
    }
    for (const key of ["name", "created", "generator"]) {
      const value = this.require(metadata, "metadata", key, "a string");
      if (value !== undefined && typeof value !== "string") {
        this.fail("SchemaError", `metadata.${key}`, "expected a string");
      }
    }
    const created = metadata["created"];
    if (typeof created === "string" && !isUtcInstant(created)) {
      this.fail("SchemaError", "metadata.created", "expected an ISO-8601 UTC timestamp");
    }
  }

  private checkGraph(doc: Record<string, unknown>): void {
    const graph = this.require(doc, "", "graph", "an object");
    if (!isRecord(graph)) {
      if (graph !== undefined) this.fail("SchemaError", "graph", "expected an object");
      return;
    }
    const directed = this.require(graph, "graph", "directed", "a boolean");
    if (directed !== undefined && typeof directed !== "boolean") {
      this.fail("SchemaError", "graph.directed", "expected a boolean");
    }
    const nodes = this.require(graph, "graph", "nodes", "an array");
    if (nodes !== undefined && !Array.isArray(nodes)) {
      this.fail("SchemaError", "graph.nodes", "expected an array");
    } else if (Array.isArray(nodes)) {
      nodes.forEach((node, i) => this.checkNode(i, node));
    }
    const edges = this.require(graph, "graph", "edges", "an array");
    if (edges !== undefined && !Array.isArray(edges)) {
      this.fail("SchemaError", "graph.edges", "expected an array");
    } else if (Array.isArray(edges)) {
      edges.forEach((edge, i) => this.checkEdge(i, edge));
    }
  }

  private checkNode(i: number, node: unknown): void {
    const path = `graph.nodes[${i}]`;
    if (!isRecord(node)) {
      this.fail("SchemaError", path, "expected an object");
      return;
    }
    const nodeId = this.require(node, path, "id", "a non-empty string");
    if (nodeId !== undefined) {
      if (typeof nodeId !== "string" || nodeId === "") {
        this.fail("SchemaError", `${path}.id`, "expected a non-empty string");
      } else if (this.nodeIds.has(nodeId)) {
        this.fail("SchemaError", `${path}.id`, `duplicate node id ${JSON.stringify(nodeId)}`);
      } else {
        this.nodeIds.add(nodeId);
      }
    }
    const attributes = this.require(node, path, "attributes", "an object");
    if (attributes === undefined) return;
    if (!isRecord(attributes)) {
      this.fail("SchemaError", `${path}.attributes`, "expected an object");
      return;
    }
    for (const [key, value] of Object.entries(attributes)) {
      if (typeof value === "string" || typeof value === "boolean") continue;
      if (!isFiniteNumber(value)) {
        this.fail(
          "SchemaError",
          `${path}.attributes.${key}`,
          "expected a finite number, string, or boolean",
        );
      }
    }
  }

  private checkEdge(i: number, edge: unknown): void {
    const path = `graph.edges[${i}]`;
    if (!isRecord(edge)) {
      this.fail("SchemaError", path, "expected an object");
      return;
    }
    for (const key of ["source", "target"]) {
      const endpoint = this.require(edge, path, key, "a non-empty string");
      if (endpoint === undefined) continue;
      if (typeof endpoint !== "string" || endpoint === "") {
        this.fail("SchemaError", `${path}.${key}`, "expected a non-empty string");
      } else if (!this.nodeIds.has(endpoint)) {
        this.fail("DanglingReference", `${path}.${key}`, `unknown node ${JSON.stringify(endpoint)}`);
      }
    }
    if ("weight" in edge) {
      const weight = edge["weight"];
      if (!isFiniteNumber(weight) || weight <= 0) {
        this.fail("SchemaError", `${path}.weight`, "expected a positive finite number");
      }
    }
  }

  private checkView(doc: Record<string, unknown>): void {
    const view = this.require(doc, "", "view", "an object");
    if (!isRecord(view)) {
      if (view !== undefined) this.fail("SchemaError", "view", "expected an object");
      return;
    }

    const positions = this.require(view, "view", "positions", "an object");
    const positioned = new Set<string>();
    if (positions !== undefined && !isRecord(positions)) {
      this.fail("SchemaError", "view.positions", "expected an object");
    } else if (isRecord(positions)) {
      for (const [nodeId, value] of Object.entries(positions)) {
        const path = `view.positions.${nodeId}`;
        if (!this.nodeIds.has(nodeId)) {
          this.fail("DanglingReference", path, `unknown node ${JSON.stringify(nodeId)}`);
          continue;
        }
        if (!Array.isArray(value) || value.length !== 2) {
          this.fail("SchemaError", path, "expected 2 elements");
          continue;
        }
        if (!value.every(isFiniteNumber)) {
          this.fail("SchemaError", path, "expected finite numbers");
          continue;
        }
        positioned.add(nodeId);
      }
    }

    for (const key of ["visible", "pinned"] as const) {
      const entries = this.require(view, "view", key, "an array");
      if (entries !== undefined && !Array.isArray(entries)) {
        this.fail("SchemaError", `view.${key}`, "expected an array");
      } else if (Array.isArray(entries)) {
        entries.forEach((nodeId, i) => {
          const path = `view.${key}[${i}]`;
          if (typeof nodeId !== "string") {
            this.fail("SchemaError", path, "expected a string");
          } else if (!this.nodeIds.has(nodeId)) {
            this.fail("DanglingReference", path, `unknown node ${JSON.stringify(nodeId)}`);
          } else if (!positioned.has(nodeId)) {
            this.fail("SchemaError", path, `${key} node ${JSON.stringify(nodeId)} has no position`);
          }
        });
      }
    }

    const overrides = this.require(view, "view", "overrides", "an object");
    if (overrides !== undefined && !isRecord(overrides)) {
      this.fail("SchemaError", "view.overrides", "expected an object");
    } else if (isRecord(overrides)) {
      for (const [nodeId, value] of Object.entries(overrides)) {
        this.checkOverride(nodeId, value);
      }
    }

    const style = this.require(view, "view", "global_style", "an object");
    if (style !== undefined && !isRecord(style)) {
      this.fail("SchemaError", "view.global_style", "expected an object");
    } else if (isRecord(style)) {
      this.checkStyle(style);
    }
  }

  private checkOverride(nodeId: string, value: unknown): void {
    const path = `view.overrides.${nodeId}`;
    if (!this.nodeIds.has(nodeId)) {
      this.fail("DanglingReference", path, `unknown node ${JSON.stringify(nodeId)}`);
      return;
    }
    if (!isRecord(value)) {
      this.fail("SchemaError", path, "expected an object");
      return;
    }
    if ("size" in value && (!isFiniteNumber(value["size"]) || value["size"] <= 0)) {
      this.fail("SchemaError", `${path}.size`, "expected a positive finite number");
    }
    if ("color" in value && !isValidColor(value["color"])) {
      this.fail("SchemaError", `${path}.color`, "expected a #rrggbb color");
    }
    if ("shape" in value && !NODE_SHAPES.includes(value["shape"] as NodeShape)) {
      this.fail("SchemaError", `${path}.shape`, `expected one of ${NODE_SHAPES.join(", ")}`);
    }
    if ("label" in value && typeof value["label"] !== "string") {
      this.fail("SchemaError", `${path}.label`, "expected a string");
    }
  }

  private checkStyle(style: Record<string, unknown>): void {
    const base = "view.global_style";
    for (const key of ["size_by", "color_by"] as const) {
      const selector = this.require(style, base, key, "a selector");
      if (selector !== undefined && !isValidSelector(selector)) {
        this.fail("SchemaError", `${base}.${key}`, "invalid selector");
      }
    }
    const sizeRange = this.require(style, base, "size_range", "an array");
    if (sizeRange !== undefined) {
      const ok =
        Array.isArray(sizeRange) &&
        sizeRange.length === 2 &&
        sizeRange.every(isFiniteNumber) &&
        0 < (sizeRange[0] as number) &&
        (sizeRange[0] as number) <= (sizeRange[1] as number);
      if (!ok) {
        this.fail("SchemaError", `${base}.size_range`, "expected [min, max] with 0 < min <= max");
      }
    }
    const scale = this.require(style, base, "color_scale", "an array");
    if (scale !== undefined) {
      const ok = Array.isArray(scale) && scale.length >= 1 && scale.every(isValidColor);
      if (!ok) {
        this.fail("SchemaError", `${base}.color_scale`, "expected a non-empty array of #rrggbb colors");
      }
    }
    const shape = this.require(style, base, "shape", "a string");
    if (shape !== undefined && !NODE_SHAPES.includes(shape as NodeShape)) {
      this.fail("SchemaError", `${base}.shape`, `expected one of ${NODE_SHAPES.join(", ")}`);
    }
    const labelBy = this.require(style, base, "label_by", "a selector or null", true);
    if (labelBy !== undefined && !isValidSelector(labelBy)) {
      this.fail("SchemaError", `${base}.label_by`, "expected a selector or null");
    }
    const labelSize = this.require(style, base, "label_size", "a number");
    if (labelSize !== undefined && (!isFiniteNumber(labelSize) || labelSize <= 0)) {
      this.fail("SchemaError", `${base}.label_size`, "expected a positive finite number");
    }
  }
}

function parseJson(text: string): { value?: unknown; issue?: SnapshotIssue } {
  try {
    return { value: JSON.parse(text) };
  } catch (error) {
    const detail = error instanceof Error ? error.message : String(error);
    const at = /position (\d+)/.exec(detail);
    return {
      issue: {
        type: "JsonError",
        detail,
        position: at ? Number(at[1]) : 0,
      },
    };
  }
}

/** Every structural problem in the document; empty means valid.
 * Accepts exactly the inputs decodeSnapshot accepts. */
export function validateSnapshot(text: string): SnapshotIssue[] {
  const { value, issue } = parseJson(text);
  if (issue) return [issue];
  return new Checker(value).check();
}

// -- decoding ----------------------------------------------------------------

// Python's sorted() orders strings by code point; the default JS sort is
// by UTF-16 code unit, which disagrees beyond the basic plane.  Matching
// the engine keeps re-encoded documents byte-comparable.
function codePointCompare(a: string, b: string): number {
  if (a === b) return 0;
  const left = [...a];
  const right = [...b];
  const n = Math.min(left.length, right.length);
  for (let i = 0; i < n; i += 1) {
    const d = (left[i] as string).codePointAt(0)! - (right[i] as string).codePointAt(0)!;
    if (d !== 0) return d;
  }
  return left.length - right.length;
}

function sortedUnique(ids: Iterable<string>): string[] {
  return [...new Set(ids)].sort(codePointCompare);
}

export function overrideIsEmpty(override: StyleOverride): boolean {
  return (
    override.size === undefined &&
    override.color === undefined &&
    override.shape === undefined &&
    override.label === undefined
  );
}

/** Parse and validate a snapshot document.  Unknown fields are ignored. */
export function decodeSnapshot(text: string): SnapshotDocument {
  const { value, issue } = parseJson(text);
  if (issue) throw new SnapshotFormatError([issue]);
  const issues = new Checker(value).check();
  if (issues.length > 0) throw new SnapshotFormatError(issues);

  const doc = value as Record<string, unknown>;
  const graphObj = doc["graph"] as Record<string, unknown>;
  const nodes = (graphObj["nodes"] as Record<string, unknown>[]).map((node) => ({
    id: node["id"] as string,
    attributes: new Map(Object.entries(node["attributes"] as Record<string, AttributeValue>)),
  }));
  const edges = (graphObj["edges"] as Record<string, unknown>[]).map((edge) => ({
    source: edge["source"] as string,
    target: edge["target"] as string,
    weight: (edge["weight"] as number | undefined) ?? 1,
  }));

  const viewObj = doc["view"] as Record<string, unknown>;
  const styleObj = viewObj["global_style"] as Record<string, unknown>;
  const sizeRange = styleObj["size_range"] as [number, number];
  const globalStyle: GlobalStyle = {
    sizeBy: styleObj["size_by"] as string,
    sizeRange: [sizeRange[0], sizeRange[1]],
    colorBy: styleObj["color_by"] as string,
    colorScale: [...(styleObj["color_scale"] as string[])],
    shape: styleObj["shape"] as NodeShape,
    labelBy: (styleObj["label_by"] as string | null | undefined) ?? null,
    labelSize: styleObj["label_size"] as number,
  };

  const overrides = new Map<string, StyleOverride>();
  for (const [nodeId, raw] of Object.entries(viewObj["overrides"] as Record<string, unknown>)) {
    const o = raw as Record<string, unknown>;
    const override: StyleOverride = {};
    if ("size" in o) override.size = o["size"] as number;
    if ("color" in o) override.color = o["color"] as string;
    if ("shape" in o) override.shape = o["shape"] as NodeShape;
    if ("label" in o) override.label = o["label"] as string;
    overrides.set(nodeId, override);
  }

  const positions = new Map<string, [number, number]>();
  for (const [nodeId, pair] of Object.entries(viewObj["positions"] as Record<string, unknown>)) {
    const [x, y] = pair as [number, number];
    positions.set(nodeId, [x, y]);
  }

  const metadataObj = doc["metadata"] as Record<string, unknown>;
  return {
    metadata: {
      name: metadataObj["name"] as string,
      created: metadataObj["created"] as string,
      generator: metadataObj["generator"] as string,
    },
    directed: graphObj["directed"] as boolean,
    nodes,
    edges,
    view: {
      visible: sortedUnique(viewObj["visible"] as string[]),
      positions,
      pinned: sortedUnique(viewObj["pinned"] as string[]),
      overrides,
      globalStyle,
    },
  };
}

// -- encoding ----------------------------------------------------------------

function checkConsistency(doc: SnapshotDocument): void {
  const known = new Set(doc.nodes.map((n) => n.id));
  for (const nodeId of doc.view.visible) {
    if (!known.has(nodeId)) throw new Error(`visible node ${JSON.stringify(nodeId)} is not in the graph`);
    if (!doc.view.positions.has(nodeId)) {
      throw new Error(`visible node ${JSON.stringify(nodeId)} has no position`);
    }
  }
  for (const [nodeId, [x, y]] of doc.view.positions) {
    if (!known.has(nodeId)) throw new Error(`position for unknown node ${JSON.stringify(nodeId)}`);
    if (!Number.isFinite(x) || !Number.isFinite(y)) {
      throw new Error(`non-finite position for node ${JSON.stringify(nodeId)}`);
    }
  }
  for (const nodeId of doc.view.pinned) {
    if (!doc.view.positions.has(nodeId)) {
      throw new Error(`pinned node ${JSON.stringify(nodeId)} has no position`);
    }
  }
  for (const nodeId of doc.view.overrides.keys()) {
    if (!known.has(nodeId)) throw new Error(`override for unknown node ${JSON.stringify(nodeId)}`);
  }
}

function overrideObject(override: StyleOverride): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  if (override.size !== undefined) out["size"] = override.size;
  if (override.color !== undefined) out["color"] = override.color;
  if (override.shape !== undefined) out["shape"] = override.shape;
  if (override.label !== undefined) out["label"] = override.label;
  return out;
}

function sortedMapEntries<V>(map: Map<string, V>): [string, V][] {
  return [...map.entries()].sort((a, b) => codePointCompare(a[0], b[0]));
}

/**
 * Serialize to canonical JSON: fixed key order, construction order for
 * nodes and edges, sorted id collections and attribute keys, no
 * insignificant whitespace.  Output from the same document is
 * byte-stable, which is what makes share/dedupe comparisons meaningful.
 */
export function encodeSnapshot(doc: SnapshotDocument): string {
  checkConsistency(doc);
  const style = doc.view.globalStyle;
  const document = {
    version: SNAPSHOT_VERSION,
    metadata: {
      name: doc.metadata.name,
      created: doc.metadata.created,
      generator: doc.metadata.generator,
    },
    graph: {
      directed: doc.directed,
      nodes: doc.nodes.map((node) => ({
        id: node.id,
        attributes: Object.fromEntries(sortedMapEntries(node.attributes)),
      })),
      edges: doc.edges.map((edge) => ({
        source: edge.source,
        target: edge.target,
        weight: edge.weight,
      })),
    },
    view: {
      visible: sortedUnique(doc.view.visible),
      positions: Object.fromEntries(sortedMapEntries(doc.view.positions)),
      pinned: sortedUnique(doc.view.pinned),
      overrides: Object.fromEntries(
        sortedMapEntries(doc.view.overrides)
          .filter(([, override]) => !overrideIsEmpty(override))
          .map(([nodeId, override]) => [nodeId, overrideObject(override)]),
      ),
      global_style: {
        size_by: style.sizeBy,
        size_range: style.sizeRange,
        color_by: style.colorBy,
        color_scale: style.colorScale,
        shape: style.shape,
        label_by: style.labelBy,
        label_size: style.labelSize,
      },
    },
  };
  return JSON.stringify(document);
}
