/**
 * Node style resolution: the document's global mapping evaluated per
 * node, with per-node overrides replacing individual fields.
 *
 * The math mirrors the engine so a shared view renders the same on both
 * ends, with one deliberate exception: pagerank scores are not persisted
 * in snapshots and this client does not reimplement the analytics, so
 * pagerank-driven size and color sit at the midpoint of their range and
 * pagerank labels render empty.  Degree needs no engine: it is counted
 * off the document's own edge list.
 */

import type {
  AttributeValue,
  NodeShape,
  SnapshotDocument,
  StyleOverride,
} from "./snapshot.js";

export interface ResolvedStyle {
  size: number;
  color: string;
  shape: NodeShape;
  label: string;
}

export type Selector =
  | { kind: "pagerank" }
  | { kind: "degree" }
  | { kind: "constant" }
  | { kind: "attribute"; name: string };

export function parseSelector(text: string): Selector {
  if (text === "pagerank" || text === "degree" || text === "constant") {
    return { kind: text };
  }
  if (text.startsWith("attribute:") && text.length > "attribute:".length) {
    return { kind: "attribute", name: text.slice("attribute:".length) };
  }
  throw new RangeError(`invalid selector: ${JSON.stringify(text)}`);
}

export class UnknownAttributeError extends Error {
  constructor(name: string) {
    super(`unknown attribute: ${JSON.stringify(name)}`);
    this.name = "UnknownAttributeError";
  }
}

/** Endpoint incidence count per node; a self-loop counts twice. */
export function nodeDegrees(doc: SnapshotDocument): Map<string, number> {
  const degrees = new Map<string, number>();
  for (const node of doc.nodes) degrees.set(node.id, 0);
  for (const edge of doc.edges) {
    degrees.set(edge.source, (degrees.get(edge.source) ?? 0) + 1);
    degrees.set(edge.target, (degrees.get(edge.target) ?? 0) + 1);
  }
  return degrees;
}

/** Linear RGB interpolation across the ordered stops, lowercase hex out.
 * Channel ties round half to even, matching the engine's rounding. */
export function interpolateColor(scale: readonly string[], fraction: number): string {
  const f = Math.min(Math.max(fraction, 0), 1);
  const first = scale[0];
  if (first === undefined) throw new RangeError("empty color scale");
  if (scale.length === 1) return first.toLowerCase();
  const t = f * (scale.length - 1);
  const i = Math.min(Math.floor(t), scale.length - 2);
  const local = t - i;
  const a = channels(scale[i] as string);
  const b = channels(scale[i + 1] as string);
  const mixed = a.map((x, c) => roundHalfEven(x + ((b[c] as number) - x) * local));
  return "#" + mixed.map((c) => c.toString(16).padStart(2, "0")).join("");
}

function channels(color: string): number[] {
  return [1, 3, 5].map((i) => parseInt(color.slice(i, i + 2), 16));
}

function roundHalfEven(value: number): number {
  const floor = Math.floor(value);
  const diff = value - floor;
  if (diff > 0.5) return floor + 1;
  if (diff < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

/**
 * Resolves styles for one document.  Construction precomputes degrees
 * and the observed value range per selector; resolve() is then O(1) per
 * node, cheap enough to run on every restyle.
 */
export class StyleResolver {
  private readonly doc: SnapshotDocument;
  private readonly degrees: Map<string, number>;
  private readonly attributes: Map<string, Map<string, AttributeValue>>;
  private readonly attributeNames: Set<string>;
  private readonly ranges = new Map<string, [number, number] | null>();

  constructor(doc: SnapshotDocument) {
    this.doc = doc;
    this.degrees = nodeDegrees(doc);
    this.attributes = new Map(doc.nodes.map((node) => [node.id, node.attributes]));
    this.attributeNames = new Set<string>();
    for (const node of doc.nodes) {
      for (const name of node.attributes.keys()) this.attributeNames.add(name);
    }
  }

  resolve(nodeId: string): ResolvedStyle {
    const style = this.doc.view.globalStyle;
    const [sizeMin, sizeMax] = style.sizeRange;
    const resolved: ResolvedStyle = {
      size: sizeMin + this.fraction(nodeId, style.sizeBy) * (sizeMax - sizeMin),
      color: interpolateColor(style.colorScale, this.fraction(nodeId, style.colorBy)),
      shape: style.shape,
      label: this.label(nodeId, style.labelBy),
    };
    const override = this.doc.view.overrides.get(nodeId);
    if (override !== undefined) {
      if (override.size !== undefined) resolved.size = override.size;
      if (override.color !== undefined) resolved.color = override.color.toLowerCase();
      if (override.shape !== undefined) resolved.shape = override.shape;
      if (override.label !== undefined) resolved.label = override.label;
    }
    return resolved;
  }

  /** Position of the node's quantity in the observed [min, max], in
   * [0, 1].  Constant and pagerank selectors and degenerate ranges sit
   * at 0.5; missing values at 0. */
  fraction(nodeId: string, selectorText: string): number {
    const selector = parseSelector(selectorText);
    if (selector.kind === "constant" || selector.kind === "pagerank") return 0.5;
    if (selector.kind === "attribute" && !this.attributeNames.has(selector.name)) {
      throw new UnknownAttributeError(selector.name);
    }
    const value = this.quantity(nodeId, selector);
    if (value === null) return 0;
    const range = this.observedRange(selectorText, selector);
    if (range === null) return 0;
    const [lo, hi] = range;
    if (hi <= lo) return 0.5;
    return (value - lo) / (hi - lo);
  }

  private label(nodeId: string, selectorText: string | null): string {
    if (selectorText === null) return "";
    const selector = parseSelector(selectorText);
    if (selector.kind === "pagerank" || selector.kind === "constant") return "";
    if (selector.kind === "degree") return String(this.degrees.get(nodeId) ?? 0);
    const value = this.attribute(nodeId, selector.name);
    if (value === undefined) return "";
    if (typeof value === "boolean") return value ? "true" : "false";
    if (typeof value === "number") return numberLabel(value);
    return value;
  }

  private attribute(nodeId: string, name: string): AttributeValue | undefined {
    return this.attributes.get(nodeId)?.get(name);
  }

  private quantity(nodeId: string, selector: Selector): number | null {
    if (selector.kind === "degree") return this.degrees.get(nodeId) ?? null;
    if (selector.kind === "attribute") {
      const value = this.attribute(nodeId, selector.name);
      if (typeof value === "boolean") return value ? 1 : 0;
      if (typeof value === "number") return value;
      return null;
    }
    return null;
  }

  private observedRange(key: string, selector: Selector): [number, number] | null {
    const cached = this.ranges.get(key);
    if (cached !== undefined) return cached;
    let lo = Infinity;
    let hi = -Infinity;
    for (const node of this.doc.nodes) {
      const value = this.quantity(node.id, selector);
      if (value === null) continue;
      lo = Math.min(lo, value);
      hi = Math.max(hi, value);
    }
    const range: [number, number] | null = lo > hi ? null : [lo, hi];
    this.ranges.set(key, range);
    return range;
  }
}

function numberLabel(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e15) return String(value);
  let text = value.toPrecision(6);
  if (text.includes(".") && !text.includes("e")) text = text.replace(/\.?0+$/, "");
  return text;
}
