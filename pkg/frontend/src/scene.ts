/**
 * Batched render geometry.
 *
 * The whole visible graph flattens into two typed arrays, one per
 * primitive, so a WebGL renderer issues one instanced draw for nodes and
 * one for edges regardless of graph size, and a canvas fallback can walk
 * the same arrays.  Coordinates stay in world units; the camera applies
 * zoom and pan at draw time.
 */

import type { SnapshotDocument } from "./snapshot.js";
import { StyleResolver } from "./style.js";

/** Floats per node instance: x, y, size, r, g, b, shape index. */
export const NODE_STRIDE = 7;

/** Floats per edge segment: x1, y1, x2, y2. */
export const EDGE_STRIDE = 4;

export const SHAPE_INDEX = { circle: 0, square: 1, triangle: 2 } as const;

export interface SceneLabel {
  nodeId: string;
  text: string;
  x: number;
  y: number;
  size: number;
}

export interface Scene {
  nodeCount: number;
  /** Instance order of the node buffer; sorted by node id. */
  nodeIds: string[];
  nodes: Float32Array;
  edgeCount: number;
  edges: Float32Array;
  labels: SceneLabel[];
}

/** Flatten the document's visible subgraph.  Edges are included when
 * both endpoints are visible (self-loops become zero-length segments and
 * are the renderer's problem to draw politely). */
export function buildScene(doc: SnapshotDocument): Scene {
  const resolver = new StyleResolver(doc);
  const visible = doc.view.visible;
  const visibleSet = new Set(visible);

  const nodes = new Float32Array(visible.length * NODE_STRIDE);
  const labels: SceneLabel[] = [];
  visible.forEach((nodeId, i) => {
    const position = doc.view.positions.get(nodeId);
    if (position === undefined) {
      throw new Error(`visible node ${JSON.stringify(nodeId)} has no position`);
    }
    const [x, y] = position;
    const style = resolver.resolve(nodeId);
    const [r, g, b] = colorToUnitRgb(style.color);
    const base = i * NODE_STRIDE;
    nodes[base] = x;
    nodes[base + 1] = y;
    nodes[base + 2] = style.size;
    nodes[base + 3] = r;
    nodes[base + 4] = g;
    nodes[base + 5] = b;
    nodes[base + 6] = SHAPE_INDEX[style.shape];
    if (style.label !== "") {
      labels.push({ nodeId, text: style.label, x, y, size: doc.view.globalStyle.labelSize });
    }
  });

  const segments: number[] = [];
  for (const edge of doc.edges) {
    if (!visibleSet.has(edge.source) || !visibleSet.has(edge.target)) continue;
    const [x1, y1] = doc.view.positions.get(edge.source)!;
    const [x2, y2] = doc.view.positions.get(edge.target)!;
    segments.push(x1, y1, x2, y2);
  }

  return {
    nodeCount: visible.length,
    nodeIds: [...visible],
    nodes,
    edgeCount: segments.length / EDGE_STRIDE,
    edges: Float32Array.from(segments),
    labels,
  };
}

/** #rrggbb to [0, 1] channel floats for vertex attributes. */
export function colorToUnitRgb(color: string): [number, number, number] {
  const value = parseInt(color.slice(1), 16);
  return [((value >> 16) & 0xff) / 255, ((value >> 8) & 0xff) / 255, (value & 0xff) / 255];
}
