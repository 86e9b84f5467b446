import { readFileSync } from "node:fs";

import { decodeSnapshot, type SnapshotDocument } from "../src/snapshot.js";

export function fixtureText(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
}

export function fixtureDocument(name: string): SnapshotDocument {
  return decodeSnapshot(fixtureText(name));
}

/** Small well-formed document object for mutation tests, deliberately
 * untyped so tests can bend one field at a time. */
export function validDocument(): any {
  return {
    version: 1,
    metadata: { name: "probe", created: "2024-05-06T07:08:09Z", generator: "test" },
    graph: {
      directed: false,
      nodes: [
        { id: "a", attributes: { k: 1.5 } },
        { id: "b", attributes: {} },
      ],
      edges: [{ source: "a", target: "b", weight: 2.0 }],
    },
    view: {
      visible: ["a", "b"],
      positions: { a: [1.0, 2.0], b: [3.0, 4.0] },
      pinned: ["a"],
      overrides: { b: { color: "#e41a1c" } },
      global_style: {
        size_by: "degree",
        size_range: [3.0, 15.0],
        color_by: "degree",
        color_scale: ["#9ecae1", "#08306b"],
        shape: "circle",
        label_by: null,
        label_size: 10.0,
      },
    },
  };
}
