import { describe, expect, it } from "vitest";

import { SharingClient, type FetchLike } from "../src/api.js";
import { Session, openFromHash } from "../src/session.js";
import { encodeSnapshot } from "../src/snapshot.js";
import { fixtureDocument, fixtureText } from "./helpers.js";

const ID = "6c0d8aaa-5320-4c81-9618-11ea5e0524f4";

interface Call {
  url: string;
  init?: RequestInit;
}

function clientWith(handler: (url: string) => Response): { client: SharingClient; calls: Call[] } {
  const calls: Call[] = [];
  const fetchImpl: FetchLike = (url, init) => {
    calls.push({ url, init });
    return Promise.resolve(handler(url));
  };
  return { client: new SharingClient("http://share.test", { fetch: fetchImpl }), calls };
}

describe("opening from the location hash", () => {
  it("routes an empty or foreign hash to the import dialog", async () => {
    const { client, calls } = clientWith(() => new Response("", { status: 500 }));
    expect(await openFromHash("", client)).toEqual({ phase: "import" });
    expect(await openFromHash("#welcome", client)).toEqual({ phase: "import" });
    expect(calls).toHaveLength(0);
  });

  it("loads a stored snapshot into a ready session", async () => {
    const { client, calls } = clientWith(
      () => new Response(fixtureText("citations.snapshot.json"), { status: 200 }),
    );
    const state = await openFromHash(`#${ID}`, client);
    expect(state.phase).toBe("ready");
    if (state.phase !== "ready") return;
    expect(state.session.document.metadata.name).toBe("citations");
    expect(state.session.document.nodes).toHaveLength(6);
    expect(calls[0]?.url).toBe(`http://share.test/api/v1/snapshots/${ID}`);
  });

  it("reports an unknown id without throwing", async () => {
    const { client } = clientWith(
      () =>
        new Response(JSON.stringify({ errors: [{ type: "NotFound", detail: "unknown snapshot" }] }), {
          status: 404,
        }),
    );
    const state = await openFromHash(`#${ID}`, client);
    expect(state).toEqual({
      phase: "error",
      message: "no snapshot with this id",
      issues: [{ type: "NotFound", detail: "unknown snapshot" }],
    });
  });

  it("reports a corrupt stored document with its issues", async () => {
    const { client } = clientWith(() => new Response("{}", { status: 200 }));
    const state = await openFromHash(`#${ID}`, client);
    expect(state.phase).toBe("error");
    if (state.phase !== "error") return;
    expect(state.message).toContain("stored snapshot is invalid");
    expect(state.issues.length).toBeGreaterThan(0);
    expect(state.issues[0]?.type).toBe("SchemaError");
  });

  it("reports an unreachable server", async () => {
    const fetchImpl: FetchLike = () => Promise.reject(new TypeError("fetch failed"));
    const client = new SharingClient("http://share.test", { fetch: fetchImpl });
    const state = await openFromHash(`#${ID}`, client);
    expect(state).toEqual({
      phase: "error",
      message: "could not reach the sharing server: fetch failed",
      issues: [],
    });
  });
});

describe("selection", () => {
  it("keeps only visible nodes, sorted", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.select(["p3", "p1", "ghost", "p3"]);
    expect(session.selection).toEqual(["p1", "p3"]);
  });

  it("toggles membership", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.toggle("p2");
    expect(session.selection).toEqual(["p2"]);
    session.toggle("p2");
    expect(session.selection).toEqual([]);
    session.toggle("ghost");
    expect(session.selection).toEqual([]);
  });

  it("clears", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.select(["p1", "p2"]);
    session.clearSelection();
    expect(session.selection).toEqual([]);
  });

  it("ignores hidden nodes", () => {
    const session = new Session(fixtureDocument("lesmis.snapshot.json"));
    const hidden = session.document.nodes
      .map((node) => node.id)
      .filter((id) => !session.document.view.visible.includes(id));
    expect(hidden.length).toBeGreaterThan(0);
    session.select(hidden);
    expect(session.selection).toEqual([]);
  });
});

describe("restyling", () => {
  it("merges patches field by field", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.setOverride("p1", { size: 20 });
    expect(session.document.view.overrides.get("p1")).toEqual({ color: "#e41a1c", size: 20 });
    session.setOverride("p1", { label: "seminal" });
    expect(session.document.view.overrides.get("p1")).toEqual({
      color: "#e41a1c",
      size: 20,
      label: "seminal",
    });
  });

  it("rejects unknown nodes", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    expect(() => session.setOverride("ghost", { size: 20 })).toThrow(RangeError);
  });

  it("drops an override that stays empty", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.setOverride("p2", {});
    expect(session.document.view.overrides.has("p2")).toBe(false);
  });

  it("clears an override outright", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.clearOverride("p1");
    expect(session.document.view.overrides.has("p1")).toBe(false);
  });
});

describe("drawing and sharing", () => {
  it("builds a scene for the current document", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    const scene = session.scene();
    expect(scene.nodeCount).toBe(6);
    expect(scene.edgeCount).toBe(8);
  });

  it("fits the camera to the visible nodes", () => {
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.fitCamera({ width: 800, height: 600 });
    expect(session.camera.scale).toBeGreaterThan(0);
    const xs = session.document.view.visible.map((id) => {
      const [x, y] = session.document.view.positions.get(id)!;
      return session.camera.worldToScreen(x, y)[0];
    });
    expect(Math.min(...xs)).toBeGreaterThanOrEqual(39.999);
    expect(Math.max(...xs)).toBeLessThanOrEqual(760.001);
  });

  it("shares the edited document as new canonical bytes", async () => {
    const { client, calls } = clientWith(
      () => new Response(JSON.stringify({ id: ID, url_fragment: `#${ID}` }), { status: 201 }),
    );
    const session = new Session(fixtureDocument("citations.snapshot.json"));
    session.setOverride("p2", { shape: "square" });
    const receipt = await session.share(client);
    expect(receipt).toEqual({ id: ID, urlFragment: `#${ID}` });
    expect(calls[0]?.url).toBe("http://share.test/api/v1/snapshots");
    expect(calls[0]?.init?.method).toBe("POST");
    expect(calls[0]?.init?.body).toBe(encodeSnapshot(session.document));
    expect(calls[0]?.init?.body as string).toContain('"shape":"square"');
  });
});
