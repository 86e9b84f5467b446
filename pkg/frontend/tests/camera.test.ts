import { describe, expect, it } from "vitest";

import { Camera, MAX_SCALE, MIN_SCALE } from "../src/camera.js";

describe("coordinate mapping", () => {
  it("round-trips world and screen space", () => {
    const camera = new Camera();
    camera.scale = 2.5;
    camera.translateX = 40;
    camera.translateY = -7;
    const [sx, sy] = camera.worldToScreen(123.4, 567.8);
    const [wx, wy] = camera.screenToWorld(sx, sy);
    expect(wx).toBeCloseTo(123.4, 10);
    expect(wy).toBeCloseTo(567.8, 10);
  });

  it("pans in screen pixels", () => {
    const camera = new Camera();
    camera.scale = 2;
    const before = camera.worldToScreen(10, 10);
    camera.panBy(5, -3);
    const after = camera.worldToScreen(10, 10);
    expect(after[0] - before[0]).toBe(5);
    expect(after[1] - before[1]).toBe(-3);
  });
});

describe("zooming", () => {
  it("keeps the anchor point fixed", () => {
    const camera = new Camera();
    camera.scale = 1.5;
    camera.translateX = 100;
    camera.translateY = 20;
    const anchor = camera.screenToWorld(333, 111);
    camera.zoomAt(333, 111, 1.8);
    expect(camera.scale).toBeCloseTo(2.7, 12);
    const [sx, sy] = camera.worldToScreen(anchor[0], anchor[1]);
    expect(sx).toBeCloseTo(333, 9);
    expect(sy).toBeCloseTo(111, 9);
  });

  it("clamps the scale on both ends", () => {
    const camera = new Camera();
    camera.zoomAt(0, 0, 1e9);
    expect(camera.scale).toBe(MAX_SCALE);
    camera.zoomAt(0, 0, 1e-12);
    expect(camera.scale).toBe(MIN_SCALE);
  });
});

describe("fitting", () => {
  const viewport = { width: 800, height: 600 };

  it("frames a bounding box with margins", () => {
    const camera = new Camera();
    camera.fit(
      [
        [0, 0],
        [1000, 1000],
      ],
      viewport,
      40,
    );
    // limited by height: (600 - 80) / 1000
    expect(camera.scale).toBeCloseTo(0.52, 12);
    const [cx, cy] = camera.worldToScreen(500, 500);
    expect(cx).toBeCloseTo(400, 9);
    expect(cy).toBeCloseTo(300, 9);
    const [left] = camera.worldToScreen(0, 500);
    expect(left).toBeGreaterThanOrEqual(40);
  });

  it("centers a single point at scale 1", () => {
    const camera = new Camera();
    camera.fit([[250, 250]], viewport);
    expect(camera.scale).toBe(1);
    expect(camera.worldToScreen(250, 250)).toEqual([400, 300]);
  });

  it("handles no positions at all", () => {
    const camera = new Camera();
    camera.fit([], viewport);
    expect(camera.scale).toBe(1);
    expect(camera.worldToScreen(0, 0)).toEqual([400, 300]);
  });

  it("never zooms beyond the clamp when fitting a tiny cluster", () => {
    const camera = new Camera();
    camera.fit(
      [
        [500, 500],
        [500.001, 500.001],
      ],
      viewport,
    );
    expect(camera.scale).toBe(MAX_SCALE);
  });
});
