/**
 * Viewport camera: world coordinates are the snapshot's abstract layout
 * units (positions live in a 1000x1000 arena by default), screen
 * coordinates are CSS pixels.  screen = world * scale + translate.
 *
 * The camera is the renderer's state, never the document's: zoom and pan
 * are not persisted, which is what keeps snapshots resolution
 * independent.
 */

export interface Viewport {
  width: number;
  height: number;
}

export const MIN_SCALE = 1 / 64;
export const MAX_SCALE = 64;

export class Camera {
  scale = 1;
  translateX = 0;
  translateY = 0;

  worldToScreen(x: number, y: number): [number, number] {
    return [x * this.scale + this.translateX, y * this.scale + this.translateY];
  }

  screenToWorld(x: number, y: number): [number, number] {
    return [(x - this.translateX) / this.scale, (y - this.translateY) / this.scale];
  }

  /** Drag by screen-space pixels. */
  panBy(dx: number, dy: number): void {
    this.translateX += dx;
    this.translateY += dy;
  }

  /** Multiply the zoom, keeping the world point under the given screen
   * point exactly where it is (wheel and pinch anchor). */
  zoomAt(screenX: number, screenY: number, factor: number): void {
    const [anchorX, anchorY] = this.screenToWorld(screenX, screenY);
    this.scale = clampScale(this.scale * factor);
    this.translateX = screenX - anchorX * this.scale;
    this.translateY = screenY - anchorY * this.scale;
  }

  /** Frame the given world positions inside the viewport with a pixel
   * margin.  A single point (or none) centers at scale 1. */
  fit(positions: Iterable<[number, number]>, viewport: Viewport, margin = 40): void {
    let minX = Infinity;
    let minY = Infinity;
    let maxX = -Infinity;
    let maxY = -Infinity;
    for (const [x, y] of positions) {
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
    const centerX = viewport.width / 2;
    const centerY = viewport.height / 2;
    if (minX > maxX) {
      this.scale = 1;
      this.translateX = centerX;
      this.translateY = centerY;
      return;
    }
    const spanX = maxX - minX;
    const spanY = maxY - minY;
    const usableX = Math.max(viewport.width - 2 * margin, 1);
    const usableY = Math.max(viewport.height - 2 * margin, 1);
    this.scale =
      spanX === 0 && spanY === 0
        ? 1
        : clampScale(Math.min(usableX / Math.max(spanX, 1e-12), usableY / Math.max(spanY, 1e-12)));
    this.translateX = centerX - ((minX + maxX) / 2) * this.scale;
    this.translateY = centerY - ((minY + maxY) / 2) * this.scale;
  }
}

function clampScale(scale: number): number {
  return Math.min(Math.max(scale, MIN_SCALE), MAX_SCALE);
}
