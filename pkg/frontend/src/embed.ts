/**
 * Embed mode: the viewer inside someone else's iframe.
 *
 * Framed, the application chrome (import dialog, side panels, share
 * button) stays hidden and only the canvas shows, until the reader asks
 * to expand.  A framed page always offers an escape hatch to the full
 * viewer in a new tab.
 */

import { viewerUrl } from "./fragment.js";

export class EmbedMode {
  private readonly framed: boolean;
  private expanded = false;

  constructor(framed: boolean) {
    this.framed = framed;
  }

  /** Detect framing from the window pair; a cross-origin top throws on
   * access, which itself proves we are framed. */
  static detect(win: { self: unknown; top: unknown }): EmbedMode {
    let framed: boolean;
    try {
      framed = win.self !== win.top;
    } catch {
      framed = true;
    }
    return new EmbedMode(framed);
  }

  get isFramed(): boolean {
    return this.framed;
  }

  get isExpanded(): boolean {
    return this.expanded;
  }

  /** Hide panels and controls?  True only while framed and collapsed. */
  get chromeHidden(): boolean {
    return this.framed && !this.expanded;
  }

  expand(): void {
    this.expanded = true;
  }

  collapse(): void {
    this.expanded = false;
  }

  /** Full-viewer URL for the "open in new tab" escape hatch. */
  openInTabUrl(viewerPageUrl: string, snapshotId: string): string {
    return viewerUrl(viewerPageUrl, snapshotId);
  }
}
