// The frame tree is the only picker in the app, so its shape has to match
// the registry exactly: 22 roots, 49 nodes, schema order, no invented ids.

import { describe, expect, it, vi } from "vitest";

import { buildFrameTree, countNodes, flattenTree } from "../src/state.js";
import { renderFrameTree } from "../src/render.js";
import type { TaxonomyPayload } from "../src/types.js";
import taxonomyJson from "./fixtures/taxonomy.json";

const TAXONOMY = taxonomyJson as unknown as TaxonomyPayload;

describe("buildFrameTree", () => {
  it("keeps every frame from the registry payload", () => {
    const roots = buildFrameTree(TAXONOMY);
    expect(roots.length).toBe(22);
    expect(countNodes(roots)).toBe(49);
  });

  it("preserves schema order under a depth-first walk", () => {
    const roots = buildFrameTree(TAXONOMY);
    expect(flattenTree(roots)).toEqual(TAXONOMY.frames.map((f) => f.id));
  });

  it("nests children under the right parents", () => {
    const roots = buildFrameTree(TAXONOMY);
    const journey = roots.find((n) => n.frame.id === "JOURNEY");
    expect(journey).toBeDefined();
    const childIds = journey!.children.map((n) => n.frame.id);
    expect(childIds).toContain("JOURNEY/RACE");
    for (const child of journey!.children) {
      expect(child.frame.parent).toBe("JOURNEY");
    }
    // roots are exactly the frames with no parent
    const expectedRoots = TAXONOMY.frames
      .filter((f) => f.parent === null)
      .map((f) => f.id);
    expect(roots.map((n) => n.frame.id)).toEqual(expectedRoots);
  });

  it("rejects a payload where a child precedes its parent", () => {
    const child = TAXONOMY.frames.find((f) => f.id === "JOURNEY/RACE")!;
    const broken = { ...TAXONOMY, frames: [child] };
    expect(() => buildFrameTree(broken)).toThrowError(/before parent/);
  });
});

describe("renderFrameTree", () => {
  it("renders one button per frame and only registry ids", () => {
    const tree = renderFrameTree(buildFrameTree(TAXONOMY), () => {});
    const buttons = [...tree.querySelectorAll("button.frame-pick")];
    expect(buttons.length).toBe(49);
    const known = new Set(TAXONOMY.frames.map((f) => f.id));
    for (const button of buttons) {
      const id = (button as HTMLElement).dataset.frameId;
      expect(known.has(id!)).toBe(true);
    }
    // top level: one <li> per root, parents expandable via <details>
    expect(tree.children.length).toBe(22);
    const journeyButton = buttons.find(
      (b) => (b as HTMLElement).dataset.frameId === "JOURNEY",
    )!;
    expect(journeyButton.closest("details")).not.toBeNull();
  });

  it("reports the picked frame id through the callback", () => {
    const onPick = vi.fn();
    const tree = renderFrameTree(buildFrameTree(TAXONOMY), onPick);
    const target = tree.querySelector<HTMLButtonElement>(
      'button[data-frame-id="JOURNEY/RACE"]',
    )!;
    target.click();
    expect(onPick).toHaveBeenCalledTimes(1);
    expect(onPick).toHaveBeenCalledWith("JOURNEY/RACE");
  });
});
