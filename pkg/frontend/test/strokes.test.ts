import { describe, expect, it } from "vitest";

import { StrokeStore } from "../src/strokes";
import type { UiStroke } from "../src/types";

const strokeA: UiStroke = { class_id: 0, width_px: 3, points: [[2, 2], [10, 4]] };
const strokeB: UiStroke = { class_id: 2, width_px: 5, points: [[8, 8]] };

describe("StrokeStore", () => {
  it("adds and undoes in LIFO order", () => {
    const store = new StrokeStore(16, 16);
    store.add(strokeA);
    store.add(strokeB);
    expect(store.length).toBe(2);
    expect(store.undo()).toBe(true);
    expect(store.list().map((s) => s.class_id)).toEqual([0]);
    expect(store.undo()).toBe(true);
    expect(store.undo()).toBe(false);
  });

  it("rejects empty polylines and negative classes", () => {
    const store = new StrokeStore(8, 8);
    expect(() => store.add({ class_id: 1, width_px: 2, points: [] })).toThrow();
    expect(() => store.add({ class_id: -1, width_px: 2, points: [[1, 1]] })).toThrow();
  });

  it("export/import round-trips to identical requests", () => {
    const store = new StrokeStore(32, 24);
    store.add(strokeA);
    store.add(strokeB);
    const reimported = StrokeStore.fromJson(store.exportJson());
    expect(reimported.width).toBe(32);
    expect(reimported.height).toBe(24);
    expect(reimported.list()).toEqual(store.list());
    expect(reimported.exportJson()).toBe(store.exportJson());
  });

  it("stores deep copies so later mutation cannot corrupt history", () => {
    const store = new StrokeStore(8, 8);
    const stroke: UiStroke = { class_id: 1, width_px: 2, points: [[1, 1]] };
    store.add(stroke);
    stroke.points.push([5, 5]);
    expect(store.list()[0].points).toEqual([[1, 1]]);
  });

  it("rejects malformed stroke files", () => {
    expect(() => StrokeStore.fromJson("{}")).toThrow();
    expect(() => StrokeStore.fromJson("not json")).toThrow();
  });
});
