/**
 * Stroke list with undo, exportable as the batch CLI's stroke-file format
 * so a recorded session can be replayed offline.
 */

import type { StrokeFile, UiStroke } from "./types";

export class StrokeStore {
  private strokes: UiStroke[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  get length(): number {
    return this.strokes.length;
  }

  list(): readonly UiStroke[] {
    return this.strokes;
  }

  add(stroke: UiStroke): void {
    if (stroke.points.length === 0) {
      throw new Error("stroke needs at least one point");
    }
    if (stroke.class_id < 0) {
      throw new Error("negative class id");
    }
    this.strokes.push({
      class_id: stroke.class_id,
      width_px: stroke.width_px,
      points: stroke.points.map(([x, y]) => [x, y]),
    });
  }

  /** Remove the most recent stroke; returns false when already empty. */
  undo(): boolean {
    return this.strokes.pop() !== undefined;
  }

  clear(): void {
    this.strokes = [];
  }

  toFile(): StrokeFile {
    return {
      width: this.width,
      height: this.height,
      strokes: this.strokes.map((s) => ({
        class_id: s.class_id,
        width_px: s.width_px,
        points: s.points.map(([x, y]) => [x, y] as [number, number]),
      })),
    };
  }

  exportJson(): string {
    return JSON.stringify(this.toFile(), null, 2);
  }

  static fromJson(text: string): StrokeStore {
    const doc = JSON.parse(text) as StrokeFile;
    if (!doc || !Array.isArray(doc.strokes)) {
      throw new Error("not a stroke file: missing strokes list");
    }
    const store = new StrokeStore(doc.width, doc.height);
    for (const stroke of doc.strokes) {
      store.add(stroke);
    }
    return store;
  }
}
