/**
 * Client-side stroke rasterization, pixel-exact with the service.
 *
 * Shared convention: a pixel (x, y) is covered by a stroke when its center
 * lies within width_px / 2 of any polyline segment (round caps fall out of
 * the point-to-segment distance); later strokes overwrite earlier ones.
 */

import { UNLABELED, type UiStroke } from "./types";

export function rasterizeStrokes(
  strokes: UiStroke[],
  width: number,
  height: number,
): Uint8Array {
  const grid = new Uint8Array(width * height).fill(UNLABELED);
  for (const stroke of strokes) {
    paintStroke(grid, width, height, stroke);
  }
  return grid;
}

export function paintStroke(
  grid: Uint8Array,
  width: number,
  height: number,
  stroke: UiStroke,
): void {
  if (stroke.points.length === 0) return;
  const radius = stroke.width_px / 2;
  const pts = stroke.points;
  const segments: [number, number, number, number][] = [];
  if (pts.length === 1) {
    segments.push([pts[0][0], pts[0][1], pts[0][0], pts[0][1]]);
  } else {
    for (let i = 0; i + 1 < pts.length; i++) {
      segments.push([pts[i][0], pts[i][1], pts[i + 1][0], pts[i + 1][1]]);
    }
  }
  for (const [x0, y0, x1, y1] of segments) {
    const loX = Math.max(0, Math.floor(Math.min(x0, x1) - radius));
    const hiX = Math.min(width - 1, Math.ceil(Math.max(x0, x1) + radius));
    const loY = Math.max(0, Math.floor(Math.min(y0, y1) - radius));
    const hiY = Math.min(height - 1, Math.ceil(Math.max(y0, y1) + radius));
    const dx = x1 - x0;
    const dy = y1 - y0;
    const norm = dx * dx + dy * dy;
    for (let y = loY; y <= hiY; y++) {
      for (let x = loX; x <= hiX; x++) {
        let t = 0;
        if (norm > 0) {
          t = ((x - x0) * dx + (y - y0) * dy) / norm;
          t = Math.max(0, Math.min(1, t));
        }
        const px = x - (x0 + t * dx);
        const py = y - (y0 + t * dy);
        if (px * px + py * py <= radius * radius) {
          grid[y * width + x] = stroke.class_id;
        }
      }
    }
  }
}
