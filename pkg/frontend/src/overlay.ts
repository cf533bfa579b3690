/** Pixel-level helpers for mask, confidence, and scribble overlays. */

import { classColor } from "./palette";
import { UNLABELED } from "./types";

/** Class-id raster to RGBA with the class palette at the given opacity. */
export function colorizeMask(
  labels: Uint8Array | Uint8ClampedArray,
  width: number,
  height: number,
  alpha: number,
): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(width * height * 4);
  const a = Math.round(Math.max(0, Math.min(1, alpha)) * 255);
  for (let i = 0; i < width * height; i++) {
    const [r, g, b] = classColor(labels[i]);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = a;
  }
  return out;
}

/** Scribble raster to RGBA; unlabeled pixels stay transparent. */
export function colorizeScribbles(
  grid: Uint8Array,
  width: number,
  height: number,
): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    if (grid[i] === UNLABELED) continue;
    const [r, g, b] = classColor(grid[i]);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = 255;
  }
  return out;
}

/** Confidence raster (0..255) to a translucent heat ramp (blue -> red). */
export function colorizeConfidence(
  values: Uint8Array | Uint8ClampedArray,
  width: number,
  height: number,
  alpha: number,
): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(width * height * 4);
  const a = Math.round(Math.max(0, Math.min(1, alpha)) * 255);
  for (let i = 0; i < width * height; i++) {
    const v = values[i] / 255;
    out[i * 4] = Math.round(255 * v);
    out[i * 4 + 1] = Math.round(64 * (1 - Math.abs(2 * v - 1)));
    out[i * 4 + 2] = Math.round(255 * (1 - v));
    out[i * 4 + 3] = a;
  }
  return out;
}
