export interface UiStroke {
  class_id: number;
  width_px: number;
  points: [number, number][];
}

export interface StrokeFile {
  width: number;
  height: number;
  strokes: UiStroke[];
}

export interface SuperpixelCount {
  sigma_fh: number;
  space: string;
  k: number;
  count: number;
}

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
  superpixel_counts: SuperpixelCount[];
}

export interface MaskResponse {
  mask_png: string;
  confidence_png: string;
  ms: number;
}

export const UNLABELED = 255;
