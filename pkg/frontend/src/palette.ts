/** PASCAL VOC class colormap: bit-interleaved base colors, 21 classes. */

export const CLASS_NAMES = [
  "background", "aeroplane", "bicycle", "bird", "boat", "bottle", "bus",
  "car", "cat", "chair", "cow", "diningtable", "dog", "horse", "motorbike",
  "person", "pottedplant", "sheep", "sofa", "train", "tvmonitor",
];

export function classColor(classId: number): [number, number, number] {
  let r = 0;
  let g = 0;
  let b = 0;
  let c = classId;
  for (let j = 0; j < 8; j++) {
    r |= ((c >> 0) & 1) << (7 - j);
    g |= ((c >> 1) & 1) << (7 - j);
    b |= ((c >> 2) & 1) << (7 - j);
    c >>= 3;
  }
  return [r, g, b];
}

export function paletteCss(classId: number): string {
  const [r, g, b] = classColor(classId);
  return `rgb(${r}, ${g}, ${b})`;
}
