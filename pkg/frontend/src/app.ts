/**
 * Canvas scribble editor: draw class-tagged strokes over an image, submit
 * them to the session service, and inspect the propagated mask with
 * adjustable overlays. Undo removes the last stroke and resubmits.
 */

import { SegmentationClient } from "./api";
import { colorizeConfidence, colorizeMask, colorizeScribbles } from "./overlay";
import { CLASS_NAMES, paletteCss } from "./palette";
import { rasterizeStrokes } from "./raster";
import { StrokeStore } from "./strokes";
import type { SessionInfo, UiStroke } from "./types";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const client = new SegmentationClient("");

let session: SessionInfo | null = null;
let store: StrokeStore | null = null;
let imageBitmap: ImageBitmap | null = null;
let maskLabels: Uint8ClampedArray | null = null;
let confidenceValues: Uint8ClampedArray | null = null;
let activeClass = 1;
let drawing: UiStroke | null = null;

const imageCanvas = $("image-canvas") as unknown as HTMLCanvasElement;
const overlayCanvas = $("overlay-canvas") as unknown as HTMLCanvasElement;
const scribbleCanvas = $("scribble-canvas") as unknown as HTMLCanvasElement;

function status(text: string): void {
  $("status").textContent = text;
}

function buildPalette(): void {
  const bar = $("palette");
  bar.innerHTML = "";
  CLASS_NAMES.forEach((name, classId) => {
    const button = document.createElement("button");
    button.className = "class-button";
    button.title = `${classId}: ${name}`;
    button.style.background = paletteCss(classId);
    if (classId === activeClass) button.classList.add("active");
    button.addEventListener("click", () => {
      activeClass = classId;
      bar.querySelectorAll(".class-button").forEach((b) => b.classList.remove("active"));
      button.classList.add("active");
      $("active-class").textContent = `${classId} (${name})`;
    });
    bar.appendChild(button);
  });
}

function canvasPoint(event: PointerEvent): [number, number] {
  const rect = scribbleCanvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * scribbleCanvas.width;
  const y = ((event.clientY - rect.top) / rect.height) * scribbleCanvas.height;
  return [Math.round(x * 10) / 10, Math.round(y * 10) / 10];
}

function redrawScribbles(): void {
  if (!store) return;
  const ctx = scribbleCanvas.getContext("2d")!;
  ctx.clearRect(0, 0, scribbleCanvas.width, scribbleCanvas.height);
  const pending = drawing ? [...store.list(), drawing] : [...store.list()];
  const grid = rasterizeStrokes(pending, store.width, store.height);
  const rgba = colorizeScribbles(grid, store.width, store.height);
  ctx.putImageData(new ImageData(rgba, store.width, store.height), 0, 0);
}

function redrawOverlay(): void {
  const ctx = overlayCanvas.getContext("2d")!;
  ctx.clearRect(0, 0, overlayCanvas.width, overlayCanvas.height);
  const opacity = Number(($("opacity") as HTMLInputElement).value) / 100;
  const showConfidence = ($("show-confidence") as HTMLInputElement).checked;
  if (maskLabels && !showConfidence) {
    const rgba = colorizeMask(maskLabels, overlayCanvas.width, overlayCanvas.height, opacity);
    ctx.putImageData(new ImageData(rgba, overlayCanvas.width, overlayCanvas.height), 0, 0);
  } else if (confidenceValues && showConfidence) {
    const rgba = colorizeConfidence(confidenceValues, overlayCanvas.width, overlayCanvas.height, opacity);
    ctx.putImageData(new ImageData(rgba, overlayCanvas.width, overlayCanvas.height), 0, 0);
  }
}

async function pngToGray(pngBase64: string, width: number, height: number): Promise<Uint8ClampedArray> {
  const img = new Image();
  img.src = `data:image/png;base64,${pngBase64}`;
  await img.decode();
  const scratch = document.createElement("canvas");
  scratch.width = width;
  scratch.height = height;
  const ctx = scratch.getContext("2d")!;
  ctx.drawImage(img, 0, 0);
  const data = ctx.getImageData(0, 0, width, height).data;
  const gray = new Uint8ClampedArray(width * height);
  for (let i = 0; i < width * height; i++) gray[i] = data[i * 4];
  return gray;
}

async function submit(): Promise<void> {
  if (!session || !store) return;
  if (store.length === 0) {
    maskLabels = null;
    confidenceValues = null;
    redrawOverlay();
    status("no strokes: cleared mask");
    return;
  }
  status("propagating...");
  try {
    const resp = await client.submitStrokes(session.id, store.list());
    maskLabels = await pngToGray(resp.mask_png, session.width, session.height);
    confidenceValues = await pngToGray(resp.confidence_png, session.width, session.height);
    redrawOverlay();
    status(`mask updated in ${resp.ms.toFixed(0)} ms (${store.length} strokes)`);
  } catch (err) {
    if ((err as Error).name === "AbortError") return; // superseded submission
    status(`error: ${(err as Error).message}`);
  }
  updateButtons();
}

function updateButtons(): void {
  const hasStrokes = !!store && store.length > 0;
  ($("submit") as HTMLButtonElement).disabled = !hasStrokes;
  ($("undo") as HTMLButtonElement).disabled = !hasStrokes;
  ($("export") as HTMLButtonElement).disabled = !hasStrokes;
}

async function loadImageFile(file: File): Promise<void> {
  const bytes = new Uint8Array(await file.arrayBuffer());
  let binary = "";
  bytes.forEach((b) => (binary += String.fromCharCode(b)));
  const base64 = btoa(binary);
  status("creating session (precomputing superpixels and affinities)...");
  const fullGrid = ($("full-grid") as HTMLInputElement).checked;
  session = await client.createSession(base64, fullGrid);
  store = new StrokeStore(session.width, session.height);
  maskLabels = null;
  confidenceValues = null;
  for (const canvas of [imageCanvas, overlayCanvas, scribbleCanvas]) {
    canvas.width = session.width;
    canvas.height = session.height;
  }
  imageBitmap = await createImageBitmap(file);
  imageCanvas.getContext("2d")!.drawImage(imageBitmap, 0, 0);
  redrawScribbles();
  redrawOverlay();
  updateButtons();
  const counts = session.superpixel_counts.map((c) => `${c.space}/k${c.k}:${c.count}`).join(" ");
  status(`session ${session.id.slice(0, 8)} ready; superpixels ${counts}`);
}

function wireEvents(): void {
  $("image-input").addEventListener("change", (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) void loadImageFile(file);
  });

  scribbleCanvas.addEventListener("pointerdown", (event) => {
    if (!store) return;
    scribbleCanvas.setPointerCapture(event.pointerId);
    const width = Number(($("brush") as HTMLInputElement).value);
    drawing = { class_id: activeClass, width_px: width, points: [canvasPoint(event)] };
    redrawScribbles();
  });
  scribbleCanvas.addEventListener("pointermove", (event) => {
    if (!drawing) return;
    drawing.points.push(canvasPoint(event));
    redrawScribbles();
  });
  scribbleCanvas.addEventListener("pointerup", () => {
    if (!drawing || !store) return;
    store.add(drawing);
    drawing = null;
    redrawScribbles();
    updateButtons();
    void submit();
  });

  $("undo").addEventListener("click", () => {
    if (!store) return;
    store.undo();
    redrawScribbles();
    updateButtons();
    void submit();
  });
  $("clear").addEventListener("click", () => {
    if (!store) return;
    store.clear();
    redrawScribbles();
    updateButtons();
    void submit();
  });
  $("submit").addEventListener("click", () => void submit());

  $("export").addEventListener("click", () => {
    if (!store) return;
    const blob = new Blob([store.exportJson()], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "scribbles.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });
  $("import-input").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file || !session) return;
    store = StrokeStore.fromJson(await file.text());
    redrawScribbles();
    updateButtons();
    void submit();
  });

  $("opacity").addEventListener("input", redrawOverlay);
  $("show-confidence").addEventListener("change", redrawOverlay);
  $("brush").addEventListener(
    "input",
    () => ($("brush-value").textContent = ($("brush") as HTMLInputElement).value),
  );
}

buildPalette();
wireEvents();
updateButtons();
status("load an image to begin");
