/**
 * Typed client for the segmentation session service.
 *
 * One request is in flight per session at a time: a new submission aborts
 * the pending one (last writer wins).
 */

import type { MaskResponse, SessionInfo, UiStroke } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseError(resp: Response): Promise<never> {
  let detail = resp.statusText;
  try {
    const body = (await resp.json()) as { detail?: string };
    if (body.detail) detail = JSON.stringify(body.detail);
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export class SegmentationClient {
  private pending: AbortController | null = null;

  constructor(readonly baseUrl: string = "") {}

  async createSession(imagePngBase64: string, fullGrid = false): Promise<SessionInfo> {
    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ image_png: imagePngBase64, full_grid: fullGrid }),
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as SessionInfo;
  }

  async submitStrokes(sessionId: string, strokes: readonly UiStroke[]): Promise<MaskResponse> {
    this.pending?.abort();
    const controller = new AbortController();
    this.pending = controller;
    try {
      const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/scribbles`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ strokes }),
        signal: controller.signal,
      });
      if (!resp.ok) await parseError(resp);
      return (await resp.json()) as MaskResponse;
    } finally {
      if (this.pending === controller) this.pending = null;
    }
  }

  async lastMask(sessionId: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/mask`);
    if (!resp.ok) await parseError(resp);
    return ((await resp.json()) as { mask_png: string }).mask_png;
  }

  async deleteSession(sessionId: string): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" });
    if (!resp.ok && resp.status !== 404) await parseError(resp);
  }
}
